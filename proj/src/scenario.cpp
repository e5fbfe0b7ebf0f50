#include "fockwin/scenario.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "fockwin/io.hpp"
#include "fockwin/states.hpp"

namespace fockwin {

namespace pt = boost::property_tree;

std::string to_string(ClosureMode m) { return m == ClosureMode::Leaky ? "leaky" : "paper"; }
std::string to_string(EquationForm f) { return f == EquationForm::Strict ? "strict" : "corrected"; }
std::string to_string(IndexOrder o) { return o == IndexOrder::Printed ? "printed" : "symmetric"; }

std::string to_string(ElementSource e) {
  switch (e) {
    case ElementSource::Oracle: return "oracle";
    case ElementSource::Closed: return "closed";
    case ElementSource::Paper: return "paper";
  }
  return "?";
}

std::string to_string(InitialKind k) {
  switch (k) {
    case InitialKind::Epr: return "epr";
    case InitialKind::Noon: return "noon";
    case InitialKind::Superposition: return "superposition";
    case InitialKind::CoherentProduct: return "coherent";
  }
  return "?";
}

std::string describe(const DampingModel& model) {
  return std::visit(
      [](const auto& m) -> std::string {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Markovian>) {
          return "markovian(gamma_m=" + format_real(m.gamma_m) + ")";
        } else if constexpr (std::is_same_v<M, NonMarkovianOhmic>) {
          return "nonmarkovian(omega0=" + format_real(m.omega0) + ",r=" + format_real(m.r) + ")";
        } else {
          return "kernel(omega_c=" + format_real(m.omega_c) + ")";
        }
      },
      model);
}

ClosureMode parse_closure(const std::string& s) {
  if (s == "leaky") return ClosureMode::Leaky;
  if (s == "paper") return ClosureMode::PaperClosure;
  throw DomainError("closure must be leaky|paper, got '" + s + "'");
}

EquationForm parse_form(const std::string& s) {
  if (s == "corrected") return EquationForm::Corrected;
  if (s == "strict") return EquationForm::Strict;
  throw DomainError("form must be corrected|strict, got '" + s + "'");
}

IndexOrder parse_index_order(const std::string& s) {
  if (s == "symmetric") return IndexOrder::Symmetric;
  if (s == "printed") return IndexOrder::Printed;
  throw DomainError("index order must be printed|symmetric, got '" + s + "'");
}

ElementSource parse_elements(const std::string& s) {
  if (s == "oracle") return ElementSource::Oracle;
  if (s == "closed") return ElementSource::Closed;
  if (s == "paper") return ElementSource::Paper;
  throw DomainError("elements must be oracle|closed|paper, got '" + s + "'");
}

namespace {

template <typename T>
T required(const pt::ptree& t, const std::string& key) {
  const auto v = t.get_optional<std::string>(key);
  if (!v) throw DomainError("scenario is missing '" + key + "'");
  std::istringstream is(*v);
  T out{};
  if (!(is >> out) || !(is >> std::ws).eof()) {
    throw DomainError("scenario field '" + key + "' has invalid value '" + *v + "'");
  }
  return out;
}

template <typename T>
T optional(const pt::ptree& t, const std::string& key, T fallback) {
  return t.get_optional<std::string>(key) ? required<T>(t, key) : fallback;
}

std::complex<double> amplitude(const pt::ptree& t, const std::string& key) {
  const auto v = t.get_optional<std::string>(key);
  return v ? parse_complex(*v) : std::complex<double>{};
}

}  // namespace

void validate(const Scenario& s) {
  check_params(s.params);
  check_model(s.model);
  if (!(s.t_max >= 0)) throw DomainError("t_max must be >= 0");
  if (s.t_max > 0 && s.steps < 2) throw DomainError("steps must be >= 2");
  if (s.substeps < 1) throw DomainError("substeps must be >= 1");
  if (s.initial.kind == InitialKind::CoherentProduct && !(s.initial.nbar_prime >= 0)) {
    throw DomainError("nbar_prime must be >= 0");
  }
  if (s.teleport) {
    if (!(s.teleport->p >= 0 && s.teleport->p <= 1)) throw DomainError("p must lie in [0,1]");
    if (!(s.teleport->q > 0)) throw DomainError("q must be > 0");
  }
  check_grid(s.wigner.grid);
  if (!(s.wigner.tolerance > 0)) throw DomainError("wigner tolerance must be > 0");
}

Scenario parse_scenario(std::istream& is) {
  pt::ptree t;
  try {
    pt::read_ini(is, t);
  } catch (const pt::ini_parser_error& e) {
    throw DomainError(std::string("scenario parse error: ") + e.what());
  }
  const int schema = required<int>(t, "schema");
  if (schema != kScenarioSchema) {
    throw DomainError("unsupported scenario schema " + std::to_string(schema));
  }
  Scenario s;
  s.name = optional<std::string>(t, "name", s.name);

  const std::string kind = required<std::string>(t, "state.kind");
  if (kind == "epr") {
    s.initial.kind = InitialKind::Epr;
  } else if (kind == "noon") {
    s.initial.kind = InitialKind::Noon;
  } else if (kind == "superposition") {
    s.initial.kind = InitialKind::Superposition;
  } else if (kind == "coherent") {
    s.initial.kind = InitialKind::CoherentProduct;
    s.initial.nbar_prime = required<double>(t, "state.nbar_prime");
    const auto rule = optional<std::string>(t, "state.amplitudes", "paper");
    if (rule == "paper") {
      s.initial.rule = AmplitudeRule::Paper;
    } else if (rule == "projection") {
      s.initial.rule = AmplitudeRule::Projection;
    } else {
      throw DomainError("state.amplitudes must be paper|projection");
    }
  } else {
    throw DomainError("state.kind must be epr|noon|superposition|coherent, got '" + kind + "'");
  }
  s.initial.a = amplitude(t, "state.a");
  s.initial.b = amplitude(t, "state.b");
  s.initial.c = amplitude(t, "state.c");
  s.initial.d = amplitude(t, "state.d");

  s.params.window.n1 = required<int>(t, "window.n1");
  s.params.window.m1 = required<int>(t, "window.m1");

  s.params.nbar = optional<double>(t, "reservoir.nbar", 0.0);
  const std::string model = required<std::string>(t, "reservoir.model");
  if (model == "markovian") {
    s.model = Markovian{required<double>(t, "reservoir.gamma_m")};
  } else if (model == "nonmarkovian") {
    s.model = NonMarkovianOhmic{required<double>(t, "reservoir.omega0"), required<double>(t, "reservoir.r")};
  } else if (model == "kernel") {
    s.model = KernelIntegral{required<double>(t, "reservoir.omega_c")};
  } else {
    throw DomainError("reservoir.model must be markovian|nonmarkovian|kernel, got '" + model + "'");
  }

  s.params.closure = parse_closure(optional<std::string>(t, "evolution.closure", "leaky"));
  s.params.form = parse_form(optional<std::string>(t, "evolution.form", "corrected"));
  s.t_max = required<double>(t, "evolution.t_max");
  s.steps = optional<int>(t, "evolution.steps", s.steps);
  s.substeps = optional<int>(t, "evolution.substeps", s.substeps);

  if (t.get_child_optional("teleport")) {
    TeleportSpec tp;
    tp.p = required<double>(t, "teleport.p");
    tp.q = required<double>(t, "teleport.q");
    tp.order = parse_index_order(optional<std::string>(t, "teleport.index_order", "symmetric"));
    s.teleport = tp;
  }

  s.wigner.grid.extent = optional<double>(t, "wigner.extent", default_extent(s.params.window));
  s.wigner.grid.points = optional<int>(t, "wigner.points", s.wigner.grid.points);
  s.wigner.elements = parse_elements(optional<std::string>(t, "wigner.elements", "oracle"));
  s.wigner.tolerance = optional<double>(t, "wigner.tolerance", s.wigner.tolerance);

  validate(s);
  return s;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw DomainError("cannot open scenario file '" + path + "'");
  return parse_scenario(f);
}

void write_scenario(std::ostream& os, const Scenario& s) {
  os << "schema = " << kScenarioSchema << "\nname = " << s.name << "\n\n[state]\nkind = "
     << to_string(s.initial.kind) << '\n';
  if (s.initial.kind == InitialKind::CoherentProduct) {
    os << "nbar_prime = " << format_real(s.initial.nbar_prime) << "\namplitudes = "
       << (s.initial.rule == AmplitudeRule::Paper ? "paper" : "projection") << '\n';
  } else {
    os << "a = " << format_complex(s.initial.a) << "\nb = " << format_complex(s.initial.b)
       << "\nc = " << format_complex(s.initial.c) << "\nd = " << format_complex(s.initial.d) << '\n';
  }
  os << "\n[window]\nn1 = " << s.params.window.n1 << "\nm1 = " << s.params.window.m1 << '\n';
  os << "\n[reservoir]\nnbar = " << format_real(s.params.nbar) << '\n';
  std::visit(
      [&](const auto& m) {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, Markovian>) {
          os << "model = markovian\ngamma_m = " << format_real(m.gamma_m) << '\n';
        } else if constexpr (std::is_same_v<M, NonMarkovianOhmic>) {
          os << "model = nonmarkovian\nomega0 = " << format_real(m.omega0) << "\nr = " << format_real(m.r)
             << '\n';
        } else {
          os << "model = kernel\nomega_c = " << format_real(m.omega_c) << '\n';
        }
      },
      s.model);
  os << "\n[evolution]\nclosure = " << to_string(s.params.closure) << "\nform = " << to_string(s.params.form)
     << "\nt_max = " << format_real(s.t_max) << "\nsteps = " << s.steps << "\nsubsteps = " << s.substeps
     << '\n';
  if (s.teleport) {
    os << "\n[teleport]\np = " << format_real(s.teleport->p) << "\nq = " << format_real(s.teleport->q)
       << "\nindex_order = " << to_string(s.teleport->order) << '\n';
  }
  os << "\n[wigner]\nextent = " << format_real(s.wigner.grid.extent) << "\npoints = " << s.wigner.grid.points
     << "\nelements = " << to_string(s.wigner.elements) << "\ntolerance = " << format_real(s.wigner.tolerance)
     << '\n';
}

DensityMatrixd initial_density(const Scenario& s) {
  const auto& in = s.initial;
  switch (in.kind) {
    case InitialKind::Epr: return build_epr(in.a, in.d);
    case InitialKind::Noon: return build_noon(in.b, in.c);
    case InitialKind::Superposition:
      return build_pure(normalized(Amplitudes<double>{in.a, in.b, in.c, in.d}));
    case InitialKind::CoherentProduct: {
      const auto set = in.rule == AmplitudeRule::Paper
                           ? coherent_amplitudes_paper(in.nbar_prime, s.params.window)
                           : projection_amplitudes(in.nbar_prime, s.params.window);
      return build_pure(set.normalized);
    }
  }
  throw DomainError("unknown initial state");
}

std::vector<double> time_grid(const Scenario& s) { return uniform_grid(s.t_max, s.steps); }

std::string describe(const Scenario& s) {
  std::ostringstream os;
  os << "scenario name=" << s.name << " state=" << to_string(s.initial.kind);
  if (s.initial.kind == InitialKind::CoherentProduct) {
    os << "(nbar_prime=" << format_real(s.initial.nbar_prime)
       << ",amplitudes=" << (s.initial.rule == AmplitudeRule::Paper ? "paper" : "projection") << ")";
  } else {
    os << "(a=" << format_complex(s.initial.a) << ",b=" << format_complex(s.initial.b)
       << ",c=" << format_complex(s.initial.c) << ",d=" << format_complex(s.initial.d) << ")";
  }
  os << " window=(" << s.params.window.n1 << "," << s.params.window.m1 << ") nbar=" << format_real(s.params.nbar)
     << " model=" << describe(s.model) << " closure=" << to_string(s.params.closure)
     << " form=" << to_string(s.params.form) << " t_max=" << format_real(s.t_max) << " steps=" << s.steps
     << " substeps=" << s.substeps;
  if (s.teleport) {
    os << " teleport(p=" << format_real(s.teleport->p) << ",q=" << format_real(s.teleport->q)
       << ",index_order=" << to_string(s.teleport->order) << ")";
  }
  os << " wigner(extent=" << format_real(s.wigner.grid.extent) << ",points=" << s.wigner.grid.points
     << ",elements=" << to_string(s.wigner.elements) << ",tolerance=" << format_real(s.wigner.tolerance) << ")"
     << " discord=x-closed-form(printed sign,log D2,sum s)";
  return os.str();
}

// -------------------------------------------------------------------------
// figure presets

namespace {

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

Scenario base(const std::string& name, InitialKind kind, int m1, const DampingModel& model, double t_max) {
  Scenario s;
  s.name = name;
  s.initial.kind = kind;
  if (kind == InitialKind::Epr) {
    s.initial.a = s.initial.d = kInvSqrt2;
  } else if (kind == InitialKind::Noon) {
    s.initial.b = s.initial.c = kInvSqrt2;
  } else {
    s.initial.a = s.initial.b = s.initial.c = s.initial.d = 0.5;
  }
  s.params.window = {m1, m1};
  s.params.closure = ClosureMode::PaperClosure;
  s.model = model;
  s.t_max = t_max;
  s.wigner.grid.extent = default_extent(s.params.window);
  return s;
}

Scenario markov(const std::string& name, InitialKind kind, int m1) {
  return base(name, kind, m1, Markovian{1.0}, 5.0);
}

// Time spans keep the non-Markovian rate positive over the plotted window.
Scenario nonmarkov(const std::string& name, InitialKind kind, int m1, double r) {
  const double t_max = r >= 5 ? 0.5 : (r >= 1 ? 1.0 : 5.0);
  return base(name, kind, m1, NonMarkovianOhmic{1.0, r}, t_max);
}

Scenario with_teleport(Scenario s, double p, double q) {
  s.teleport = TeleportSpec{p, q, IndexOrder::Symmetric};
  return s;
}

std::string tag(double r) { return r == 0.1 ? "r0.1" : (r == 1 ? "r1" : "r5"); }

}  // namespace

std::vector<std::string> figure_ids() {
  return {"fig2", "fig3", "fig4", "fig5", "fig6", "fig7", "fig8", "fig9"};
}

std::vector<FigurePanel> figure_panels(const std::string& id) {
  using K = InitialKind;
  std::vector<FigurePanel> out;
  if (id == "fig2") {
    const auto s = markov("fig2", K::Epr, 0);
    out.push_back({"fig2a_correlations.csv", PanelKind::Correlations, s});
    out.push_back({"fig2b_populations.csv", PanelKind::Populations, s});
  } else if (id == "fig3") {
    const char* panel = "abc";
    int i = 0;
    for (double r : {1.0, 0.1, 5.0}) {
      const auto s = nonmarkov("fig3" + std::string(1, panel[i]) + "_" + tag(r), K::Epr, 0, r);
      out.push_back({s.name + "_correlations.csv", PanelKind::Correlations, s});
      ++i;
    }
    const auto d = nonmarkov("fig3d_r1", K::Epr, 0, 1.0);
    out.push_back({"fig3d_r1_populations.csv", PanelKind::Populations, d});
  } else if (id == "fig4") {
    for (const auto& s : {markov("fig4a_m0", K::Noon, 0), markov("fig4b_m1", K::Noon, 1),
                          nonmarkov("fig4c_m0_r1", K::Noon, 0, 1.0), nonmarkov("fig4d_m0_r0.1", K::Noon, 0, 0.1)}) {
      out.push_back({s.name + "_correlations.csv", PanelKind::Correlations, s});
    }
  } else if (id == "fig5") {
    for (auto s : {markov("fig5a_m0", K::Superposition, 0), markov("fig5b_m2", K::Superposition, 2),
                   nonmarkov("fig5c_m0_r1", K::Superposition, 0, 1.0),
                   nonmarkov("fig5d_m2_r1", K::Superposition, 2, 1.0)}) {
      s.steps = 51;
      // the m = 2 window oscillates faster than 32 points resolve
      if (s.params.window.m1 == 2) {
        s.wigner.grid.points = 128;
        s.wigner.elements = ElementSource::Closed;
      }
      out.push_back({s.name + "_wigner.csv", PanelKind::Wigner, s});
      out.push_back({s.name + "_volume.csv", PanelKind::Volume, s});
    }
  } else if (id == "fig6") {
    const auto s = with_teleport(markov("fig6_m0", K::Epr, 0), 0.99, 0.97);
    out.push_back({"fig6_teleport.csv", PanelKind::Teleport, s});
  } else if (id == "fig7") {
    const char* panel = "abc";
    int i = 0;
    for (double r : {1.0, 0.1, 5.0}) {
      const auto s = with_teleport(nonmarkov("fig7" + std::string(1, panel[i++]) + "_" + tag(r), K::Epr, 0, r),
                                   0.99, 0.97);
      out.push_back({s.name + "_teleport.csv", PanelKind::Teleport, s});
    }
  } else if (id == "fig8") {
    const auto a = with_teleport(markov("fig8a_m0_q0.97", K::Noon, 0), 0.99, 0.97);
    const auto b = with_teleport(markov("fig8b_m1_q0.99", K::Noon, 1), 0.99, 0.99);
    out.push_back({a.name + "_teleport.csv", PanelKind::Teleport, a});
    out.push_back({b.name + "_teleport.csv", PanelKind::Teleport, b});
  } else if (id == "fig9") {
    const char* panel = "abc";
    int i = 0;
    for (double r : {1.0, 0.1, 5.0}) {
      const auto s = with_teleport(nonmarkov("fig9" + std::string(1, panel[i++]) + "_" + tag(r), K::Noon, 0, r),
                                   0.99, 0.99);
      out.push_back({s.name + "_teleport.csv", PanelKind::Teleport, s});
    }
  } else {
    throw DomainError("unknown figure id '" + id + "'");
  }
  return out;
}

}  // namespace fockwin
