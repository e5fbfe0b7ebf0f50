#include "fockwin/pipeline.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <ostream>

#include "fockwin/io.hpp"

namespace fockwin {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <typename F>
double or_nan(F f) {
  try {
    return f();
  } catch (const PatternError&) {
    return kNaN;
  } catch (const DomainError&) {
    return kNaN;
  }
}

}  // namespace

Trajectory<double> simulate(const Scenario& s) {
  validate(s);
  return evolve_ode(initial_density(s), s.params, s.model, time_grid(s), IntegratorOptions{s.substeps});
}

std::optional<XPattern> closed_form_pattern(const Scenario& s) {
  if (s.initial.kind == InitialKind::Epr) return XPattern::Epr;
  if (s.initial.kind == InitialKind::Noon) return XPattern::Noon;
  return std::nullopt;
}

std::vector<CorrelationRow> correlation_series(const Scenario& s, const Trajectory<double>& traj) {
  const auto pat = closed_form_pattern(s);
  std::vector<CorrelationRow> rows;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& rho = traj.states[k];
    CorrelationRow r;
    r.t = traj.times[k];
    r.report = correlation_report(rho);
    r.concurrence_closed = r.log_negativity_closed = r.discord_closed = kNaN;
    if (pat) {
      const bool epr = *pat == XPattern::Epr;
      r.concurrence_closed = or_nan([&] { return epr ? concurrence_x_epr(rho) : concurrence_x_noon(rho); });
      r.log_negativity_closed =
          or_nan([&] { return epr ? log_negativity_x_epr(rho) : log_negativity_x_noon(rho); });
      r.discord_closed = or_nan([&] {
        require_pattern(rho, *pat);
        return discord_x(rho);
      });
    }
    rows.push_back(r);
  }
  return rows;
}

std::vector<WignerRow> wigner_series(const Scenario& s, const Trajectory<double>& traj) {
  std::vector<WignerRow> rows;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    rows.push_back({traj.times[k], wigner_joint(traj.states[k], {0.0, 0.0}, {0.0, 0.0}, s.params.window,
                                                s.wigner.elements)});
  }
  return rows;
}

std::vector<VolumeRow> volume_series(const Scenario& s, const Trajectory<double>& traj) {
  const auto& g = s.wigner.grid;
  const auto& w = s.params.window;
  const auto src = s.wigner.elements;
  const auto ka = make_k_table<double>(g, w.n1, src);
  const auto kb = w.m1 == w.n1 ? ka : make_k_table<double>(g, w.m1, src);
  const auto ka2 = make_k_table<double>(g.coarse(), w.n1, src);
  const auto kb2 = w.m1 == w.n1 ? ka2 : make_k_table<double>(g.coarse(), w.m1, src);
  std::vector<VolumeRow> rows;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    rows.push_back({traj.times[k], negativity_volume(traj.states[k], ka, kb, ka2, kb2, s.wigner.tolerance)});
  }
  return rows;
}

std::vector<TeleportRow> teleport_series(const Scenario& s, const Trajectory<double>& traj) {
  if (!s.teleport) throw DomainError("scenario has no [teleport] section");
  const auto in = input_state(s.teleport->p, s.teleport->q);
  const auto pat = closed_form_pattern(s);
  std::vector<TeleportRow> rows;
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& ch = traj.states[k];
    const auto res = teleport_general(ch, in, s.teleport->order);
    TeleportRow r;
    r.t = traj.times[k];
    r.fidelity = res.fidelity;
    r.out = res.teleported_measures;
    r.weight_sum = res.weight_sum;
    r.input_physical = !in.non_physical;
    r.fidelity_closed = r.c1 = r.c2 = r.c3 = kNaN;
    r.printed = {kNaN, kNaN, kNaN};
    if (pat) {
      try {
        const auto cf = *pat == XPattern::Epr ? closed_form_epr(ch, in.p, in.q) : closed_form_noon(ch, in.p, in.q);
        r.c1 = cf.c1, r.c2 = cf.c2, r.c3 = cf.c3;
        r.fidelity_closed = cf.fidelity;
        r.printed = printed_output_measures(cf);
      } catch (const PatternError&) {
      }
    }
    rows.push_back(r);
  }
  return rows;
}

void run_evolve(const Scenario& s, std::ostream& os) { write_trajectory(os, describe(s), simulate(s)); }

void run_correlations(const Scenario& s, std::ostream& os) {
  const auto rows = correlation_series(s, simulate(s));
  CsvWriter w(os, describe(s),
              {"t", "N", "LN", "C", "QD", "I", "CC", "purity", "trace", "C_closed", "LN_closed", "QD_closed"});
  for (const auto& r : rows) {
    const auto& c = r.report;
    w.row({r.t, c.negativity, c.log_negativity, c.concurrence, c.discord, c.mutual_information,
           c.classical_correlation, c.purity, c.trace, r.concurrence_closed, r.log_negativity_closed,
           r.discord_closed});
  }
}

void run_wigner(const Scenario& s, std::ostream& os) {
  const auto rows = wigner_series(s, simulate(s));
  CsvWriter w(os, describe(s) + " point=(alpha=0,beta=0)", {"t", "W"});
  for (const auto& r : rows) w.row({r.t, r.w_origin});
}

void run_wigner_slice(const Scenario& s, std::ostream& os) {
  const auto traj = simulate(s);
  const auto slice = wigner_slice(traj.states.back(), s.wigner.grid, s.params.window, s.wigner.elements);
  write_wigner_slice(os, describe(s) + " slice=(im_alpha=0,im_beta=0) t=" + format_real(traj.times.back()),
                     s.wigner.grid, slice);
}

void run_volume(const Scenario& s, std::ostream& os) {
  const auto rows = volume_series(s, simulate(s));
  CsvWriter w(os, describe(s), {"t", "V", "V_coarse", "integral_W", "integral_W_coarse", "converged"});
  for (const auto& r : rows) {
    const auto& v = r.volume;
    w.row({r.t, v.volume, v.volume_coarse, v.integral, v.integral_coarse, v.converged ? 1.0 : 0.0});
  }
}

void run_teleport(const Scenario& s, std::ostream& os) {
  const auto rows = teleport_series(s, simulate(s));
  CsvWriter w(os, describe(s),
              {"t", "F", "F_closed", "C_out", "LN_out", "QD_out", "c1", "c2", "c3", "C_out_paper",
               "LN_out_paper", "QD_out_paper", "weight_sum", "input_physical", "F_above_classical",
               "F_closed_above_classical"});
  for (const auto& r : rows) {
    w.row({r.t, r.fidelity, r.fidelity_closed, r.out.concurrence, r.out.log_negativity, r.out.discord, r.c1, r.c2,
           r.c3, r.printed.concurrence, r.printed.log_negativity, r.printed.discord, r.weight_sum,
           r.input_physical ? 1.0 : 0.0, r.fidelity > kClassicalFidelity ? 1.0 : 0.0,
           r.fidelity_closed > kClassicalFidelity ? 1.0 : 0.0});
  }
}

namespace {

void write_populations(const Scenario& s, std::ostream& os) {
  const auto traj = simulate(s);
  CsvWriter w(os, describe(s), {"t", "rho11", "rho22", "rho33", "rho44", "abs_rho14", "abs_rho23", "trace"});
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& r = traj.states[k];
    w.row({traj.times[k], r(0, 0).real(), r(1, 1).real(), r(2, 2).real(), r(3, 3).real(), std::abs(r(0, 3)),
           std::abs(r(1, 2)), r.trace().real()});
  }
}

}  // namespace

std::vector<std::string> run_figures(const std::string& id, const std::string& out_dir) {
  const auto panels = figure_panels(id);
  std::filesystem::create_directories(out_dir);
  std::vector<std::string> written;
  for (const auto& p : panels) {
    const auto path = (std::filesystem::path(out_dir) / p.file).string();
    std::ofstream f(path);
    if (!f) throw DomainError("cannot write '" + path + "'");
    switch (p.kind) {
      case PanelKind::Correlations: run_correlations(p.scenario, f); break;
      case PanelKind::Populations: write_populations(p.scenario, f); break;
      case PanelKind::Wigner: run_wigner(p.scenario, f); break;
      case PanelKind::Volume: run_volume(p.scenario, f); break;
      case PanelKind::Teleport: run_teleport(p.scenario, f); break;
    }
    written.push_back(path);
  }
  return written;
}

}  // namespace fockwin
