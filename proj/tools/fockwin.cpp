// Command-line front end: fockwin <subcommand> --scenario file.ini [--out path]

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "fockwin/pipeline.hpp"
#include "fockwin/scenario.hpp"

namespace {

enum Exit { kOk = 0, kConfig = 2, kIntegration = 3, kQuadrature = 4 };

struct Overrides {
  std::string scenario;
  std::string out;
  std::string mode;
  std::string elements;
  std::string index_order;
};

fockwin::Scenario load(const Overrides& o) {
  auto s = fockwin::load_scenario(o.scenario);
  if (!o.mode.empty()) s.params.closure = fockwin::parse_closure(o.mode);
  if (!o.elements.empty()) s.wigner.elements = fockwin::parse_elements(o.elements);
  if (!o.index_order.empty()) {
    if (!s.teleport) throw fockwin::DomainError("--index-order given but scenario has no [teleport] section");
    s.teleport->order = fockwin::parse_index_order(o.index_order);
  }
  fockwin::validate(s);
  return s;
}

template <typename F>
void emit(const Overrides& o, F&& run) {
  const auto s = load(o);
  if (o.out.empty() || o.out == "-") {
    run(s, std::cout);
    return;
  }
  const auto parent = std::filesystem::path(o.out).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream f(o.out);
  if (!f) throw fockwin::DomainError("cannot write '" + o.out + "'");
  run(s, f);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-cavity Fock-window dynamics, correlations, Wigner negativity and teleportation"};
  app.require_subcommand(1);
  Overrides o;
  std::string figure;
  std::string figure_dir = "figures";
  bool slice = false;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--scenario", o.scenario, "scenario INI file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output CSV (default stdout)");
    sub->add_option("--mode", o.mode, "closure mode")->check(CLI::IsMember({"leaky", "paper"}));
  };

  auto* evolve = app.add_subcommand("evolve", "trajectory CSV");
  add_common(evolve);
  auto* corr = app.add_subcommand("correlations", "N, LN, C, QD series");
  add_common(corr);
  auto* wig = app.add_subcommand("wigner", "W(0,0) series, or a phase-space slice at the final time");
  add_common(wig);
  wig->add_option("--elements", o.elements, "K element source")->check(CLI::IsMember({"oracle", "closed", "paper"}));
  wig->add_flag("--slice", slice, "export the Im(alpha)=Im(beta)=0 slice at the final time");
  auto* vol = app.add_subcommand("volume", "Wigner negativity volume series");
  add_common(vol);
  vol->add_option("--elements", o.elements, "K element source")->check(CLI::IsMember({"oracle", "closed", "paper"}));
  auto* tel = app.add_subcommand("teleport", "teleportation fidelity and output measures");
  add_common(tel);
  tel->add_option("--index-order", o.index_order, "right Pauli factor order")
      ->check(CLI::IsMember({"printed", "symmetric"}));
  auto* fig = app.add_subcommand("figures", "write the CSV bundle of one figure");
  fig->add_option("figure", figure, "fig2 .. fig9")->required();
  fig->add_option("--out", figure_dir, "output directory")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*evolve) {
      emit(o, fockwin::run_evolve);
    } else if (*corr) {
      emit(o, fockwin::run_correlations);
    } else if (*wig) {
      emit(o, slice ? fockwin::run_wigner_slice : fockwin::run_wigner);
    } else if (*vol) {
      emit(o, fockwin::run_volume);
    } else if (*tel) {
      emit(o, [](const fockwin::Scenario& s, std::ostream& os) {
        if (s.teleport) {
          const auto in = fockwin::input_state(s.teleport->p, s.teleport->q);
          if (in.non_physical) {
            std::cerr << "warning: input state with p=" << s.teleport->p << ", q=" << s.teleport->q
                      << " is not positive semidefinite; measures are formal\n";
          }
        }
        fockwin::run_teleport(s, os);
      });
    } else if (*fig) {
      for (const auto& p : fockwin::run_figures(figure, figure_dir)) std::cout << p << '\n';
    }
  } catch (const fockwin::IntegrationError& e) {
    std::cerr << "integration error at t = " << e.time() << ": " << e.what() << '\n';
    return kIntegration;
  } catch (const fockwin::ConvergenceError& e) {
    std::cerr << "quadrature error: " << e.what() << " (value " << e.value() << ", half resolution "
              << e.coarse_value() << ")\n";
    return kQuadrature;
  } catch (const fockwin::Error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kConfig;
  }
  return kOk;
}
