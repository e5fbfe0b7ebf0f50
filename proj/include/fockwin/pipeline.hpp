#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "fockwin/correlations.hpp"
#include "fockwin/scenario.hpp"
#include "fockwin/teleport.hpp"
#include "fockwin/wigner.hpp"

namespace fockwin {

Trajectory<double> simulate(const Scenario& s);

/// Which closed-form family applies to the scenario's initial state.
std::optional<XPattern> closed_form_pattern(const Scenario& s);

struct CorrelationRow {
  double t = 0.0;
  CorrelationReport report;
  double concurrence_closed = 0.0;  ///< NaN when the X pattern does not hold
  double log_negativity_closed = 0.0;
  double discord_closed = 0.0;
};

std::vector<CorrelationRow> correlation_series(const Scenario& s, const Trajectory<double>& traj);

struct WignerRow {
  double t = 0.0;
  double w_origin = 0.0;
};

std::vector<WignerRow> wigner_series(const Scenario& s, const Trajectory<double>& traj);

struct VolumeRow {
  double t = 0.0;
  VolumeResult volume;
};

/// Throws ConvergenceError on the first non-converged time point.
std::vector<VolumeRow> volume_series(const Scenario& s, const Trajectory<double>& traj);

struct TeleportRow {
  double t = 0.0;
  double fidelity = 0.0;         ///< Tr[rho_un rho_out]
  double fidelity_closed = 0.0;  ///< c1 + q c2, NaN off-pattern
  CorrelationReport out;
  double c1 = 0.0, c2 = 0.0, c3 = 0.0;
  PrintedOutputMeasures printed;
  double weight_sum = 0.0;
  bool input_physical = true;
};

std::vector<TeleportRow> teleport_series(const Scenario& s, const Trajectory<double>& traj);

void run_evolve(const Scenario& s, std::ostream& os);
void run_correlations(const Scenario& s, std::ostream& os);
void run_wigner(const Scenario& s, std::ostream& os);
void run_wigner_slice(const Scenario& s, std::ostream& os);
void run_volume(const Scenario& s, std::ostream& os);
void run_teleport(const Scenario& s, std::ostream& os);

/// Writes one CSV per panel into out_dir and returns their paths.
std::vector<std::string> run_figures(const std::string& id, const std::string& out_dir);

}  // namespace fockwin
