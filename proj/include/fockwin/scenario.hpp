#pragma once

#include <complex>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fockwin/damping.hpp"
#include "fockwin/dynamics.hpp"
#include "fockwin/teleport.hpp"
#include "fockwin/wigner.hpp"

namespace fockwin {

inline constexpr int kScenarioSchema = 1;

enum class InitialKind {
  Epr,              ///< a|n1,m1> + d|n1+1,m1+1>
  Noon,             ///< b|n1,m1+1> + c|n1+1,m1>
  Superposition,    ///< general a, b, c, d, renormalized
  CoherentProduct,  ///< window amplitudes of |alpha>|beta>
};

enum class AmplitudeRule { Paper, Projection };

struct InitialState {
  InitialKind kind = InitialKind::Epr;
  std::complex<double> a{}, b{}, c{}, d{};
  double nbar_prime = 0.0;
  AmplitudeRule rule = AmplitudeRule::Paper;
};

struct TeleportSpec {
  double p = 0.0;
  double q = 1.0;
  IndexOrder order = IndexOrder::Symmetric;
};

struct WignerSpec {
  PhaseSpaceGrid grid;
  ElementSource elements = ElementSource::Oracle;
  double tolerance = kVolumeTolerance;
};

struct Scenario {
  std::string name = "scenario";
  InitialState initial;
  EvolutionParams params;
  DampingModel model = Markovian{1.0};
  double t_max = 5.0;
  int steps = 201;
  int substeps = 100;
  std::optional<TeleportSpec> teleport;
  WignerSpec wigner;
};

void validate(const Scenario& s);

/// INI text: top-level "schema" and "name", sections [state], [window],
/// [reservoir], [evolution], [teleport], [wigner].
Scenario parse_scenario(std::istream& is);
Scenario load_scenario(const std::string& path);
void write_scenario(std::ostream& os, const Scenario& s);

DensityMatrixd initial_density(const Scenario& s);
std::vector<double> time_grid(const Scenario& s);

/// Single-line description for CSV comment lines.
std::string describe(const Scenario& s);

std::string to_string(InitialKind k);
std::string to_string(IndexOrder o);
std::string to_string(ElementSource e);
ClosureMode parse_closure(const std::string& s);
EquationForm parse_form(const std::string& s);
IndexOrder parse_index_order(const std::string& s);
ElementSource parse_elements(const std::string& s);

/// Named figure panel: the scenario plus what to compute.
enum class PanelKind { Correlations, Populations, Wigner, Volume, Teleport };

struct FigurePanel {
  std::string file;  ///< output file name
  PanelKind kind;
  Scenario scenario;
};

std::vector<std::string> figure_ids();
/// Throws DomainError for an unknown id.
std::vector<FigurePanel> figure_panels(const std::string& id);

}  // namespace fockwin
