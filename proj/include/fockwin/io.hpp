#pragma once

#include <complex>
#include <iosfwd>
#include <string>
#include <vector>

#include "fockwin/correlations.hpp"
#include "fockwin/dynamics.hpp"
#include "fockwin/types.hpp"
#include "fockwin/wigner.hpp"

namespace fockwin {

/// "re+imj" with 17 significant digits.
std::string format_complex(std::complex<double> z);
/// Inverse of format_complex; also accepts a bare real or "imj".
std::complex<double> parse_complex(const std::string& s);
/// 17 significant digits, "nan"/"inf" for non-finite values.
std::string format_real(double x);

/// 4 lines of 4 whitespace-separated "re+imj" entries.
void write_matrix(std::ostream& os, const DensityMatrixd& rho);
DensityMatrixd read_matrix(std::istream& is);

/// Minimal CSV writer: one comment line, one header, then rows.
class CsvWriter {
 public:
  CsvWriter(std::ostream& os, const std::string& comment, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);

 private:
  std::ostream& os_;
  std::size_t width_;
};

/// Columns of the trajectory export.
std::vector<std::string> trajectory_header();
void write_trajectory(std::ostream& os, const std::string& comment, const Trajectory<double>& traj);

/// Rows (Re a, Im a, Re b, Im b, W) over the full grid.
void write_wigner_field(std::ostream& os, const std::string& comment, const WignerField<double>& f);
/// Rows (Re a, Re b, W) from a wigner_slice matrix.
void write_wigner_slice(std::ostream& os, const std::string& comment, const PhaseSpaceGrid& grid,
                        const Eigen::MatrixXd& slice);

}  // namespace fockwin
