#include "fockwin/io.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace fockwin {

std::string format_real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string format_complex(std::complex<double> z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.17g%+.17gj", z.real(), z.imag());
  return buf;
}

namespace {

double to_double(const std::string& s, const std::string& whole) {
  std::size_t pos = 0;
  double v = 0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw DomainError("cannot parse number '" + whole + "'");
  }
  if (pos != s.size()) throw DomainError("cannot parse number '" + whole + "'");
  return v;
}

}  // namespace

std::complex<double> parse_complex(const std::string& text) {
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s += c;
  if (s.empty()) throw DomainError("empty complex literal");
  if (s.back() != 'j') return {to_double(s, text), 0.0};
  s.pop_back();
  // split at the last sign that is not an exponent sign or the leading sign
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;) {
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  }
  if (split == std::string::npos) return {0.0, to_double(s, text)};
  return {to_double(s.substr(0, split), text), to_double(s.substr(split), text)};
}

void write_matrix(std::ostream& os, const DensityMatrixd& rho) {
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) os << (j ? " " : "") << format_complex(rho(i, j));
    os << '\n';
  }
}

DensityMatrixd read_matrix(std::istream& is) {
  DensityMatrixd rho;
  std::string line;
  int row = 0;
  while (row < 4 && std::getline(is, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    std::string tok;
    int col = 0;
    while (ls >> tok) {
      if (col >= 4) throw DomainError("matrix row has more than 4 entries");
      rho(row, col++) = parse_complex(tok);
    }
    if (col != 4) throw DomainError("matrix row has fewer than 4 entries");
    ++row;
  }
  if (row != 4) throw DomainError("matrix block needs 4 rows");
  return rho;
}

CsvWriter::CsvWriter(std::ostream& os, const std::string& comment,
                     const std::vector<std::string>& header)
    : os_(os), width_(header.size()) {
  os_ << "# " << comment << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) os_ << (i ? "," : "") << header[i];
  os_ << '\n';
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != width_) throw DomainError("CSV row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << format_real(values[i]);
  os_ << '\n';
}

std::vector<std::string> trajectory_header() {
  std::vector<std::string> h{"t"};
  for (int i = 1; i <= 4; ++i)
    for (int j = 1; j <= 4; ++j) {
      const std::string e = "rho" + std::to_string(i) + std::to_string(j);
      h.push_back(e + "_re");
      h.push_back(e + "_im");
    }
  h.push_back("trace");
  h.push_back("min_eigenvalue");
  return h;
}

void write_trajectory(std::ostream& os, const std::string& comment, const Trajectory<double>& traj) {
  CsvWriter w(os, comment, trajectory_header());
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    const auto& r = traj.states[k];
    std::vector<double> row{traj.times[k]};
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        row.push_back(r(i, j).real());
        row.push_back(r(i, j).imag());
      }
    row.push_back(r.trace().real());
    row.push_back(min_eigenvalue(r));
    w.row(row);
  }
}

void write_wigner_field(std::ostream& os, const std::string& comment, const WignerField<double>& f) {
  CsvWriter w(os, comment, {"re_alpha", "im_alpha", "re_beta", "im_beta", "W"});
  const int n = f.grid.points;
  for (int a = 0; a < n * n; ++a)
    for (int b = 0; b < n * n; ++b)
      w.row({f.grid.coord(a / n), f.grid.coord(a % n), f.grid.coord(b / n), f.grid.coord(b % n),
             f.values(a, b)});
}

void write_wigner_slice(std::ostream& os, const std::string& comment, const PhaseSpaceGrid& grid,
                        const Eigen::MatrixXd& slice) {
  CsvWriter w(os, comment, {"re_alpha", "re_beta", "W"});
  for (int a = 0; a < grid.points; ++a)
    for (int b = 0; b < grid.points; ++b) w.row({grid.coord(a), grid.coord(b), slice(a, b)});
}

}  // namespace fockwin
