#include "amd/reports.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace amd {
namespace reports {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

json complex_to_json(const Complex& z) { return json::array({z.real(), z.imag()}); }

json matrix_to_json(const Operator& M) {
  json out = json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i)
    for (Eigen::Index j = 0; j < M.cols(); ++j) out.push_back(complex_to_json(M(i, j)));
  return out;
}

Operator matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols) {
  if (!j.is_array() || static_cast<Eigen::Index>(j.size()) != rows * cols)
    throw std::invalid_argument("matrix_from_json: wrong length");
  Operator M(rows, cols);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index jcol = 0; jcol < cols; ++jcol, ++k)
      M(i, jcol) = Complex(j[k][0].get<double>(), j[k][1].get<double>());
  return M;
}

json decomposition_to_json(const Decomposition& dec) {
  json blocks = json::array();
  for (const auto& b : dec.blocks) {
    Eigen::SelfAdjointEigenSolver<Operator> es(b.fixed_state);
    json eigs = json::array();
    for (Eigen::Index i = es.eigenvalues().size() - 1; i >= 0; --i)
      eigs.push_back(es.eigenvalues()(i));
    blocks.push_back({{"m", b.m},
                      {"n", b.n},
                      {"isometry", matrix_to_json(b.isometry)},
                      {"fixed_state", matrix_to_json(b.fixed_state)},
                      {"fixed_state_eigenvalues", eigs},
                      {"internal_hamiltonian", matrix_to_json(b.internal_hamiltonian)},
                      {"residual", b.residual}});
  }
  return json{{"schema_version", 1},
              {"blocks", blocks},
              {"decaying_dim", dec.decaying.dim()},
              {"decaying_basis", matrix_to_json(dec.decaying.columns)},
              {"residual_report", dec.residual_report},
              {"warnings", dec.warnings},
              {"seed", dec.seed}};
}

json gap_report_to_json(const GapReport& rep) {
  json out{{"schema_version", 1},
           {"delta2", rep.delta2},
           {"delta", rep.delta},
           {"s_points", rep.s_grid.size()},
           {"warnings", rep.warnings}};
  if (rep.delta1) out["delta1"] = *rep.delta1;
  return out;
}

json scaling_report_to_json(const ScalingReport& rep) {
  json out{{"schema_version", 1},
           {"T", rep.T_values},
           {"errors", rep.errors},
           {"leakages", rep.leakages},
           {"monotone", rep.monotone},
           {"flat", rep.flat},
           {"envelope_constant", rep.envelope_constant}};
  if (rep.fitted_slope) out["fitted_slope"] = *rep.fitted_slope;
  if (rep.gap) out["gap"] = gap_report_to_json(*rep.gap);
  return out;
}

std::string trajectory_csv(const Trajectory& traj) {
  std::ostringstream os;
  const Eigen::Index d = traj.states.front().rows();
  os << "t";
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) os << ",re_" << i << "_" << j << ",im_" << i << "_" << j;
  os << "\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    os << format_double(traj.times[k]);
    const Operator& rho = traj.states[k];
    for (Eigen::Index i = 0; i < d; ++i)
      for (Eigen::Index j = 0; j < d; ++j)
        os << "," << format_double(rho(i, j).real()) << "," << format_double(rho(i, j).imag());
    os << "\n";
  }
  return os.str();
}

std::string scaling_csv(const ScalingReport& rep) {
  std::ostringstream os;
  os << "T,error,leakage\n";
  for (std::size_t i = 0; i < rep.T_values.size(); ++i)
    os << format_double(rep.T_values[i]) << "," << format_double(rep.errors[i]) << ","
       << format_double(rep.leakages[i]) << "\n";
  return os.str();
}

std::string gaps_csv(const GapReport& rep) {
  std::ostringstream os;
  os << "s,delta1,delta2\n";
  for (std::size_t i = 0; i < rep.s_grid.size(); ++i) {
    os << format_double(rep.s_grid[i]) << ",";
    if (i < rep.delta1_per_s.size()) os << format_double(rep.delta1_per_s[i]);
    os << "," << format_double(rep.delta2_per_s[i]) << "\n";
  }
  return os.str();
}

std::string scaling_svg(const ScalingReport& rep) {
  const double width = 640, height = 480, margin = 60;
  auto finite_log10 = [](double v) { return std::log10(std::max(v, 1e-16)); };
  double xmin = finite_log10(rep.T_values.front()), xmax = finite_log10(rep.T_values.back());
  double ymin = 1e300, ymax = -1e300;
  for (double e : rep.errors) {
    ymin = std::min(ymin, finite_log10(e));
    ymax = std::max(ymax, finite_log10(e));
  }
  const double c = rep.envelope_constant;
  for (double T : rep.T_values) {
    ymin = std::min(ymin, finite_log10(c / std::sqrt(T)));
    ymax = std::max(ymax, finite_log10(c / std::sqrt(T)));
  }
  if (ymax - ymin < 1e-12) { ymax += 1; ymin -= 1; }
  auto X = [&](double T) {
    return margin + (finite_log10(T) - xmin) / (xmax - xmin) * (width - 2 * margin);
  };
  auto Y = [&](double e) {
    return height - margin - (finite_log10(e) - ymin) / (ymax - ymin) * (height - 2 * margin);
  };

  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
     << "\">\n";
  os << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << width - 2 * margin
     << "\" height=\"" << height - 2 * margin << "\" fill=\"none\" stroke=\"black\"/>\n";
  os << "<text x=\"" << width / 2 << "\" y=\"" << height - 15
     << "\" text-anchor=\"middle\" font-size=\"14\">log10 T</text>\n";
  os << "<text x=\"18\" y=\"" << height / 2
     << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 18 " << height / 2
     << ")\">log10 error</text>\n";

  os << "<polyline fill=\"none\" stroke=\"#888\" stroke-dasharray=\"6 4\" points=\"";
  for (double T : rep.T_values) os << X(T) << "," << Y(c / std::sqrt(T)) << " ";
  os << "\"/>\n";

  os << "<polyline fill=\"none\" stroke=\"#1f6fb2\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < rep.T_values.size(); ++i)
    os << X(rep.T_values[i]) << "," << Y(rep.errors[i]) << " ";
  os << "\"/>\n";
  for (std::size_t i = 0; i < rep.T_values.size(); ++i)
    os << "<circle cx=\"" << X(rep.T_values[i]) << "\" cy=\"" << Y(rep.errors[i])
       << "\" r=\"3.5\" fill=\"#1f6fb2\"/>\n";
  os << "</svg>\n";
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot open for writing: " + path);
  os << content;
}

}  // namespace reports
}  // namespace amd
