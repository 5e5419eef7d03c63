#pragma once

#include <string>

#include <json.hpp>

#include "amd/adiabatic.hpp"
#include "amd/holonomy.hpp"

namespace amd {
namespace reports {

using nlohmann::json;

std::string format_double(double v);  // %.17g, exact round trip

json complex_to_json(const Complex& z);           // [re, im]
json matrix_to_json(const Operator& M);           // row-major list of [re, im]
Operator matrix_from_json(const json& j, Eigen::Index rows, Eigen::Index cols);

json decomposition_to_json(const Decomposition& dec);
json gap_report_to_json(const GapReport& rep);
json scaling_report_to_json(const ScalingReport& rep);

/// CSV with columns t, then re/im of every density-matrix entry in row-major
/// order.
std::string trajectory_csv(const Trajectory& traj);

/// CSV with columns T, error, leakage.
std::string scaling_csv(const ScalingReport& rep);

/// CSV with columns s, delta1, delta2 (delta1 empty when absent).
std::string gaps_csv(const GapReport& rep);

/// Log-log polyline plot of error vs T with the T^{-1/2} envelope anchored at
/// the first point.
std::string scaling_svg(const ScalingReport& rep);

void write_file(const std::string& path, const std::string& content);

}  // namespace reports
}  // namespace amd
