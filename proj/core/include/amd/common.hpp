#pragma once

#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace amd {

using Complex = std::complex<double>;
using Operator = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Rank tolerance used everywhere a kernel or a spectral gap is classified.
// Well above 1e-15 arithmetic noise, far below the physical gaps of the presets.
inline constexpr double kDefaultRelTol = 1e-9;

// Seed for the randomized steps of the structure decomposition.
inline constexpr std::uint64_t kDefaultSeed = 0xADAB;

// Thrown when a numerical structure assumption fails (non-converging support,
// ambiguous eigenvalue grouping, block form violated, level crossing in a gap
// scan, ...). The CLI maps this to exit code 3.
class NumericalDiagnostic : public std::runtime_error {
 public:
  explicit NumericalDiagnostic(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace amd
