#pragma once

#include "amd/structure.hpp"

namespace amd {

/// rho -> embed( Tr_B( P^AB rho P^AB ) (x) fixed_state ): the superoperator
/// projector on the stationary set of a block. Idempotent; its image states
/// have exact product form.
class SuperProjector {
 public:
  explicit SuperProjector(Block block);

  const Block& block() const { return block_; }
  Operator apply(const Operator& rho) const;
  /// Dense d^2 x d^2 matrix of the projector (built on demand, cached).
  const Operator& matrix() const;

 private:
  Block block_;
  mutable std::shared_ptr<const Operator> matrix_;
};

SuperProjector block_projector(Block block);

/// Effective interaction on the noiseless factor:
///   Tr_B( P^AB V P^AB . I^A (x) fixed_state ).
/// Comparisons against closed forms should use the traceless part (the
/// identity component is gauge).
Operator v_eff(const Operator& V, const Block& block);

Operator traceless(const Operator& M);

/// Time-ordered product of exp(-i ds V_eff(s_mid)) from 0 to s_end.
Operator effective_unitary(const std::function<Operator(double)>& veff_curve, double s_end,
                           long steps);

struct AdiabaticErrorOptions {
  long steps = 0;            // 0: default_steps(curve, T)
  long veff_steps = 2000;
  bool start_B_maximally_mixed = false;  // start from I/n instead of fixed_state(0)
};

struct AdiabaticError {
  double error = 0.0;    // trace distance on the A factor vs the effective unitary
  double leakage = 0.0;  // 1 - Tr(P^AB rho(T) P^AB)
};

/// Propagates rho0A (x) fixed_state(0) along the curve for total time T and
/// compares the block-projected A state with the effective-unitary prediction.
AdiabaticError adiabatic_error(const LindbladCurve& curve, const BlockTracker& tracker,
                               const Operator& rho0A, double T,
                               const AdiabaticErrorOptions& opts = {});

struct ScalingReport {
  std::vector<double> T_values;
  std::vector<double> errors;
  std::vector<double> leakages;
  std::optional<double> fitted_slope;  // absent when everything sits at the error floor
  bool flat = false;
  bool monotone = false;               // strictly decreasing up to 10% jitter
  double envelope_constant = 0.0;      // C with error(T0) = C T0^{-1/2}
  std::optional<GapReport> gap;
};

struct ScanOptions {
  AdiabaticErrorOptions error_opts;
  int threads = 1;
  bool with_gap = false;
  int gap_s_points = 101;
};

/// Adiabatic error versus total time; errors below 1e-9 are excluded from the
/// log-log least-squares slope fit.
ScalingReport scaling_scan(const LindbladCurve& curve, const BlockTracker& tracker,
                           const Operator& rho0A, const std::vector<double>& T_values,
                           const ScanOptions& opts = {});

}  // namespace amd
