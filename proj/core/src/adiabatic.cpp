#include "amd/adiabatic.hpp"

#include <atomic>
#include <cmath>
#include <future>

namespace amd {

SuperProjector::SuperProjector(Block block) : block_(std::move(block)) {}

Operator SuperProjector::apply(const Operator& rho) const {
  const Operator blk = block_.isometry.adjoint() * rho * block_.isometry;
  const Operator rhoA = partial_trace(blk, block_.m, block_.n, Side::B);
  return block_.isometry * kron(rhoA, block_.fixed_state) * block_.isometry.adjoint();
}

const Operator& SuperProjector::matrix() const {
  auto cached = std::atomic_load(&matrix_);
  if (!cached) {
    const Eigen::Index d = block_.isometry.rows();
    Operator P(d * d, d * d);
    for (Eigen::Index j = 0; j < d; ++j)
      for (Eigen::Index i = 0; i < d; ++i) {
        Operator E = Operator::Zero(d, d);
        E(i, j) = 1.0;
        P.col(j * d + i) = vec(apply(E));
      }
    auto built = std::make_shared<const Operator>(std::move(P));
    std::shared_ptr<const Operator> expected;
    std::atomic_compare_exchange_strong(&matrix_, &expected, std::shared_ptr<const Operator>(built));
    cached = std::atomic_load(&matrix_);
  }
  return *cached;
}

SuperProjector block_projector(Block block) { return SuperProjector(std::move(block)); }

Operator v_eff(const Operator& V, const Block& block) {
  if (V.rows() != block.isometry.rows())
    throw std::invalid_argument("v_eff: V must act on the ambient space");
  const Operator Vblk = block.isometry.adjoint() * V * block.isometry;
  return partial_trace(Vblk * kron(identity(block.m), block.fixed_state), block.m, block.n,
                       Side::B);
}

Operator traceless(const Operator& M) {
  return M - (M.trace() / double(M.rows())) * identity(static_cast<int>(M.rows()));
}

Operator effective_unitary(const std::function<Operator(double)>& veff_curve, double s_end,
                           long steps) {
  if (s_end <= 0.0 || s_end > 1.0) throw std::invalid_argument("effective_unitary: s_end in (0,1]");
  if (steps < 100) throw std::invalid_argument("effective_unitary: steps must be >= 100");
  const double ds = s_end / double(steps);
  Operator U;
  for (long k = 0; k < steps; ++k) {
    const double s = (double(k) + 0.5) * ds;
    const Operator step = matexp(Complex(0, -1) * ds * veff_curve(s));
    U = (k == 0) ? step : Operator(step * U);
  }
  return U;
}

AdiabaticError adiabatic_error(const LindbladCurve& curve, const BlockTracker& tracker,
                               const Operator& rho0A, double T,
                               const AdiabaticErrorOptions& opts) {
  const Block blk0 = tracker(0.0);
  if (blk0.internal_hamiltonian.norm() > 1e-8)
    throw NumericalDiagnostic(
        "adiabatic_error: blocks with nonzero internal Hamiltonian are not tracked");
  if (rho0A.rows() != blk0.m) throw std::invalid_argument("adiabatic_error: rho0A must live on A");

  const Operator rhoB0 =
      opts.start_B_maximally_mixed ? Operator(identity(blk0.n) / double(blk0.n)) : blk0.fixed_state;
  const Operator rho0 = blk0.isometry * kron(rho0A, rhoB0) * blk0.isometry.adjoint();

  const long steps = opts.steps > 0 ? opts.steps : default_steps(curve, T);
  const Trajectory traj = propagate_curve(curve, rho0, T, steps);
  const Operator& rhoT = traj.final_state();

  const Block blk1 = tracker(1.0);
  const Operator in_block = blk1.isometry.adjoint() * rhoT * blk1.isometry;
  const Operator rhoA_out = partial_trace(in_block, blk1.m, blk1.n, Side::B);

  const Operator U = effective_unitary(
      [&](double s) { return v_eff(curve.frame_generator(s), tracker(s)); }, 1.0,
      opts.veff_steps);
  const Operator ideal = U * rho0A * U.adjoint();

  AdiabaticError out;
  out.leakage = 1.0 - in_block.trace().real();
  out.error = trace_distance(rhoA_out, ideal);
  return out;
}

ScalingReport scaling_scan(const LindbladCurve& curve, const BlockTracker& tracker,
                           const Operator& rho0A, const std::vector<double>& T_values,
                           const ScanOptions& opts) {
  if (T_values.size() < 4)
    throw std::invalid_argument("scaling_scan: need at least 4 T values");
  for (std::size_t i = 0; i + 1 < T_values.size(); ++i)
    if (T_values[i + 1] <= T_values[i])
      throw std::invalid_argument("scaling_scan: T values must be strictly increasing");
  if (T_values.back() < 10.0 * T_values.front())
    throw std::invalid_argument("scaling_scan: T values must span at least a decade");

  ScalingReport rep;
  rep.T_values = T_values;
  rep.errors.resize(T_values.size());
  rep.leakages.resize(T_values.size());

  auto run_one = [&](std::size_t i) {
    const AdiabaticError e = adiabatic_error(curve, tracker, rho0A, T_values[i], opts.error_opts);
    rep.errors[i] = e.error;
    rep.leakages[i] = e.leakage;
  };

  if (opts.threads > 1) {
    std::vector<std::future<void>> futs;
    for (std::size_t i = 0; i < T_values.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_one, i));
    for (auto& f : futs) f.get();
  } else {
    for (std::size_t i = 0; i < T_values.size(); ++i) run_one(i);
  }

  // slope fit on points above the integrator floor
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < T_values.size(); ++i)
    if (rep.errors[i] > 1e-9) {
      lx.push_back(std::log(T_values[i]));
      ly.push_back(std::log(rep.errors[i]));
    }
  if (lx.size() >= 2) {
    const double n = double(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    rep.fitted_slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  } else {
    rep.flat = true;
  }

  rep.monotone = true;
  for (std::size_t i = 0; i + 1 < rep.errors.size(); ++i)
    if (rep.errors[i + 1] > 1.1 * rep.errors[i]) rep.monotone = false;

  rep.envelope_constant = rep.errors.front() * std::sqrt(T_values.front());

  if (opts.with_gap) rep.gap = compute_gaps(curve, tracker, opts.gap_s_points);
  return rep;
}

}  // namespace amd
