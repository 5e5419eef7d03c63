#include "amd/holonomy.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace amd {

Loop::Loop(LindbladCurve c, Block b0) : curve(std::move(c)), block0(std::move(b0)) {
  if (!curve.is_rotated_frame())
    throw std::invalid_argument("Loop: curve must be a rotated-frame family");
  const Operator U1 = curve.frame_unitary(1.0);
  const double closure = (U1 - identity(curve.dim())).norm();
  if (closure > 1e-10)
    throw std::invalid_argument("Loop: frame does not close, ||U(1) - I|| = " +
                                std::to_string(closure));
}

namespace {

Operator canonical_pair(PauliLoopKind kind, double a, double b) {
  switch (kind) {
    case PauliLoopKind::ZZ_X:
      return a * kron(sigma_z(), sigma_z()) + b * kron(sigma_x(), identity(2));
    case PauliLoopKind::XX_Z:
      return a * kron(sigma_x(), sigma_x()) + b * kron(sigma_z(), identity(2));
    case PauliLoopKind::XZZ_XX:
      return a * kron(sigma_x(), kron(sigma_z(), sigma_z())) +
             b * kron(sigma_x(), kron(sigma_x(), identity(2)));
  }
  throw std::invalid_argument("make_pauli_loop: unknown loop kind");
}

}  // namespace

Operator predicted_gate(PauliLoopKind kind, double b) {
  const Complex mi(0, -1);
  switch (kind) {
    case PauliLoopKind::ZZ_X:
      return matexp(mi * b * sigma_x());
    case PauliLoopKind::XX_Z:
      return matexp(mi * b * sigma_z());
    case PauliLoopKind::XZZ_XX:
      return matexp(mi * b * kron(sigma_x(), sigma_x()));
  }
  throw std::invalid_argument("predicted_gate: unknown loop kind");
}

Loop make_pauli_loop(PauliLoopKind kind, double a, double b, Lindbladian base) {
  const double closure_defect = std::abs(a * a + b * b - 4.0 * M_PI * M_PI);
  const int d = kind == PauliLoopKind::XZZ_XX ? 8 : 4;
  if (base.dim() != d)
    throw std::invalid_argument("make_pauli_loop: base must act on dimension " + std::to_string(d));
  const Operator G = canonical_pair(kind, a, b);
  if (closure_defect > 1e-10) {
    const double open = (matexp(Complex(0, -1) * G) - identity(d)).norm();
    throw std::invalid_argument("make_pauli_loop: a^2 + b^2 must equal (2 pi)^2; ||U(1) - I|| = " +
                                std::to_string(open));
  }

  Block blk;
  blk.m = d / 2;
  blk.n = 2;
  blk.isometry = identity(d);
  blk.fixed_state = identity(2) / 2.0;
  blk.internal_hamiltonian = Operator::Zero(d / 2, d / 2);
  const BlockFormReport bf = verify_blockform(base, blk);
  if (!bf.passes)
    throw std::invalid_argument(
        "make_pauli_loop: base is not noiseless on the leading factor (violation " +
        std::to_string(bf.max_violation) + ")");

  LindbladCurve curve(LindbladCurve::RotatedFrame{std::move(base),
                                                  FramePath(FramePath::ConstantGenerator{G})});
  return Loop(std::move(curve), std::move(blk));
}

TransportResult transport_discrete(const Loop& loop, const std::vector<double>& s_grid,
                                   const Operator& rho0) {
  if (s_grid.size() < 2) throw std::invalid_argument("transport_discrete: grid too small");
  for (std::size_t i = 0; i + 1 < s_grid.size(); ++i)
    if (s_grid[i + 1] <= s_grid[i])
      throw std::invalid_argument("transport_discrete: grid must be increasing");
  const SuperProjector P0(loop.block0);
  TransportResult out;
  out.state = rho0;
  double kept = 1.0;
  for (const double s : s_grid) {
    const Operator Om = loop.lab_unitary(s);
    Operator sigma = Om.adjoint() * out.state * Om;
    sigma = P0.apply(sigma);
    out.state = Om * sigma * Om.adjoint();
    const double tr = out.state.trace().real();
    if (tr <= 0) throw NumericalDiagnostic("transport_discrete: state trace vanished");
    kept *= tr;
    out.state /= tr;
  }
  out.trace_loss = 1.0 - kept;
  return out;
}

TransportResult transport_discrete(const Loop& loop, int N, const Operator& rho0) {
  if (N < 10) throw std::invalid_argument("transport_discrete: N must be >= 10");
  std::vector<double> grid(static_cast<std::size_t>(N) + 1);
  for (int i = 0; i <= N; ++i) grid[static_cast<std::size_t>(i)] = double(i) / double(N);
  return transport_discrete(loop, grid, rho0);
}

std::vector<Operator> fiducial_states(int m) {
  const CVector zero = basis_ket(0, 2), one = basis_ket(1, 2);
  const CVector plus = (zero + one) / std::sqrt(2.0);
  const CVector plus_i = (zero + Complex(0, 1) * one) / std::sqrt(2.0);
  std::vector<Operator> single;
  for (const auto& v : {zero, one, plus, plus_i}) single.push_back(v * v.adjoint());
  if (m == 2) return single;
  if (m == 4) {
    std::vector<Operator> out;
    for (const auto& f1 : single)
      for (const auto& f2 : single) out.push_back(kron(f1, f2));
    return out;
  }
  throw std::invalid_argument("fiducial_states: m must be 2 or 4");
}

ExtractedGate extract_unitary(const std::vector<std::pair<Operator, Operator>>& samples) {
  if (samples.empty()) throw std::invalid_argument("extract_unitary: no samples");
  const Eigen::Index m = samples.front().first.rows();
  Operator Rin(m * m, static_cast<Eigen::Index>(samples.size()));
  Operator Rout(m * m, static_cast<Eigen::Index>(samples.size()));
  for (std::size_t k = 0; k < samples.size(); ++k) {
    Rin.col(static_cast<Eigen::Index>(k)) = vec(samples[k].first);
    Rout.col(static_cast<Eigen::Index>(k)) = vec(samples[k].second);
  }
  Eigen::JacobiSVD<Operator> svd(Rin, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& sv = svd.singularValues();
  if (sv.size() < m * m || sv(sv.size() - 1) < 1e-9 * sv(0))
    throw std::invalid_argument("extract_unitary: inputs do not span the operator space");
  const Operator transfer = Rout * svd.solve(identity(static_cast<int>(samples.size())));

  // Choi matrix J = sum_ij E(E_ij) (x) E_ij; for a unitary channel it is the
  // rank-one projector on (U (x) I)|Phi>.
  Operator J = Operator::Zero(m * m, m * m);
  for (Eigen::Index j = 0; j < m; ++j)
    for (Eigen::Index i = 0; i < m; ++i) {
      Operator E = Operator::Zero(m, m);
      E(i, j) = 1.0;
      const Operator EE = unvec(transfer * vec(E));
      J += kron(EE, E);
    }
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(J));
  const CVector w = es.eigenvectors().col(m * m - 1);
  Operator M(m, m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < m; ++i) M(a, i) = w(a * m + i);
  Eigen::JacobiSVD<Operator> psvd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Operator U = psvd.matrixU() * psvd.matrixV().adjoint();

  // average gate fidelity between the sampled channel and conjugation by U
  CVector wU(m * m);
  for (Eigen::Index a = 0; a < m; ++a)
    for (Eigen::Index i = 0; i < m; ++i) wU(a * m + i) = U(a, i);
  const double f_pro = std::real(Complex(wU.adjoint() * hermitize(J) * wU)) / double(m * m);
  ExtractedGate out;
  out.unitary = U;
  out.fidelity = (double(m) * f_pro + 1.0) / (double(m) + 1.0);
  return out;
}

namespace {

std::vector<std::pair<Operator, Operator>> sample_channel(
    const Loop& loop, const std::function<Operator(const Operator&)>& run) {
  const int m = loop.block0.m;
  std::vector<std::pair<Operator, Operator>> samples;
  for (const auto& f : fiducial_states(m)) {
    const Operator rho0 =
        loop.block0.isometry * kron(f, loop.block0.fixed_state) * loop.block0.isometry.adjoint();
    const Operator rhoT = run(rho0);
    const Operator blk = loop.block0.isometry.adjoint() * rhoT * loop.block0.isometry;
    samples.emplace_back(f, partial_trace(blk, m, loop.block0.n, Side::B));
  }
  return samples;
}

}  // namespace

ExtractedGate gate_via_transport(const Loop& loop, int N) {
  return extract_unitary(sample_channel(
      loop, [&](const Operator& rho0) { return transport_discrete(loop, N, rho0).state; }));
}

ExtractedGate gate_via_simulation(const Loop& loop, double T, long steps) {
  const long n = steps > 0 ? steps : default_steps(loop.curve, T);
  return extract_unitary(sample_channel(loop, [&](const Operator& rho0) {
    return propagate_curve(loop.curve, rho0, T, n).final_state();
  }));
}

double average_gate_fidelity(const Operator& U, const Operator& V) {
  const double m = double(U.rows());
  const double overlap = std::abs(Complex((U.adjoint() * V).trace()));
  return (overlap * overlap / m + 1.0) / (m + 1.0);
}

}  // namespace amd
