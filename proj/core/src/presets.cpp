#include "amd/presets.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace amd {
namespace presets {

namespace {

// |0> = lowest level for the collective operators (see header)
Operator sz_low0() {
  Operator m(2, 2);
  m << -1, 0, 0, 1;
  return m;
}

Operator sp_low0() {
  Operator m(2, 2);
  m << 0, 0, 1, 0;  // |1><0|
  return m;
}

Operator sum_sites(const Operator& op) {
  Operator out = Operator::Zero(8, 8);
  for (int i = 0; i < 3; ++i) out += embed_at_site(op, i, 3);
  return out;
}

CVector ket3(const char* bits) {
  int idx = 0;
  for (int i = 0; i < 3; ++i) idx = idx * 2 + (bits[i] - '0');
  return basis_ket(idx, 8);
}

}  // namespace

Operator collective_jz() { return 0.5 * sum_sites(sz_low0()); }
Operator collective_jp() { return sum_sites(sp_low0()); }
Operator collective_jm() { return collective_jp().adjoint(); }

Lindbladian appendix_b_lindbladian(double omega, double gamma_plus, double gamma_minus) {
  if (gamma_plus <= 0 || gamma_minus <= 0)
    throw std::invalid_argument("appendix_b: rates must be positive");
  std::vector<Operator> Ls{std::sqrt(gamma_minus) * collective_jm(),
                           std::sqrt(gamma_plus) * collective_jp()};
  return Lindbladian(omega * collective_jz(), std::move(Ls));
}

Operator appendix_b_subsystem_basis() {
  Operator B(8, 4);
  B.col(0) = (ket3("011") - ket3("101")) / std::sqrt(2.0);
  B.col(1) = (ket3("010") - ket3("100")) / std::sqrt(2.0);
  B.col(2) = (2 * ket3("110") - ket3("101") - ket3("011")) / std::sqrt(6.0);
  B.col(3) = (-2 * ket3("001") + ket3("010") + ket3("100")) / std::sqrt(6.0);
  return B;
}

Block appendix_b_block(double gamma_plus, double gamma_minus) {
  Block blk;
  blk.m = 2;
  blk.n = 2;
  blk.isometry = appendix_b_subsystem_basis();
  Operator rhoB(2, 2);
  rhoB << gamma_plus, 0, 0, gamma_minus;
  blk.fixed_state = rhoB / (gamma_plus + gamma_minus);
  blk.internal_hamiltonian = Operator::Zero(2, 2);
  return blk;
}

Operator site_sigma(char axis, int site) {
  if (site < 1 || site > 3) throw std::invalid_argument("site_sigma: site must be 1..3");
  Operator p;
  switch (axis) {
    case 'x': p = sigma_x(); break;
    case 'y': p = sigma_y(); break;
    case 'z': p = sigma_z(); break;
    default: throw std::invalid_argument("site_sigma: axis must be x, y or z");
  }
  return embed_at_site(p, site - 1, 3);
}

Operator appendix_b_veff_sigma_z(int site, double gamma_plus, double gamma_minus) {
  const double c = (gamma_minus - gamma_plus) / (gamma_minus + gamma_plus);
  const double r3 = std::sqrt(3.0);
  switch (site) {
    case 1: return c * ((1.0 / r3) * sigma_x() - (1.0 / 3.0) * sigma_z());
    case 2: return c * (-(1.0 / r3) * sigma_x() - (1.0 / 3.0) * sigma_z());
    case 3: return c * (2.0 / 3.0) * sigma_z();
  }
  throw std::invalid_argument("appendix_b_veff_sigma_z: site must be 1..3");
}

std::vector<Operator> depolarizer_dissipators(double gamma, int total_dim_before) {
  if (gamma <= 0) throw std::invalid_argument("depolarizer: gamma must be positive");
  const Operator pre = identity(total_dim_before);
  std::vector<Operator> out;
  for (const Operator& p : {sigma_x(), sigma_y(), sigma_z()})
    out.push_back(std::sqrt(gamma / 4.0) * kron(pre, p));
  return out;
}

Lindbladian depol_b_lindbladian(double gamma) {
  return Lindbladian(Operator::Zero(4, 4), depolarizer_dissipators(gamma, 2));
}

Block depol_b_block(double gamma) {
  (void)gamma;
  Block blk;
  blk.m = 2;
  blk.n = 2;
  blk.isometry = identity(4);
  blk.fixed_state = identity(2) / 2.0;
  blk.internal_hamiltonian = Operator::Zero(2, 2);
  return blk;
}

Lindbladian depolarizer_on_last(int qubits, double gamma) {
  const int d = 1 << qubits;
  return Lindbladian(Operator::Zero(d, d), depolarizer_dissipators(gamma, d / 2));
}

Loop holonomy_loop(PauliLoopKind kind, double a, double b, double gamma) {
  const int qubits = kind == PauliLoopKind::XZZ_XX ? 3 : 2;
  return make_pauli_loop(kind, a, b, depolarizer_on_last(qubits, gamma));
}

LindbladCurve closed_sweep_curve(double g, double theta_max, int samples) {
  if (samples < 2) throw std::invalid_argument("closed_sweep: need at least 2 samples");
  LindbladCurve::Sampled sampled;
  for (int k = 0; k < samples; ++k) {
    const double s = double(k) / double(samples - 1);
    const double th = theta_max * (2.0 * s - s * s);
    const Operator H = 0.5 * g * (std::cos(th) * sigma_z() + std::sin(th) * sigma_x());
    sampled.samples.emplace_back(s, Lindbladian(H));
  }
  return LindbladCurve(std::move(sampled));
}

BlockTracker closed_sweep_tracker(double g, double theta_max) {
  return [g, theta_max](double s) {
    const double th = theta_max * (2.0 * s - s * s);
    // ground eigenvector of g/2 (cos th sz + sin th sx): Bloch angle th + pi
    CVector v(2);
    v << -std::sin(th / 2.0), std::cos(th / 2.0);
    Block blk;
    blk.m = 1;
    blk.n = 1;
    blk.isometry = v;
    blk.fixed_state = Operator::Identity(1, 1);
    blk.internal_hamiltonian = Operator::Zero(1, 1);
    return blk;
  };
}

BlockTracker ground_tracker(LindbladCurve curve) {
  return [curve = std::move(curve)](double s) {
    const Operator H = curve.at(s).hamiltonian();
    Eigen::SelfAdjointEigenSolver<Operator> es(H);
    Block blk;
    blk.m = 1;
    blk.n = 1;
    blk.isometry = es.eigenvectors().col(0);
    blk.fixed_state = Operator::Identity(1, 1);
    blk.internal_hamiltonian = Operator::Zero(1, 1);
    return blk;
  };
}

const std::vector<PresetInfo>& registry() {
  static const std::vector<PresetInfo> presets = {
      {"appendix-b", "three spin-1/2 particles under collective decoherence (w, gp, gm)"},
      {"depol-b", "two qubits, depolarizer on the second factor (gamma)"},
      {"holonomy-x", "dissipative loop realizing exp(-i b sx) on the noiseless qubit"},
      {"holonomy-z", "dissipative loop realizing exp(-i b sz) on the noiseless qubit"},
      {"holonomy-xx", "three-qubit dissipative loop realizing exp(-i b sx sx)"},
      {"closed-sweep", "two-level gapped sweep, closed-system adiabatic scaling"},
  };
  return presets;
}

}  // namespace presets
}  // namespace amd
