#pragma once

#include "amd/holonomy.hpp"

namespace amd {
namespace presets {

// ---------------------------------------------------------------------------
// Three spin-1/2 particles under collective decoherence:
//   drho/dt = -i w [J_z, rho] + gm D[J_-] rho + gp D[J_+] rho.
// The collective operators are built with the |0> = lowest-level convention
// (sz|0> = -|0>), which is what makes the two-level noiseless factor's fixed
// state come out as diag(gp, gm)/(gp+gm) in the canonical subsystem basis
// below. Named site Paulis (site_sigma_*) stay in the standard convention
// sz = diag(1,-1).
// ---------------------------------------------------------------------------

Operator collective_jz();  // 8x8
Operator collective_jp();
Operator collective_jm();

Lindbladian appendix_b_lindbladian(double omega, double gamma_plus, double gamma_minus);

/// The canonical basis of the noiseless qubit (x) cofactor:
///   |0>^A|0>^B = (|011> - |101>)/sqrt2          |0>^A|1>^B = (|010> - |100>)/sqrt2
///   |1>^A|0>^B = (2|110> - |101> - |011>)/sqrt6 |1>^A|1>^B = (-2|001> + |010> + |100>)/sqrt6
Operator appendix_b_subsystem_basis();  // 8x4, columns ordered (a,b) with b fastest

/// Block for the (m=2, n=2) summand in the canonical basis, with the
/// closed-form fixed state diag(gp, gm)/(gp+gm).
Block appendix_b_block(double gamma_plus, double gamma_minus);

/// sigma_{x,y,z} acting on one site of the three-spin register (standard
/// Pauli convention), for use as perturbations V in v_eff experiments.
Operator site_sigma(char axis, int site);

/// Closed-form effective interactions of the site-z perturbations on the
/// noiseless qubit (traceless parts, canonical basis):
///   site 1: (gm-gp)/(gm+gp) [ (1/sqrt3) sx - (1/3) sz ]
///   site 2: (gm-gp)/(gm+gp) [ -(1/sqrt3) sx - (1/3) sz ]
///   site 3: (gm-gp)/(gm+gp) (2/3) sz
Operator appendix_b_veff_sigma_z(int site, double gamma_plus, double gamma_minus);

// ---------------------------------------------------------------------------
// Other presets
// ---------------------------------------------------------------------------

/// Qubit depolarizer drho/dt = gamma (I/2 - rho), realized with the symmetric
/// dissipator set { sqrt(gamma/4) sx, sy, sz }.
std::vector<Operator> depolarizer_dissipators(double gamma, int total_dim_before = 1);

/// Two-qubit I_A (x) depolarizer_B.
Lindbladian depol_b_lindbladian(double gamma);
Block depol_b_block(double gamma);

/// Depolarizer on the last qubit of a register of `qubits` qubits (the base
/// Lindbladian of the holonomic loops).
Lindbladian depolarizer_on_last(int qubits, double gamma);

Loop holonomy_loop(PauliLoopKind kind, double a, double b, double gamma);

/// Two-level gapped sweep H(s) = g/2 (cos th(s) sz + sin th(s) sx) with the
/// smooth ramp th(s) = th_max (2s - s^2); sampled curve plus the tracker that
/// follows the ground eigenspace.
LindbladCurve closed_sweep_curve(double g, double theta_max, int samples);
BlockTracker closed_sweep_tracker(double g, double theta_max);

/// Tracker following the exact lowest eigenvector of curve.at(s) (closed
/// two-level curves; keeps the block form exact on interpolated curves).
BlockTracker ground_tracker(LindbladCurve curve);

struct PresetInfo {
  std::string name;
  std::string summary;
};

const std::vector<PresetInfo>& registry();

}  // namespace presets
}  // namespace amd
