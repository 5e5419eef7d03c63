#pragma once

#include "amd/adiabatic.hpp"

namespace amd {

/// Closed loop of decompositions: the frame path satisfies U(1) = I, so the
/// transformation picked up by the noiseless factor is gauge invariant. In the
/// lab frame the block at s is the conjugation of block0 by U(s)^dag.
struct Loop {
  LindbladCurve curve;  // RotatedFrame
  Block block0;

  Loop(LindbladCurve c, Block b0);

  /// Lab-frame motion of the block: Omega(s) = U(s)^dag.
  Operator lab_unitary(double s) const { return curve.frame_unitary(s).adjoint(); }
};

enum class PauliLoopKind { ZZ_X, XX_Z, XZZ_XX };

/// Loop generated by G = a P1 + b P2 with the anticommuting Pauli pairs
///   ZZ_X:    P1 = sz (x) sz,           P2 = sx (x) I
///   XX_Z:    P1 = sx (x) sx,           P2 = sz (x) I
///   XZZ_XX:  P1 = sx (x) sz (x) sz,    P2 = sx (x) sx (x) I
/// Requires a^2 + b^2 = (2 pi)^2 so the loop closes (G^2 = (2 pi)^2 I).
Loop make_pauli_loop(PauliLoopKind kind, double a, double b, Lindbladian base);

/// Gate the loop is expected to realize on the noiseless factor in the
/// adiabatic limit: exp(-i b P) with P = sx, sz, or sx (x) sx.
Operator predicted_gate(PauliLoopKind kind, double b);

struct TransportResult {
  Operator state;          // full-space density, lab frame at s = 1
  double trace_loss = 0.0; // accumulated loss before per-step renormalization
};

/// Discrete holonomic transport P(s_N) ... P(s_1) P(s_0) with s_i = i/N, where
/// P(s) is the block projector conjugated by the lab-frame loop unitary.
/// Renormalizes the trace after each projection and reports the total loss.
TransportResult transport_discrete(const Loop& loop, int N, const Operator& rho0);

/// Same transport on an arbitrary increasing grid in [0,1] (used to check
/// reparameterization invariance).
TransportResult transport_discrete(const Loop& loop, const std::vector<double>& s_grid,
                                   const Operator& rho0);

struct ExtractedGate {
  Operator unitary;   // closest unitary, arbitrary global phase
  double fidelity;    // average gate fidelity of the sampled channel vs unitary
};

/// Reconstructs the channel on A from (input, output) pairs by linear
/// inversion and returns the closest unitary (polar factor of the leading
/// Choi eigenvector) plus the average gate fidelity between them.
ExtractedGate extract_unitary(const std::vector<std::pair<Operator, Operator>>& channel_samples);

/// Spanning set of fiducial states on an m-dimensional factor (m a power of
/// two): tensor products of |0>, |1>, |+>, |+i> projectors.
std::vector<Operator> fiducial_states(int m);

/// End-to-end gate extraction: run every fiducial through the discrete
/// transport (N steps) and invert the sampled channel.
ExtractedGate gate_via_transport(const Loop& loop, int N);

/// End-to-end gate extraction through the full dissipative evolution at total
/// time T.
ExtractedGate gate_via_simulation(const Loop& loop, double T, long steps = 0);

/// Average gate fidelity between the unitary channels U. and V. (global phase
/// insensitive).
double average_gate_fidelity(const Operator& U, const Operator& V);

}  // namespace amd
