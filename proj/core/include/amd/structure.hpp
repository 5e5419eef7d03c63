#pragma once

#include <functional>
#include <optional>

#include "amd/lindblad.hpp"

namespace amd {

/// One summand H^A (x) H^B of the asymptotic decomposition. `isometry` embeds
/// C^m (x) C^n (B varying fastest) into the ambient space; `fixed_state` is the
/// unique full-rank stationary state on the cofactor B; `internal_hamiltonian`
/// is the (possibly zero) Hamiltonian driving the noiseless factor.
struct Block {
  Operator isometry;              // d x (m*n)
  int m = 0;                      // noiseless dimension
  int n = 0;                      // cofactor dimension
  Operator fixed_state;           // n x n density
  Operator internal_hamiltonian;  // m x m Hermitian
  double residual = 0.0;          // worst structure violation observed for this block
};

struct Decomposition {
  std::vector<Block> blocks;
  SubspaceBasis decaying;         // basis of K
  double residual_report = 0.0;   // max invariant violation across blocks
  std::vector<std::string> warnings;
  std::uint64_t seed = kDefaultSeed;
};

struct GapReport {
  std::vector<double> s_grid;
  std::optional<double> delta1;   // absent when n = 1
  double delta2 = 0.0;
  double delta = 0.0;             // min of the present values
  std::vector<double> delta1_per_s;
  std::vector<double> delta2_per_s;
  std::vector<std::string> warnings;
};

struct DecomposeOptions {
  double rel_tol = kDefaultRelTol;
  std::uint64_t seed = kDefaultSeed;
};

/// Orthonormal basis of the kernel of the superoperator (in operator space,
/// ambient dimension d^2), hermitized where possible.
SubspaceBasis fixed_point_basis(const Lindbladian& L, double rel_tol = kDefaultRelTol);

/// Support of the asymptotic state reached from the maximally mixed state;
/// the decaying subspace K is its orthogonal complement.
SubspaceBasis recurrent_support(const Lindbladian& L, double rel_tol = kDefaultRelTol);

/// Noiseless-subsystem decomposition of the Hilbert space induced by L:
/// restrict to the recurrent support, take the commutant of
/// {H, L_i, L_i^dag}, split it into simple summands via a seeded random
/// central element, recover the A (x) B factorization inside each summand,
/// and read off fixed states and internal Hamiltonians.
Decomposition decompose(const Lindbladian& L, const DecomposeOptions& opts = {});

struct BlockFormReport {
  bool passes = false;
  double max_violation = 0.0;
  // extracted cofactor data (valid in the block basis of the tested Block)
  Operator hamiltonian_B;             // H^B_1
  std::vector<Operator> dissipators_B;  // L^B_{1j}
  double lower_left = 0.0;            // worst ||lower-left block of L~_j||
  double upper_left = 0.0;            // worst ||UL(L~_j) - I (x) L^B_{1j}||
  double hamiltonian_split = 0.0;     // ||UL(H~) - H^A (x) I - I (x) H^B_1||
  double h2_condition = 0.0;          // ||H_2 + (i/2) sum_j I (x) L^B_dag_{1j} L_{2j}||
};

/// Checks the block forms of H and every L_i with respect to `block`
/// (upper-left = the A (x) B factor) including the H_2 coupling condition.
BlockFormReport verify_blockform(const Lindbladian& L, const Block& block);

struct LocalGenerator {
  Lindbladian generator;  // on the B factor
  bool trivial = false;   // n == 1: no cofactor dynamics
};

/// The B-factor generator with Hamiltonian H^B_1 and dissipators L^B_{1j}.
/// Refuses when the block form does not hold.
LocalGenerator local_lindbladian(const Lindbladian& L, const Block& block);

using BlockTracker = std::function<Block(double)>;

BlockTracker constant_tracker(Block block);

/// Generalized energy scale of the curve: Delta_1 = slowest relaxation rate of
/// the local cofactor generator, Delta_2 = smallest nonzero eigenvalue
/// magnitude of the superoperator restricted to B_2 (operators with vanishing
/// lower-right block), both minimized over the s grid.
GapReport compute_gaps(const LindbladCurve& curve, const BlockTracker& tracker, int s_points,
                       double rel_tol = kDefaultRelTol);

struct PseudoInverseBound {
  double spectral_radius_of_inverse = 0.0;
  double one_over_delta = 0.0;
};

/// Restriction L' of the superoperator to B_2 minus the stationary set B_0;
/// reports the spectral radius of its inverse together with 1/Delta.
PseudoInverseBound pseudo_inverse_bound(const Lindbladian& L, const Block& block,
                                        double rel_tol = kDefaultRelTol);

// --- block-basis helpers (shared with the adiabatic module and tests) --------

/// [isometry, orthonormal complement]: unitary mapping block coordinates first.
Operator block_unitary(const Block& block);

/// Orthonormal basis (columns, vectorized) of B_2 = operators with vanishing
/// lower-right block in the basis W = block_unitary(block).
Operator b2_basis(const Operator& W, int block_dim);

/// Orthonormal basis of B_0 = { tau^A (x) fixed_state (+) 0 }.
Operator b0_basis(const Block& block);

}  // namespace amd
