#pragma once

#include <optional>
#include <random>
#include <vector>

#include "amd/common.hpp"

namespace amd {

// ---------------------------------------------------------------------------
// Vectorization convention (fixed globally): column stacking,
//   vec(A X B) = (B^T (x) A) vec(X).
// Every superoperator in this library is written against this convention.
// ---------------------------------------------------------------------------

CVector vec(const Operator& M);
Operator unvec(const CVector& v);

Operator kron(const Operator& A, const Operator& B);

/// exp(M) for a square complex matrix, Pade approximant with scaling and
/// squaring (Higham), as provided by Eigen's matrix-functions module.
Operator matexp(const Operator& M);

bool is_hermitian(const Operator& M, double tol = 1e-12);
bool is_density(const Operator& M, double tol = 1e-10);
Operator hermitize(const Operator& M);

/// Orthonormal columns spanning a subspace of C^ambient, plus any warnings
/// produced while the basis was computed (borderline singular values, ...).
struct SubspaceBasis {
  Operator columns;  // ambient_dim x k, columns^dagger columns = I_k
  std::vector<std::string> warnings;

  Eigen::Index ambient_dim() const { return columns.rows(); }
  Eigen::Index dim() const { return columns.cols(); }
};

/// Orthonormal basis of the right kernel of M: right singular vectors whose
/// singular values fall below rel_tol * sigma_max, ordered by ascending
/// singular value (lexicographic tie-break). Singular values within a factor
/// of 10 of the threshold attach a warning. M may be rectangular.
SubspaceBasis null_space(const Operator& M, double rel_tol = kDefaultRelTol);

/// Orthonormal basis of the orthogonal complement of the range of the isometry.
Operator orthonormal_complement(const Operator& isometry);

enum class Side { A, B };

/// Partial trace of an operator on an (m*n)-dimensional space with factor
/// ordering A (x) B, B varying fastest. side selects the factor traced OUT.
Operator partial_trace(const Operator& M, int m, int n, Side side);

/// (1/2) * sum of singular values of rho - sigma.
double trace_distance(const Operator& rho, const Operator& sigma);

struct Spectrum {
  CVector values;                    // sorted by (real, imag)
  std::optional<Operator> vectors;   // right eigenvectors, matching order
};

/// Eigendecomposition of a general complex matrix; eigenvalues sorted by
/// (real part, imaginary part) so downstream reports are deterministic.
Spectrum spectrum(const Operator& M, bool with_vectors = false);

/// Largest principal angle (radians) between the ranges of two isometries.
double max_principal_angle(const Operator& U, const Operator& V);

// --- elementary operators ---------------------------------------------------

Operator identity(int dim);
Operator sigma_x();
Operator sigma_y();
Operator sigma_z();
CVector basis_ket(int i, int dim);

/// op acting on one site of a register of `sites` qubits (site 0 leftmost,
/// i.e. slowest index).
Operator embed_at_site(const Operator& op, int site, int sites);

// --- random generators (used by the decomposition and the test-suites) ------

using Rng = std::mt19937_64;

Operator random_hermitian(int dim, Rng& rng);
Operator random_unitary(int dim, Rng& rng);     // Haar via QR
Operator random_density(int dim, Rng& rng);
Operator random_matrix(int dim, Rng& rng);

}  // namespace amd
