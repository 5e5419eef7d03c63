#pragma once

#include <memory>
#include <variant>
#include <vector>

#include "amd/numerics.hpp"

namespace amd {

/// Generator of a Markovian master equation
///   drho/dt = -i[H, rho] + sum_i ( L_i rho L_i^dag - 1/2 {L_i^dag L_i, rho} ).
/// The d^2 x d^2 superoperator matrix (column-stacking convention) is built
/// lazily and cached.
class Lindbladian {
 public:
  Lindbladian(Operator hamiltonian, std::vector<Operator> dissipators);
  explicit Lindbladian(Operator hamiltonian) : Lindbladian(std::move(hamiltonian), {}) {}

  int dim() const { return static_cast<int>(hamiltonian_.rows()); }
  const Operator& hamiltonian() const { return hamiltonian_; }
  const std::vector<Operator>& dissipators() const { return dissipators_; }

  /// Cached superoperator,
  ///   S = -i(I(x)H - H^T(x)I)
  ///       + sum_i [ conj(L_i)(x)L_i - 1/2 I(x)(L_i^dag L_i) - 1/2 (L_i^dag L_i)^T(x)I ].
  const Operator& superoperator() const;

  /// Direct action S(rho) without materializing the superoperator.
  Operator apply(const Operator& rho) const;

  /// Conjugated generator with H -> U H U^dag, L_i -> U L_i U^dag.
  Lindbladian conjugated(const Operator& U) const;

 private:
  Operator hamiltonian_;
  std::vector<Operator> dissipators_;
  mutable std::shared_ptr<const Operator> super_;  // write-once cache
};

Operator build_superoperator(const Lindbladian& L);

/// Superoperator of rho -> -i[V, rho].
Operator commutator_superoperator(const Operator& V);

struct PropagationInfo {
  double herm_drift = 0.0;  // max |rho - rho^dag| before re-hermitization
};

/// exp(t S) applied to rho0, re-hermitized. t >= 0.
Operator propagate_const(const Lindbladian& L, const Operator& rho0, double t,
                         PropagationInfo* info = nullptr);

// ---------------------------------------------------------------------------
// One-parameter families of generators, s in [0,1]
// ---------------------------------------------------------------------------

/// Path of frame unitaries U(s), U(0) = I, with generator V(s) = i U'(s) U(s)^dag.
/// U(s) is the map from the lab basis to the rotated (block-fixing) basis.
class FramePath {
 public:
  struct ConstantGenerator { Operator G; };                 // U(s) = exp(-i s G)
  struct Segment { double ds; Operator G; };
  struct PiecewiseGenerators { std::vector<Segment> segments; };  // composed left to right

  explicit FramePath(ConstantGenerator c);
  explicit FramePath(PiecewiseGenerators p);

  int dim() const;
  Operator unitary(double s) const;
  /// V(s) = i dU/ds U^dag; piecewise-constant for PiecewiseGenerators.
  Operator generator(double s) const;
  bool is_constant() const { return std::holds_alternative<ConstantGenerator>(path_); }

 private:
  std::variant<ConstantGenerator, PiecewiseGenerators> path_;
  std::vector<Operator> boundary_unitaries_;  // piecewise: products at segment starts
};

/// Differentiable family L(s) of Lindbladians.
///
/// RotatedFrame{base, frame} is the curve whose description in the rotating
/// basis U(s) is the static `base` plus the inertial term -(i/T)[V(s), .]
/// (the master equation propagate_curve integrates). In the lab basis the
/// generator at s is the conjugation of `base` by U(s)^dag, which is what
/// at(s) returns.
///
/// Sampled curves interpolate H and each L_i entrywise piecewise-linearly
/// between samples; they carry no frame (V = 0).
class LindbladCurve {
 public:
  struct RotatedFrame { Lindbladian base; FramePath frame; };
  struct Sampled { std::vector<std::pair<double, Lindbladian>> samples; };

  explicit LindbladCurve(RotatedFrame rf);
  explicit LindbladCurve(Sampled s);

  int dim() const;
  /// Lab-frame generator at s.
  Lindbladian at(double s) const;
  /// Rotated-frame generator at s (for RotatedFrame: the static base).
  const Lindbladian& rotated_generator() const;
  Operator frame_generator(double s) const;      // V(s); zero for Sampled
  Operator frame_unitary(double s) const;        // U(s); identity for Sampled
  bool is_rotated_frame() const { return std::holds_alternative<RotatedFrame>(curve_); }
  /// True when the integrated generator (rotated frame) is s-independent.
  bool has_constant_generator() const;

 private:
  std::variant<RotatedFrame, Sampled> curve_;
};

struct Trajectory {
  std::vector<double> times;
  std::vector<Operator> states;
  double herm_drift = 0.0;
  double trace_drift = 0.0;

  const Operator& final_state() const { return states.back(); }
};

long default_steps(const LindbladCurve& curve, double T);

/// Integrates, in the rotated frame,
///   drho/dt = -(i/T)[V(t/T), rho] + L~(t/T) rho
/// by piecewise-constant exponential steps with midpoint sampling. For Sampled
/// curves V = 0 and L~ = L, i.e. plain lab-frame integration. States are
/// recorded every `record_stride` substeps (0: endpoints only).
Trajectory propagate_curve(const LindbladCurve& curve, const Operator& rho0, double T,
                           long steps, long record_stride = 0);

}  // namespace amd
