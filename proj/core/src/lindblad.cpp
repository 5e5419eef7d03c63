#include "amd/lindblad.hpp"

#include <atomic>
#include <cmath>

namespace amd {

Lindbladian::Lindbladian(Operator hamiltonian, std::vector<Operator> dissipators)
    : hamiltonian_(std::move(hamiltonian)), dissipators_(std::move(dissipators)) {
  if (hamiltonian_.rows() != hamiltonian_.cols())
    throw std::invalid_argument("Lindbladian: H must be square");
  if (!is_hermitian(hamiltonian_, 1e-12))
    throw std::invalid_argument("Lindbladian: H must be Hermitian");
  for (const auto& L : dissipators_)
    if (L.rows() != hamiltonian_.rows() || L.cols() != hamiltonian_.cols())
      throw std::invalid_argument("Lindbladian: dissipator dimension mismatch");
}

const Operator& Lindbladian::superoperator() const {
  auto cached = std::atomic_load(&super_);
  if (!cached) {
    auto built = std::make_shared<const Operator>(build_superoperator(*this));
    std::shared_ptr<const Operator> expected;
    std::atomic_compare_exchange_strong(&super_, &expected, std::shared_ptr<const Operator>(built));
    cached = std::atomic_load(&super_);
  }
  return *cached;
}

Operator Lindbladian::apply(const Operator& rho) const {
  const Complex i(0.0, 1.0);
  Operator out = -i * (hamiltonian_ * rho - rho * hamiltonian_);
  for (const auto& L : dissipators_) {
    const Operator LdL = L.adjoint() * L;
    out += L * rho * L.adjoint() - 0.5 * (LdL * rho + rho * LdL);
  }
  return out;
}

Lindbladian Lindbladian::conjugated(const Operator& U) const {
  std::vector<Operator> Ls;
  Ls.reserve(dissipators_.size());
  for (const auto& L : dissipators_) Ls.push_back(U * L * U.adjoint());
  return Lindbladian(hermitize(U * hamiltonian_ * U.adjoint()), std::move(Ls));
}

Operator build_superoperator(const Lindbladian& L) {
  const int d = L.dim();
  const Operator Id = identity(d);
  const Operator& H = L.hamiltonian();
  const Complex i(0.0, 1.0);
  Operator S = -i * (kron(Id, H) - kron(H.transpose(), Id));
  for (const auto& Lk : L.dissipators()) {
    const Operator LdL = Lk.adjoint() * Lk;
    S += kron(Lk.conjugate(), Lk);
    S -= 0.5 * kron(Id, LdL);
    S -= 0.5 * kron(LdL.transpose(), Id);
  }
  return S;
}

Operator commutator_superoperator(const Operator& V) {
  const Operator Id = identity(static_cast<int>(V.rows()));
  return Complex(0.0, -1.0) * (kron(Id, V) - kron(V.transpose(), Id));
}

Operator propagate_const(const Lindbladian& L, const Operator& rho0, double t,
                         PropagationInfo* info) {
  if (t < 0) throw std::invalid_argument("propagate_const: t must be >= 0");
  if (rho0.rows() != L.dim() || rho0.cols() != L.dim())
    throw std::invalid_argument("propagate_const: state dimension mismatch");
  if (t == 0) {
    if (info) info->herm_drift = 0.0;
    return rho0;
  }
  const Operator rho = unvec(matexp(t * L.superoperator()) * vec(rho0));
  const double drift = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (info) info->herm_drift = drift;
  return hermitize(rho);
}

// --- FramePath ---------------------------------------------------------------

FramePath::FramePath(ConstantGenerator c) : path_(std::move(c)) {
  const auto& G = std::get<ConstantGenerator>(path_).G;
  if (!is_hermitian(G, 1e-12)) throw std::invalid_argument("FramePath: generator must be Hermitian");
}

FramePath::FramePath(PiecewiseGenerators p) : path_(std::move(p)) {
  const auto& segs = std::get<PiecewiseGenerators>(path_).segments;
  if (segs.empty()) throw std::invalid_argument("FramePath: empty segment list");
  double total = 0.0;
  for (const auto& seg : segs) {
    if (seg.ds <= 0) throw std::invalid_argument("FramePath: segment length must be positive");
    if (!is_hermitian(seg.G, 1e-12)) throw std::invalid_argument("FramePath: generator must be Hermitian");
    total += seg.ds;
  }
  if (std::abs(total - 1.0) > 1e-10)
    throw std::invalid_argument("FramePath: segment lengths must sum to 1");
  const int d = static_cast<int>(segs.front().G.rows());
  boundary_unitaries_.reserve(segs.size());
  Operator U = identity(d);
  for (const auto& seg : segs) {
    boundary_unitaries_.push_back(U);
    U = (matexp(Complex(0.0, -1.0) * seg.ds * seg.G) * U).eval();
  }
}

int FramePath::dim() const {
  if (const auto* c = std::get_if<ConstantGenerator>(&path_)) return static_cast<int>(c->G.rows());
  return static_cast<int>(std::get<PiecewiseGenerators>(path_).segments.front().G.rows());
}

Operator FramePath::unitary(double s) const {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("FramePath: s outside [0,1]");
  if (const auto* c = std::get_if<ConstantGenerator>(&path_))
    return matexp(Complex(0.0, -1.0) * s * c->G);
  const auto& segs = std::get<PiecewiseGenerators>(path_).segments;
  double start = 0.0;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const double end = start + segs[k].ds;
    if (s <= end + 1e-15 || k + 1 == segs.size()) {
      const double local = std::clamp(s - start, 0.0, segs[k].ds);
      return matexp(Complex(0.0, -1.0) * local * segs[k].G) * boundary_unitaries_[k];
    }
    start = end;
  }
  return identity(dim());  // unreachable
}

Operator FramePath::generator(double s) const {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("FramePath: s outside [0,1]");
  if (const auto* c = std::get_if<ConstantGenerator>(&path_)) return c->G;
  const auto& segs = std::get<PiecewiseGenerators>(path_).segments;
  double start = 0.0;
  for (std::size_t k = 0; k < segs.size(); ++k) {
    const double end = start + segs[k].ds;
    if (s < end || k + 1 == segs.size()) return segs[k].G;
    start = end;
  }
  return segs.back().G;  // unreachable
}

// --- LindbladCurve -----------------------------------------------------------

LindbladCurve::LindbladCurve(RotatedFrame rf) : curve_(std::move(rf)) {
  const auto& c = std::get<RotatedFrame>(curve_);
  if (c.frame.dim() != c.base.dim())
    throw std::invalid_argument("LindbladCurve: frame/base dimension mismatch");
}

LindbladCurve::LindbladCurve(Sampled s) : curve_(std::move(s)) {
  const auto& samples = std::get<Sampled>(curve_).samples;
  if (samples.empty()) throw std::invalid_argument("LindbladCurve: no samples");
  double prev = -1.0;
  const std::size_t nl = samples.front().second.dissipators().size();
  for (const auto& [si, Li] : samples) {
    if (si < 0.0 || si > 1.0 || si <= prev)
      throw std::invalid_argument("LindbladCurve: sample points must be increasing in [0,1]");
    if (Li.dim() != samples.front().second.dim() || Li.dissipators().size() != nl)
      throw std::invalid_argument("LindbladCurve: inconsistent samples");
    prev = si;
  }
}

int LindbladCurve::dim() const {
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_)) return rf->base.dim();
  return std::get<Sampled>(curve_).samples.front().second.dim();
}

Lindbladian LindbladCurve::at(double s) const {
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("LindbladCurve: s outside [0,1]");
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_))
    return rf->base.conjugated(rf->frame.unitary(s).adjoint());
  const auto& samples = std::get<Sampled>(curve_).samples;
  if (samples.size() == 1) return samples.front().second;
  auto it = std::lower_bound(samples.begin(), samples.end(), s,
                             [](const auto& p, double v) { return p.first < v; });
  if (it == samples.begin()) return it->second;
  if (it == samples.end()) return samples.back().second;
  const auto& [s1, L1] = *std::prev(it);
  const auto& [s2, L2] = *it;
  const double w = (s - s1) / (s2 - s1);
  Operator H = (1.0 - w) * L1.hamiltonian() + w * L2.hamiltonian();
  std::vector<Operator> Ls;
  Ls.reserve(L1.dissipators().size());
  for (std::size_t k = 0; k < L1.dissipators().size(); ++k)
    Ls.push_back((1.0 - w) * L1.dissipators()[k] + w * L2.dissipators()[k]);
  return Lindbladian(hermitize(H), std::move(Ls));
}

const Lindbladian& LindbladCurve::rotated_generator() const {
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_)) return rf->base;
  throw std::invalid_argument("LindbladCurve: rotated_generator requires a RotatedFrame curve");
}

Operator LindbladCurve::frame_generator(double s) const {
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_)) return rf->frame.generator(s);
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("LindbladCurve: s outside [0,1]");
  return Operator::Zero(dim(), dim());
}

Operator LindbladCurve::frame_unitary(double s) const {
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_)) return rf->frame.unitary(s);
  if (s < 0.0 || s > 1.0) throw std::invalid_argument("LindbladCurve: s outside [0,1]");
  return identity(dim());
}

bool LindbladCurve::has_constant_generator() const {
  if (const auto* rf = std::get_if<RotatedFrame>(&curve_)) return rf->frame.is_constant();
  return std::get<Sampled>(curve_).samples.size() == 1;
}

// --- time-dependent propagation ---------------------------------------------

namespace {

double curve_norm_estimate(const LindbladCurve& curve) {
  double nrm = 0.0;
  for (int k = 0; k <= 10; ++k) {
    const double s = k / 10.0;
    Operator S = curve.is_rotated_frame() ? curve.rotated_generator().superoperator()
                                          : curve.at(s).superoperator();
    nrm = std::max(nrm, S.norm());
    if (curve.has_constant_generator()) break;
  }
  return nrm;
}

}  // namespace

long default_steps(const LindbladCurve& curve, double T) {
  const double nrm = curve_norm_estimate(curve);
  return std::max<long>(1000, static_cast<long>(std::ceil(20.0 * T * nrm)));
}

Trajectory propagate_curve(const LindbladCurve& curve, const Operator& rho0, double T,
                           long steps, long record_stride) {
  if (T <= 0) throw std::invalid_argument("propagate_curve: T must be positive");
  if (steps < 100) throw std::invalid_argument("propagate_curve: steps must be >= 100");
  if (rho0.rows() != curve.dim() || rho0.cols() != curve.dim())
    throw std::invalid_argument("propagate_curve: state dimension mismatch");
  const double nrm = curve_norm_estimate(curve);
  if (nrm * T / double(steps) > 0.5) {
    const long needed = static_cast<long>(std::ceil(2.0 * T * nrm));
    throw std::invalid_argument("propagate_curve: steps too small for ||L||*T; need at least " +
                                std::to_string(needed));
  }

  const double dt = T / double(steps);
  const double tr0 = rho0.trace().real();
  Trajectory traj;
  auto record = [&](double t, const Operator& rho) {
    traj.herm_drift = std::max(traj.herm_drift, (rho - rho.adjoint()).cwiseAbs().maxCoeff());
    traj.trace_drift = std::max(traj.trace_drift, std::abs(rho.trace().real() - tr0));
    traj.times.push_back(t);
    traj.states.push_back(hermitize(rho));
  };
  record(0.0, rho0);

  Operator rho = rho0;
  auto generator_at = [&](double s) -> Operator {
    Operator M = curve.is_rotated_frame() ? curve.rotated_generator().superoperator()
                                          : build_superoperator(curve.at(s));
    if (curve.is_rotated_frame()) M += commutator_superoperator(curve.frame_generator(s)) / T;
    return M;
  };

  if (curve.has_constant_generator()) {
    // generator independent of s: exponentiate once per recording interval
    const Operator M = generator_at(0.5);
    const long stride = record_stride > 0 ? record_stride : steps;
    const Operator E = matexp(double(stride) * dt * M);
    long done = 0;
    while (done < steps) {
      const long todo = std::min(stride, steps - done);
      if (todo == stride) {
        rho = unvec(E * vec(rho));
      } else {
        rho = unvec(matexp(double(todo) * dt * M) * vec(rho));
      }
      done += todo;
      record(double(done) * dt, rho);
    }
    return traj;
  }

  const long stride = record_stride > 0 ? record_stride : steps;
  for (long k = 0; k < steps; ++k) {
    const double s_mid = (double(k) + 0.5) / double(steps);
    const Operator M = generator_at(s_mid);
    rho = unvec(matexp(dt * M) * vec(rho));
    if ((k + 1) % stride == 0 || k + 1 == steps) record(double(k + 1) * dt, rho);
  }
  return traj;
}

}  // namespace amd
