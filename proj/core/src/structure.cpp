#include "amd/structure.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace amd {

namespace {

double operator_norm(const Operator& M) {
  Eigen::JacobiSVD<Operator> svd(M);
  return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
}

double lindbladian_scale(const Lindbladian& L) {
  double scale = std::max(1.0, L.hamiltonian().norm());
  double diss = 0.0;
  for (const auto& Lk : L.dissipators()) diss += Lk.squaredNorm();
  return std::max(scale, diss);
}

/// Kernel basis with the singular-value threshold anchored at an absolute
/// problem scale, so that numerically-zero maps (everything is kernel) are
/// classified correctly.
Operator kernel_with_floor(const Operator& M, double rel_tol, double scale_floor) {
  if (M.cols() == 0) return Operator(0, 0);
  Eigen::JacobiSVD<Operator> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  if (std::max(smax, scale_floor) == 0.0) return identity(static_cast<int>(M.cols()));
  const double threshold = rel_tol * std::max(smax, scale_floor);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = M.cols() - 1; i >= 0; --i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (s < threshold) idx.push_back(i);
  }
  Operator out(M.cols(), static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(idx[k]);
  return out;
}

/// Orthonormal basis of the joint kernel of X -> [G_k, X], i.e. the commutant
/// of {G_k}, as vectorized columns (r^2 x K).
Operator commutant_basis(const std::vector<Operator>& gens, int r, double rel_tol) {
  const Operator Id = identity(r);
  double scale = 0.0;
  Operator stacked(static_cast<Eigen::Index>(gens.size()) * r * r, r * r);
  for (std::size_t k = 0; k < gens.size(); ++k) {
    // superoperator of X -> G X - X G
    stacked.middleRows(static_cast<Eigen::Index>(k) * r * r, r * r) =
        kron(Id, gens[k]) - kron(gens[k].transpose(), Id);
    scale = std::max(scale, gens[k].norm());
  }
  return kernel_with_floor(stacked, rel_tol, scale);
}

/// Hermitian spanning set of a dagger-closed operator subspace given by
/// vectorized orthonormal columns. Throws when the span is not dagger-closed.
Operator hermitian_basis(const Operator& basis, double rel_tol, const char* who) {
  const Eigen::Index K = basis.cols();
  if (K == 0) return basis;
  const Operator P = basis * basis.adjoint();
  Operator cand(basis.rows(), 2 * K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Operator X = unvec(basis.col(k));
    const CVector vd = vec(Operator(X.adjoint()));
    if ((vd - P * vd).norm() > 100 * rel_tol * vd.norm())
      throw NumericalDiagnostic(std::string(who) + ": operator span is not dagger-closed at tolerance");
    cand.col(2 * k) = vec(Operator(hermitize(X)));
    cand.col(2 * k + 1) = vec(Operator(hermitize(Complex(0.0, 1.0) * X)));
  }
  // modified Gram-Schmidt; coefficients are real so hermiticity survives
  Operator out(basis.rows(), K);
  Eigen::Index got = 0;
  for (Eigen::Index k = 0; k < cand.cols() && got < K; ++k) {
    CVector v = cand.col(k);
    for (Eigen::Index j = 0; j < got; ++j) v -= (out.col(j).dot(v)) * out.col(j);
    if (v.norm() > 1e-7) {
      out.col(got++) = v / v.norm();
    }
  }
  if (got < K)
    throw NumericalDiagnostic(std::string(who) + ": failed to hermitize operator basis");
  return out;
}

struct EigenGroups {
  std::vector<std::vector<Eigen::Index>> groups;
  bool ambiguous = false;
};

EigenGroups group_eigenvalues(const Eigen::VectorXd& vals, double rel_tol) {
  EigenGroups out;
  const Eigen::Index n = vals.size();
  if (n == 0) return out;
  const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
  const double split = rel_tol * scale;
  out.groups.push_back({0});
  for (Eigen::Index i = 1; i < n; ++i) {
    const double gap = vals(i) - vals(i - 1);
    if (gap > split) {
      if (gap < 10 * split) out.ambiguous = true;
      out.groups.push_back({});
    } else if (gap > split / 10) {
      out.ambiguous = true;  // merged, but only just
    }
    out.groups.back().push_back(i);
  }
  return out;
}

// Asymptotic state reached from rho0: propagate by t* = 50 / |slowest decay
// rate| and confirm stationarity at 2 t*.
Operator asymptotic_state(const Lindbladian& L, const Operator& rho0, double rel_tol) {
  const auto spec = spectrum(L.superoperator());
  const double scale = spec.values.cwiseAbs().maxCoeff();
  double slowest = 0.0;  // most negative-real-part-closest-to-zero among decaying
  bool any = false;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double re = spec.values(i).real();
    if (re < -rel_tol * std::max(scale, 1.0)) {
      if (!any || re > slowest) slowest = re;
      any = true;
    }
  }
  if (!any) return rho0;  // nothing decays (closed dynamics)
  const double t_star = 50.0 / std::abs(slowest);
  const Operator r1 = propagate_const(L, rho0, t_star);
  const Operator r2 = propagate_const(L, r1, t_star);
  if ((r2 - r1).norm() > 1e-7 * std::max(1.0, r1.norm()))
    throw NumericalDiagnostic("asymptotic_state: not stationary between t* and 2t*");
  return r2;
}

Operator support_basis(const Operator& rho, double rel_tol) {
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(rho));
  const auto& vals = es.eigenvalues();
  const double vmax = vals.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = vals.size() - 1; i >= 0; --i)
    if (vals(i) > rel_tol * vmax) keep.push_back(i);  // descending population
  Operator out(rho.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = es.eigenvectors().col(keep[k]);
  return out;
}

}  // namespace

SubspaceBasis fixed_point_basis(const Lindbladian& L, double rel_tol) {
  SubspaceBasis kernel = null_space(L.superoperator(), rel_tol);
  SubspaceBasis out;
  out.warnings = kernel.warnings;
  out.columns = hermitian_basis(kernel.columns, rel_tol, "fixed_point_basis");
  return out;
}

SubspaceBasis recurrent_support(const Lindbladian& L, double rel_tol) {
  const int d = L.dim();
  const Operator mixed = identity(d) / double(d);
  const auto spec = spectrum(L.superoperator());
  const double scale = std::max(spec.values.cwiseAbs().maxCoeff(), 1.0);
  double slowest = 0.0;
  bool any = false;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    const double re = spec.values(i).real();
    if (re < -rel_tol * scale) {
      if (!any || re > slowest) slowest = re;
      any = true;
    }
  }
  SubspaceBasis out;
  if (!any) {
    out.columns = identity(d);
    return out;
  }
  const double t_star = 50.0 / std::abs(slowest);
  const Operator r1 = propagate_const(L, mixed, t_star);
  const Operator r2 = propagate_const(L, r1, t_star);
  const Operator s1 = support_basis(r1, rel_tol);
  const Operator s2 = support_basis(r2, rel_tol);
  if (s1.cols() != s2.cols() || max_principal_angle(s1, s2) > 1e-6)
    throw NumericalDiagnostic("recurrent_support: support still changing between t* and 2t*");
  out.columns = s2;
  return out;
}

Decomposition decompose(const Lindbladian& L, const DecomposeOptions& opts) {
  const int d = L.dim();
  const double rel_tol = opts.rel_tol;
  Decomposition out;
  out.seed = opts.seed;
  Rng rng(opts.seed);

  // (1) restrict to the recurrent support
  const SubspaceBasis support = recurrent_support(L, rel_tol);
  const Operator& VR = support.columns;
  const int r = static_cast<int>(VR.cols());
  out.decaying.columns = orthonormal_complement(VR);

  std::vector<Operator> gens;
  gens.push_back(VR.adjoint() * L.hamiltonian() * VR);
  for (const auto& Lk : L.dissipators()) {
    const Operator Lr = VR.adjoint() * Lk * VR;
    gens.push_back(Lr);
    gens.push_back(Lr.adjoint());
  }

  // (2) commutant of {H, L_i, L_i^dag} on the support
  const Operator comm = commutant_basis(gens, r, rel_tol);
  const Operator comm_h = hermitian_basis(comm, rel_tol, "decompose");
  const Eigen::Index K = comm_h.cols();

  // (3) center Z(A') = { X in A' : [X, B_l] = 0 }, solved in A'-coordinates
  Operator W(static_cast<Eigen::Index>(K) * r * r, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    const Operator Bk = unvec(comm_h.col(k));
    for (Eigen::Index l = 0; l < K; ++l) {
      const Operator Bl = unvec(comm_h.col(l));
      W.block(l * r * r, k, r * r, 1) = vec(Operator(Bk * Bl - Bl * Bk));
    }
  }
  // basis elements are normalized, so the commutator table has natural scale 1
  const Operator center_coeff = kernel_with_floor(W, rel_tol, 1.0);  // K x Kc
  Operator center(static_cast<Eigen::Index>(r) * r, center_coeff.cols());
  for (Eigen::Index q = 0; q < center_coeff.cols(); ++q) {
    CVector v = CVector::Zero(static_cast<Eigen::Index>(r) * r);
    for (Eigen::Index k = 0; k < K; ++k) v += center_coeff(k, q) * comm_h.col(k);
    center.col(q) = v;
  }
  const Operator center_h = hermitian_basis(center, rel_tol, "decompose(center)");

  std::normal_distribution<double> gauss(0.0, 1.0);
  auto random_in_span = [&](const Operator& basis, bool hermitian_comb) {
    Operator X = Operator::Zero(r, r);
    for (Eigen::Index q = 0; q < basis.cols(); ++q) {
      const double re = gauss(rng);
      const double im = hermitian_comb ? 0.0 : gauss(rng);
      X += Complex(re, im) * unvec(basis.col(q));
    }
    return X;
  };

  // random Hermitian central element; its eigenvalue groups are the minimal
  // central projections, i.e. the simple summands
  const Operator C = hermitize(random_in_span(center_h, true));
  Eigen::SelfAdjointEigenSolver<Operator> ces(C);
  const EigenGroups central = group_eigenvalues(ces.eigenvalues(), rel_tol);
  if (central.ambiguous)
    out.warnings.push_back("decompose: central eigenvalue grouping is close to the tolerance");

  double residual_report = 0.0;

  for (const auto& group : central.groups) {
    const int D = static_cast<int>(group.size());
    Operator Q(r, D);
    for (int c = 0; c < D; ++c) Q.col(c) = ces.eigenvectors().col(group[static_cast<std::size_t>(c)]);

    // (4) factorize the summand: A'|_summand ~ M(m) (x) I_n. A random Hermitian
    // element has m eigenvalue groups of size n; their eigenspaces are the
    // A-levels tensored with the full B factor.
    int m = 0, n = 0;
    Operator levels;              // D x D, eigenvectors grouped by level
    std::vector<Eigen::Index> level_offsets;
    bool factored = false;
    for (int attempt = 0; attempt < 8 && !factored; ++attempt) {
      const Operator R1 = hermitize(Q.adjoint() * random_in_span(comm_h, true) * Q);
      Eigen::SelfAdjointEigenSolver<Operator> res(R1);
      const EigenGroups lv = group_eigenvalues(res.eigenvalues(), rel_tol);
      const std::size_t sz = lv.groups.front().size();
      if (!std::all_of(lv.groups.begin(), lv.groups.end(),
                       [&](const auto& g) { return g.size() == sz; }))
        continue;  // collided groups; redraw
      if (lv.ambiguous) {
        out.warnings.push_back("decompose: level eigenvalue grouping is close to the tolerance");
      }
      m = static_cast<int>(lv.groups.size());
      n = static_cast<int>(sz);
      levels.resize(D, D);
      level_offsets.clear();
      Eigen::Index off = 0;
      for (const auto& g : lv.groups) {
        level_offsets.push_back(off);
        for (const auto gi : g) levels.col(off++) = res.eigenvectors().col(gi);
      }
      factored = true;
    }
    if (!factored)
      throw NumericalDiagnostic("decompose: could not split a summand into equal-size eigenlevels");

    // align the B frames of levels 1..m-1 with level 0 through the polar part
    // of a random commutant element's off-level block
    Operator iso_coords(D, D);  // columns ordered (a, b) -> a*n + b
    const Operator E0 = levels.middleCols(level_offsets[0], n);
    iso_coords.middleCols(0, n) = E0;
    for (int a = 1; a < m; ++a) {
      const Operator Ea = levels.middleCols(level_offsets[static_cast<std::size_t>(a)], n);
      bool aligned = false;
      for (int attempt = 0; attempt < 8 && !aligned; ++attempt) {
        const Operator R2 = Q.adjoint() * random_in_span(comm_h, false) * Q;
        const Operator M = Ea.adjoint() * R2 * E0;  // = x_{a0} * (frame change)
        Eigen::JacobiSVD<Operator> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
        if (svd.singularValues().minCoeff() < 1e-6 * std::max(1.0, svd.singularValues().maxCoeff()))
          continue;
        iso_coords.middleCols(static_cast<Eigen::Index>(a) * n, n) =
            Ea * (svd.matrixU() * svd.matrixV().adjoint());
        aligned = true;
      }
      if (!aligned)
        throw NumericalDiagnostic("decompose: could not align level frames inside a summand");
    }

    Block blk;
    blk.m = m;
    blk.n = n;
    const Operator iso_r = Q * iso_coords;  // block coords -> support coords
    blk.isometry = VR * iso_r;

    // structure residual: every commutant element must look like x (x) I_n
    // (the commutant basis lives in support coordinates)
    for (Eigen::Index k = 0; k < K; ++k) {
      const Operator Y = iso_r.adjoint() * unvec(comm_h.col(k)) * iso_r;
      const Operator x = partial_trace(Y, m, n, Side::B) / double(n);
      residual_report = std::max(residual_report, (Y - kron(x, identity(n))).norm());
    }

    // (5) cofactor fixed state from the asymptotic state of the summand
    const Operator Pj = blk.isometry * blk.isometry.adjoint();
    const Operator rho_inf = asymptotic_state(L, Pj / double(D), rel_tol);
    Operator rhoB = partial_trace(blk.isometry.adjoint() * rho_inf * blk.isometry, m, n, Side::A);
    rhoB = hermitize(rhoB) / rhoB.trace().real();
    blk.fixed_state = rhoB;
    {
      Eigen::SelfAdjointEigenSolver<Operator> fes(rhoB);
      if (fes.eigenvalues().minCoeff() < rel_tol * fes.eigenvalues().maxCoeff())
        out.warnings.push_back("decompose: cofactor fixed state is not full rank at tolerance");
    }

    // (6) internal Hamiltonian: A part of the restricted H (identity part is
    // the gauge Tr(H_block)/(m n))
    const Operator Hblk = blk.isometry.adjoint() * L.hamiltonian() * blk.isometry;
    blk.internal_hamiltonian = hermitize(partial_trace(Hblk, m, n, Side::B) / double(n));

    // defining invariant of the block: L(X (x) rhoB) = -i[H^A, X] (x) rhoB
    for (int trial = 0; trial < 3; ++trial) {
      const Operator X = random_hermitian(m, rng);
      const Operator lhs = L.apply(blk.isometry * kron(X, rhoB) * blk.isometry.adjoint());
      const Operator comm_HX =
          Complex(0, -1) * (blk.internal_hamiltonian * X - X * blk.internal_hamiltonian);
      const Operator rhs = blk.isometry * kron(comm_HX, rhoB) * blk.isometry.adjoint();
      blk.residual = std::max(blk.residual, (lhs - rhs).norm() / std::max(1.0, X.norm()));
    }
    residual_report = std::max(residual_report, blk.residual);

    out.blocks.push_back(std::move(blk));
  }

  std::stable_sort(out.blocks.begin(), out.blocks.end(), [](const Block& a, const Block& b) {
    if (a.m != b.m) return a.m > b.m;
    if (a.n != b.n) return a.n > b.n;
    return a.fixed_state.diagonal().real().minCoeff() < b.fixed_state.diagonal().real().minCoeff();
  });

  int total = static_cast<int>(out.decaying.dim());
  for (const auto& b : out.blocks) total += b.m * b.n;
  if (total != d) throw NumericalDiagnostic("decompose: block dimensions do not sum to d");

  out.residual_report = residual_report;
  out.warnings.insert(out.warnings.end(), support.warnings.begin(), support.warnings.end());
  return out;
}

Operator block_unitary(const Block& block) {
  const Operator comp = orthonormal_complement(block.isometry);
  Operator W(block.isometry.rows(), block.isometry.rows());
  W << block.isometry, comp;
  return W;
}

BlockFormReport verify_blockform(const Lindbladian& L, const Block& block) {
  const int d = L.dim();
  const int mn = block.m * block.n;
  if (block.isometry.rows() != d || block.isometry.cols() != mn)
    throw std::invalid_argument("verify_blockform: block isometry inconsistent with L");
  const int m = block.m, n = block.n;
  const int c = d - mn;
  const Operator W = block_unitary(block);

  BlockFormReport rep;
  const Operator Ht = W.adjoint() * L.hamiltonian() * W;

  auto average_diag_subblock = [&](const Operator& UL) {
    Operator X = Operator::Zero(n, n);
    for (int a = 0; a < m; ++a) X += UL.block(a * n, a * n, n, n);
    return Operator(X / double(m));
  };

  std::vector<Operator> L2s;
  for (const auto& Lk : L.dissipators()) {
    const Operator Lt = W.adjoint() * Lk * W;
    if (c > 0) rep.lower_left = std::max(rep.lower_left, Lt.block(mn, 0, c, mn).norm());
    const Operator UL = Lt.block(0, 0, mn, mn);
    const Operator LB = average_diag_subblock(UL);
    rep.upper_left = std::max(rep.upper_left, (UL - kron(identity(m), LB)).norm());
    rep.dissipators_B.push_back(LB);
    if (c > 0) L2s.push_back(Lt.block(0, mn, mn, c));
  }

  const Operator HL = Ht.block(0, 0, mn, mn);
  const Operator HA = block.internal_hamiltonian;
  Operator HB = partial_trace(Operator(HL - kron(HA, identity(n))), m, n, Side::A) / double(m);
  HB = hermitize(HB);
  rep.hamiltonian_B = HB;
  rep.hamiltonian_split = (HL - kron(HA, identity(n)) - kron(identity(m), HB)).norm();

  if (c > 0) {
    const Operator H2 = Ht.block(0, mn, mn, c);
    Operator rhs = Operator::Zero(mn, c);
    for (std::size_t j = 0; j < L2s.size(); ++j)
      rhs += Complex(0, -0.5) * kron(identity(m), Operator(rep.dissipators_B[j].adjoint())) * L2s[j];
    rep.h2_condition = (H2 - rhs).norm();
  }

  rep.max_violation =
      std::max({rep.lower_left, rep.upper_left, rep.hamiltonian_split, rep.h2_condition});
  rep.passes = rep.max_violation <= 1e-8 * lindbladian_scale(L);
  return rep;
}

LocalGenerator local_lindbladian(const Lindbladian& L, const Block& block) {
  const BlockFormReport rep = verify_blockform(L, block);
  if (!rep.passes)
    throw NumericalDiagnostic("local_lindbladian: block form fails (max violation " +
                              std::to_string(rep.max_violation) + ")");
  LocalGenerator out{Lindbladian(rep.hamiltonian_B, rep.dissipators_B), block.n == 1};
  return out;
}

BlockTracker constant_tracker(Block block) {
  return [blk = std::move(block)](double) { return blk; };
}

Operator b2_basis(const Operator& W, int block_dim) {
  const Eigen::Index d = W.rows();
  const Operator CW = kron(W.conjugate(), W);
  std::vector<Eigen::Index> idx;
  for (Eigen::Index j = 0; j < d; ++j)
    for (Eigen::Index i = 0; i < d; ++i)
      if (!(i >= block_dim && j >= block_dim)) idx.push_back(j * d + i);
  Operator out(d * d, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) out.col(static_cast<Eigen::Index>(k)) = CW.col(idx[k]);
  return out;
}

Operator b0_basis(const Block& block) {
  const int m = block.m;
  const double nrm = std::sqrt(block.fixed_state.squaredNorm());
  Operator out(block.isometry.rows() * block.isometry.rows(), m * m);
  Eigen::Index col = 0;
  for (int a = 0; a < m; ++a)
    for (int b = 0; b < m; ++b) {
      Operator E = Operator::Zero(m, m);
      E(a, b) = 1.0;
      const Operator X = block.isometry * kron(E, block.fixed_state) * block.isometry.adjoint();
      out.col(col++) = vec(X) / nrm;
    }
  return out;
}

namespace {

struct RestrictedSpectrum {
  CVector nonzero;
  Eigen::Index kernel_dim = 0;
};

RestrictedSpectrum restricted_nonzero_eigs(const Operator& S, const Operator& basis, double rel_tol) {
  const Operator S22 = basis.adjoint() * S * basis;
  const auto spec = spectrum(S22);
  const double scale = operator_norm(S);
  RestrictedSpectrum out;
  std::vector<Complex> nz;
  for (Eigen::Index i = 0; i < spec.values.size(); ++i) {
    if (std::abs(spec.values(i)) > rel_tol * std::max(scale, 1.0))
      nz.push_back(spec.values(i));
    else
      ++out.kernel_dim;
  }
  out.nonzero = Eigen::Map<const CVector>(nz.data(), static_cast<Eigen::Index>(nz.size()));
  return out;
}

}  // namespace

GapReport compute_gaps(const LindbladCurve& curve, const BlockTracker& tracker, int s_points,
                       double rel_tol) {
  if (s_points < 11) throw std::invalid_argument("compute_gaps: s_points must be >= 11");
  GapReport rep;
  double d1 = std::numeric_limits<double>::infinity();
  double d2 = std::numeric_limits<double>::infinity();
  bool have_d1 = false;

  for (int k = 0; k < s_points; ++k) {
    const double s = s_points == 1 ? 0.0 : double(k) / double(s_points - 1);
    // trackers live in the same frame the curve is integrated in; for
    // rotated-frame curves that is the block-fixing frame, where the
    // generator is the static base (the gap is invariant under the rotation)
    const Lindbladian Ls =
        curve.is_rotated_frame() ? curve.rotated_generator() : curve.at(s);
    const Block blk = tracker(s);
    const BlockFormReport bf = verify_blockform(Ls, blk);
    if (!bf.passes)
      throw NumericalDiagnostic("compute_gaps: block form fails at s = " + std::to_string(s));

    rep.s_grid.push_back(s);

    if (blk.n > 1) {
      const Lindbladian local(bf.hamiltonian_B, bf.dissipators_B);
      const auto lspec = spectrum(local.superoperator());
      const double lscale = lspec.values.cwiseAbs().maxCoeff();
      double d1s = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < lspec.values.size(); ++i)
        if (std::abs(lspec.values(i)) > rel_tol * std::max(lscale, 1.0))
          d1s = std::min(d1s, std::abs(lspec.values(i).real()));
      rep.delta1_per_s.push_back(d1s);
      d1 = std::min(d1, d1s);
      have_d1 = true;
    }

    const Operator& S = Ls.superoperator();
    const Operator B2 = b2_basis(block_unitary(blk), blk.m * blk.n);
    const RestrictedSpectrum rs = restricted_nonzero_eigs(S, B2, rel_tol);
    if (rs.kernel_dim != Eigen::Index(blk.m) * blk.m)
      throw NumericalDiagnostic("compute_gaps: kernel dimension inside B_2 is " +
                                std::to_string(rs.kernel_dim) + " (expected m^2 = " +
                                std::to_string(blk.m * blk.m) + ") at s = " + std::to_string(s));
    const double d2s = rs.nonzero.cwiseAbs().minCoeff();
    rep.delta2_per_s.push_back(d2s);
    d2 = std::min(d2, d2s);
  }

  rep.delta2 = d2;
  if (have_d1) rep.delta1 = d1;
  rep.delta = have_d1 ? std::min(d1, d2) : d2;
  return rep;
}

PseudoInverseBound pseudo_inverse_bound(const Lindbladian& L, const Block& block, double rel_tol) {
  const BlockFormReport bf = verify_blockform(L, block);
  if (!bf.passes) throw NumericalDiagnostic("pseudo_inverse_bound: block form fails");

  const Operator& S = L.superoperator();
  const Operator W = block_unitary(block);
  const Operator B2 = b2_basis(W, block.m * block.n);
  const Operator B0 = b0_basis(block);

  // B2 minus B0, expressed inside B2 coordinates
  const Operator b0_in_b2 = B2.adjoint() * B0;
  Eigen::JacobiSVD<Operator> svd(b0_in_b2, Eigen::ComputeFullU);
  const Operator compl_coords = svd.matrixU().rightCols(B2.cols() - B0.cols());
  const Operator P2m0 = B2 * compl_coords;

  const Operator Lp = P2m0.adjoint() * S * P2m0;
  const auto spec = spectrum(Lp);
  const double scale = operator_norm(S);
  double min_abs = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < spec.values.size(); ++i)
    min_abs = std::min(min_abs, std::abs(spec.values(i)));
  if (min_abs <= rel_tol * std::max(scale, 1.0))
    throw NumericalDiagnostic("pseudo_inverse_bound: restricted generator is singular");

  PseudoInverseBound out;
  out.spectral_radius_of_inverse = 1.0 / min_abs;

  // Delta of this (constant) generator with respect to the block
  double delta = std::numeric_limits<double>::infinity();
  if (block.n > 1) {
    const Lindbladian local(bf.hamiltonian_B, bf.dissipators_B);
    const auto lspec = spectrum(local.superoperator());
    const double lscale = lspec.values.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < lspec.values.size(); ++i)
      if (std::abs(lspec.values(i)) > rel_tol * std::max(lscale, 1.0))
        delta = std::min(delta, std::abs(lspec.values(i).real()));
  }
  const RestrictedSpectrum rs = restricted_nonzero_eigs(S, B2, rel_tol);
  delta = std::min(delta, rs.nonzero.cwiseAbs().minCoeff());
  out.one_over_delta = 1.0 / delta;
  return out;
}

}  // namespace amd
