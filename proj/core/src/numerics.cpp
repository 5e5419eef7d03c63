#include "amd/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>
#include <unsupported/Eigen/MatrixFunctions>

namespace amd {

CVector vec(const Operator& M) {
  return Eigen::Map<const CVector>(M.data(), M.size());
}

Operator unvec(const CVector& v) {
  const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (d * d != v.size()) throw std::invalid_argument("unvec: length is not a perfect square");
  return Eigen::Map<const Operator>(v.data(), d, d);
}

Operator kron(const Operator& A, const Operator& B) {
  return Eigen::kroneckerProduct(A, B);
}

Operator matexp(const Operator& M) {
  if (M.rows() != M.cols()) throw std::invalid_argument("matexp: matrix must be square");
  if (!M.allFinite()) throw std::invalid_argument("matexp: non-finite entries");
  return M.exp();
}

bool is_hermitian(const Operator& M, double tol) {
  if (M.rows() != M.cols()) return false;
  const double scale = std::max(M.cwiseAbs().maxCoeff(), 1.0);
  return (M - M.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

bool is_density(const Operator& M, double tol) {
  if (!is_hermitian(M, 1e-10)) return false;
  if (std::abs(M.trace() - Complex(1.0, 0.0)) > tol) return false;
  Eigen::SelfAdjointEigenSolver<Operator> es(hermitize(M));
  return es.eigenvalues().minCoeff() >= -tol;
}

Operator hermitize(const Operator& M) { return 0.5 * (M + M.adjoint()); }

SubspaceBasis null_space(const Operator& M, double rel_tol) {
  if (rel_tol <= 0.0 || rel_tol >= 1.0) throw std::invalid_argument("null_space: rel_tol must be in (0,1)");
  Eigen::JacobiSVD<Operator> svd(M, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const Eigen::Index n = M.cols();
  const double smax = sv.size() > 0 ? sv(0) : 0.0;
  const double threshold = rel_tol * smax;

  SubspaceBasis out;
  // indices of kernel vectors; singular values come out descending, kernel
  // ordering is ascending singular value
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = n - 1; i >= 0; --i) {
    const double s = i < sv.size() ? sv(i) : 0.0;
    if (smax == 0.0 || s < threshold) idx.push_back(i);
  }
  for (Eigen::Index i = 0; i < std::min<Eigen::Index>(sv.size(), n); ++i) {
    const double s = sv(i);
    if (smax > 0.0 && s >= threshold / 10.0 && s <= threshold * 10.0) {
      out.warnings.push_back("null_space: singular value " + std::to_string(s) +
                             " within a factor of 10 of threshold " + std::to_string(threshold));
      break;
    }
  }

  Operator cols(n, static_cast<Eigen::Index>(idx.size()));
  for (std::size_t k = 0; k < idx.size(); ++k) cols.col(static_cast<Eigen::Index>(k)) = svd.matrixV().col(idx[k]);

  // canonical phases: largest-magnitude entry made real positive
  for (Eigen::Index c = 0; c < cols.cols(); ++c) {
    Eigen::Index imax = 0;
    cols.col(c).cwiseAbs().maxCoeff(&imax);
    const Complex z = cols(imax, c);
    if (std::abs(z) > 0) cols.col(c) *= std::conj(z) / std::abs(z);
  }

  // lexicographic tie-break among equal singular values
  std::vector<Eigen::Index> order(static_cast<std::size_t>(cols.cols()));
  std::iota(order.begin(), order.end(), 0);
  auto sv_of = [&](Eigen::Index k) {
    const Eigen::Index i = idx[static_cast<std::size_t>(k)];
    return i < sv.size() ? sv(i) : 0.0;
  };
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    const double sa = sv_of(a), sb = sv_of(b);
    if (sa != sb) return sa < sb;
    for (Eigen::Index r = 0; r < n; ++r) {
      const Complex za = cols(r, a), zb = cols(r, b);
      if (za.real() != zb.real()) return za.real() < zb.real();
      if (za.imag() != zb.imag()) return za.imag() < zb.imag();
    }
    return false;
  });
  Operator sorted(n, cols.cols());
  for (Eigen::Index k = 0; k < cols.cols(); ++k) sorted.col(k) = cols.col(order[static_cast<std::size_t>(k)]);
  out.columns = std::move(sorted);
  return out;
}

Operator orthonormal_complement(const Operator& isometry) {
  const Eigen::Index d = isometry.rows();
  const Eigen::Index k = isometry.cols();
  if (k >= d) return Operator(d, 0);
  // SVD of the projector complement: kernel of isometry^dagger
  Eigen::JacobiSVD<Operator> svd(isometry.adjoint(), Eigen::ComputeFullV);
  return svd.matrixV().rightCols(d - k);
}

Operator partial_trace(const Operator& M, int m, int n, Side side) {
  if (m <= 0 || n <= 0 || M.rows() != M.cols() || M.rows() != Eigen::Index(m) * n)
    throw std::invalid_argument("partial_trace: dim(M) must equal m*n");
  if (side == Side::B) {
    Operator out = Operator::Zero(m, m);
    for (int a = 0; a < m; ++a)
      for (int ap = 0; ap < m; ++ap)
        for (int b = 0; b < n; ++b) out(a, ap) += M(a * n + b, ap * n + b);
    return out;
  }
  Operator out = Operator::Zero(n, n);
  for (int b = 0; b < n; ++b)
    for (int bp = 0; bp < n; ++bp)
      for (int a = 0; a < m; ++a) out(b, bp) += M(a * n + b, a * n + bp);
  return out;
}

double trace_distance(const Operator& rho, const Operator& sigma) {
  if (rho.rows() != sigma.rows() || rho.cols() != sigma.cols())
    throw std::invalid_argument("trace_distance: dimension mismatch");
  Eigen::JacobiSVD<Operator> svd(rho - sigma);
  return 0.5 * svd.singularValues().sum();
}

Spectrum spectrum(const Operator& M, bool with_vectors) {
  Eigen::ComplexEigenSolver<Operator> es(M, with_vectors);
  if (es.info() != Eigen::Success) throw NumericalDiagnostic("spectrum: eigensolver failed");
  const Eigen::Index d = M.rows();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(d));
  std::iota(order.begin(), order.end(), 0);
  const auto& ev = es.eigenvalues();
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    if (ev(a).real() != ev(b).real()) return ev(a).real() < ev(b).real();
    return ev(a).imag() < ev(b).imag();
  });
  Spectrum out;
  out.values.resize(d);
  for (Eigen::Index i = 0; i < d; ++i) out.values(i) = ev(order[static_cast<std::size_t>(i)]);
  if (with_vectors) {
    Operator vecs(d, d);
    for (Eigen::Index i = 0; i < d; ++i) vecs.col(i) = es.eigenvectors().col(order[static_cast<std::size_t>(i)]);
    out.vectors = std::move(vecs);
  }
  return out;
}

double max_principal_angle(const Operator& U, const Operator& V) {
  if (U.rows() != V.rows()) throw std::invalid_argument("max_principal_angle: ambient mismatch");
  if (U.cols() == 0 || V.cols() == 0) return U.cols() == V.cols() ? 0.0 : M_PI / 2;
  // sine formulation: accurate for small angles, unlike acos(sigma_min)
  auto sine_of = [](const Operator& A, const Operator& B) {
    const Operator resid = B - A * (A.adjoint() * B);
    Eigen::JacobiSVD<Operator> svd(resid);
    return svd.singularValues().size() > 0 ? svd.singularValues()(0) : 0.0;
  };
  const double s = std::max(sine_of(U, V), sine_of(V, U));
  return std::asin(std::clamp(s, 0.0, 1.0));
}

Operator identity(int dim) { return Operator::Identity(dim, dim); }

Operator sigma_x() {
  Operator m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

Operator sigma_y() {
  Operator m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

Operator sigma_z() {
  Operator m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

CVector basis_ket(int i, int dim) {
  CVector v = CVector::Zero(dim);
  v(i) = 1.0;
  return v;
}

Operator embed_at_site(const Operator& op, int site, int sites) {
  if (site < 0 || site >= sites) throw std::invalid_argument("embed_at_site: site out of range");
  Operator out = (site == 0) ? op : identity(2);
  for (int k = 1; k < sites; ++k) out = kron(out, k == site ? op : identity(2)).eval();
  return out;
}

Operator random_matrix(int dim, Rng& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Operator m(dim, dim);
  for (Eigen::Index j = 0; j < dim; ++j)
    for (Eigen::Index i = 0; i < dim; ++i) m(i, j) = Complex(g(rng), g(rng));
  return m;
}

Operator random_hermitian(int dim, Rng& rng) {
  const Operator m = random_matrix(dim, rng);
  return hermitize(m);
}

Operator random_unitary(int dim, Rng& rng) {
  const Operator m = random_matrix(dim, rng);
  Eigen::HouseholderQR<Operator> qr(m);
  Operator q = qr.householderQ();
  Operator r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Complex rii = r(i, i);
    q.col(i) *= std::abs(rii) > 0 ? rii / std::abs(rii) : 1.0;
  }
  return q;
}

Operator random_density(int dim, Rng& rng) {
  const Operator m = random_matrix(dim, rng);
  Operator rho = m * m.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace amd
