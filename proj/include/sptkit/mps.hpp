#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sptkit/detector.hpp"
#include "sptkit/group.hpp"
#include "sptkit/linalg.hpp"

namespace sptkit {

/// Translation-invariant MPS |psi> = sum tr(... A^{s_1} A^{s_2} ...) with an
/// on-site group action U(g).
struct SymmetricMps {
  int d = 0;
  int D = 0;
  std::vector<Mat> A;  // d matrices of size D x D
  GroupPtr group;
  std::vector<Mat> onsite;  // per group element, d x d
  std::optional<DetectorKind> detector;
  std::string label;

  bool canonical = false;
  bool injective = false;
  /// Spectrum of the right fixed point in canonical gauge, descending.
  Eigen::VectorXd schmidt;
};

inline constexpr double kGapTolerance = 1e-6;

/// Validates shapes and that U is a linear representation to 1e-10.
inline SymmetricMps make_mps(std::vector<Mat> A, GroupPtr group, std::vector<Mat> onsite, std::string label,
                             std::optional<DetectorKind> detector = std::nullopt) {
  require(!A.empty(), "MPS needs at least one physical state");
  SymmetricMps m;
  m.d = static_cast<int>(A.size());
  m.D = static_cast<int>(A[0].rows());
  for (const auto& a : A) require(a.rows() == m.D && a.cols() == m.D, "MPS tensor slices must be D x D");
  require(group && static_cast<int>(onsite.size()) == group->order(), "on-site rep needs one matrix per element");
  for (int g = 0; g < group->order(); ++g) {
    require(onsite[g].rows() == m.d && onsite[g].cols() == m.d, "on-site matrix has wrong shape");
    if (!is_unitary(onsite[g])) fail(ErrorKind::validation, "on-site U(" + std::to_string(g) + ") is not unitary");
  }
  for (int g = 0; g < group->order(); ++g)
    for (int h = 0; h < group->order(); ++h)
      if (max_abs(onsite[g] * onsite[h] - onsite[group->mul(g, h)]) > 1e-10)
        fail(ErrorKind::validation, "on-site action is not a linear representation at (" + std::to_string(g) + "," +
                                        std::to_string(h) + ")");
  m.A = std::move(A);
  m.group = std::move(group);
  m.onsite = std::move(onsite);
  m.label = std::move(label);
  m.detector = detector;
  return m;
}

// Transfer maps as D^2 x D^2 matrices acting on column-major vec(X).

/// X -> sum_i B^i X A^{i dagger}
inline Mat right_map_matrix(const std::vector<Mat>& A, const std::vector<Mat>& B) {
  const Eigen::Index D = A[0].rows();
  Mat M = Mat::Zero(D * D, D * D);
  for (std::size_t i = 0; i < A.size(); ++i) M += kron(A[i].conjugate(), B[i]);
  return M;
}

/// X -> sum_i A^{i dagger} X B^i
inline Mat left_map_matrix(const std::vector<Mat>& A, const std::vector<Mat>& B) {
  const Eigen::Index D = A[0].rows();
  Mat M = Mat::Zero(D * D, D * D);
  for (std::size_t i = 0; i < A.size(); ++i) M += kron(B[i].transpose(), A[i].adjoint());
  return M;
}

/// B^i = sum_j W_ij A^j
inline std::vector<Mat> twisted_tensor(const std::vector<Mat>& A, const Mat& W) {
  std::vector<Mat> B(A.size(), Mat::Zero(A[0].rows(), A[0].cols()));
  for (std::size_t i = 0; i < A.size(); ++i)
    for (std::size_t j = 0; j < A.size(); ++j)
      if (W(i, j) != cplx(0)) B[i] += W(i, j) * A[j];
  return B;
}

namespace detail {

inline Mat hermitian_part_with_positive_trace(Mat x) {
  cplx tr = x.trace();
  if (std::abs(tr) > 0) x *= std::conj(tr) / std::abs(tr);
  return (x + x.adjoint()) / 2.0;
}

inline Mat hermitian_sqrt(const Mat& x, bool inverse) {
  Eigen::SelfAdjointEigenSolver<Mat> es(x);
  Eigen::VectorXd ev = es.eigenvalues();
  for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = inverse ? 1.0 / std::sqrt(ev(i)) : std::sqrt(ev(i));
  return es.eigenvectors() * ev.cast<cplx>().asDiagonal() * es.eigenvectors().adjoint();
}

}  // namespace detail

/// Left-canonical gauge (sum A^dagger A = 1) with a diagonal, descending
/// right fixed point. Refuses non-injective tensors.
inline SymmetricMps canonicalize(const SymmetricMps& in) {
  SymmetricMps m = in;
  const Eigen::Index D = m.D;

  Mat E = right_map_matrix(m.A, m.A);
  auto lead = leading_eigen(E);
  const double lam = std::abs(lead.value);
  if (lam < 1e-300) fail(ErrorKind::validation, "canonicalize: transfer operator has zero leading eigenvalue");
  if (lam - lead.second_abs <= kGapTolerance * lam)
    fail(ErrorKind::validation, "canonicalize: leading transfer eigenvalue is not simple (non-injective MPS '" +
                                    m.label + "'); try blocking sites");

  auto left = leading_eigen(left_map_matrix(m.A, m.A));
  Mat l = detail::hermitian_part_with_positive_trace(unvectorize(left.vector, D));
  Eigen::SelfAdjointEigenSolver<Mat> les(l);
  if (les.eigenvalues().minCoeff() <= 1e-12 * les.eigenvalues().maxCoeff())
    fail(ErrorKind::validation, "canonicalize: left fixed point is not full rank (non-injective MPS '" + m.label + "')");

  const double scale = 1.0 / std::sqrt(lam);
  Mat L = detail::hermitian_sqrt(l, false);
  Mat Linv = detail::hermitian_sqrt(l, true);
  for (auto& a : m.A) a = (L * a * Linv * scale).eval();

  auto right = leading_eigen(right_map_matrix(m.A, m.A));
  Mat r = detail::hermitian_part_with_positive_trace(unvectorize(right.vector, D));
  r /= r.trace().real();

  Mat offdiag = r;
  offdiag.diagonal().setZero();
  Eigen::VectorXd diag = r.diagonal().real();
  if (max_abs(offdiag) > 1e-12) {
    Eigen::SelfAdjointEigenSolver<Mat> res(r);
    // eigenvalues ascending; reverse for descending order
    Mat V = res.eigenvectors().rowwise().reverse();
    for (auto& a : m.A) a = (V.adjoint() * a * V).eval();
    diag = res.eigenvalues().reverse();
  } else {
    std::vector<Eigen::Index> perm(D);
    for (Eigen::Index i = 0; i < D; ++i) perm[i] = i;
    std::stable_sort(perm.begin(), perm.end(), [&](auto x, auto y) { return diag(x) > diag(y) + 1e-14; });
    bool identity = true;
    for (Eigen::Index i = 0; i < D; ++i) identity = identity && perm[i] == i;
    if (!identity) {
      Mat P = Mat::Zero(D, D);
      Eigen::VectorXd sorted(D);
      for (Eigen::Index i = 0; i < D; ++i) {
        P(perm[i], i) = 1.0;
        sorted(i) = diag(perm[i]);
      }
      for (auto& a : m.A) a = (P.adjoint() * a * P).eval();
      diag = sorted;
    }
  }
  m.schmidt = diag;
  m.canonical = true;
  m.injective = true;
  return m;
}

inline double left_canonical_error(const SymmetricMps& m) {
  Mat s = Mat::Zero(m.D, m.D);
  for (const auto& a : m.A) s += a.adjoint() * a;
  return max_abs(s - Mat::Identity(m.D, m.D));
}

/// A^i -> V^{-1} A^i V; the physical state is unchanged.
inline SymmetricMps virtual_gauge(const SymmetricMps& m, const Mat& V) {
  SymmetricMps out = m;
  Mat Vinv = V.inverse();
  for (auto& a : out.A) a = (Vinv * a * V).eval();
  out.canonical = m.canonical && is_unitary(V);
  return out;
}

struct TransferFixedPoint {
  cplx eigenvalue;
  Mat left;
  Mat right;
  double residual = 0.0;
  double second_abs = 0.0;
  bool dual_normalized = true;
};

/// Leading eigenpair of X -> sum_ij W_ij A^j X A^{i dagger} (W = 1 if absent),
/// with the dual left eigenvector of X -> sum_i A^{i dagger} X B^i and
/// tr(l r) = 1.
inline TransferFixedPoint transfer_fixed_point(const SymmetricMps& m, const std::optional<Mat>& twist = std::nullopt) {
  require(m.canonical, "transfer_fixed_point: MPS must be canonical");
  const Eigen::Index D = m.D;
  std::vector<Mat> B = twist ? twisted_tensor(m.A, *twist) : m.A;
  Mat R = right_map_matrix(m.A, B);
  Mat L = left_map_matrix(m.A, B);
  auto re = leading_eigen(R);
  // Dual eigenvector for the same eigenvalue (L is the transpose of R
  // under tr(Y X)).
  auto le = eigen_near(L, re.value);
  TransferFixedPoint out;
  out.eigenvalue = re.value;
  out.second_abs = re.second_abs;
  out.residual = (R * re.vector - re.value * re.vector).norm();
  Mat r = unvectorize(re.vector, D);
  Mat l = unvectorize(le.vector, D);
  if (!twist) {
    l = detail::hermitian_part_with_positive_trace(l);
    r = detail::hermitian_part_with_positive_trace(r);
    l /= l.trace().real() / static_cast<double>(D);
  }
  cplx overlap = (l * r).trace();
  if (std::abs(overlap) > 1e-10) {
    r /= overlap;
  } else {
    // Defective leading eigenvalue (possible for twists that are not
    // symmetries): no dual normalization exists.
    out.dual_normalized = false;
    l /= l.norm();
    r /= r.norm();
  }
  out.left = l;
  out.right = r;
  return out;
}

/// X -> sum_{s,s'} O_{s's} A^{s' dagger} X A^s
inline Mat apply_left_operator(const SymmetricMps& m, const Mat& op, const Mat& X) {
  Mat out = Mat::Zero(m.D, m.D);
  for (int s = 0; s < m.d; ++s)
    for (int sp = 0; sp < m.d; ++sp)
      if (op(sp, s) != cplx(0)) out += op(sp, s) * (m.A[sp].adjoint() * X * m.A[s]);
  return out;
}

inline Mat right_fixed_point(const SymmetricMps& m) {
  require(m.canonical, "MPS must be canonical");
  Mat r = Mat::Zero(m.D, m.D);
  for (int i = 0; i < m.D; ++i) r(i, i) = m.schmidt(i);
  return r;
}

inline cplx expectation(const SymmetricMps& m, const Mat& op) {
  Mat r = right_fixed_point(m);
  return (apply_left_operator(m, op, Mat::Identity(m.D, m.D)) * r).trace();
}

/// <A_0 B_r>, r >= 1.
inline cplx correlation(const SymmetricMps& m, const Mat& a, const Mat& b, int r) {
  require(r >= 1, "correlation distance must be >= 1");
  Mat id = Mat::Identity(m.d, m.d);
  Mat X = apply_left_operator(m, a, Mat::Identity(m.D, m.D));
  for (int k = 1; k < r; ++k) X = apply_left_operator(m, id, X);
  X = apply_left_operator(m, b, X);
  return (X * right_fixed_point(m)).trace();
}

inline cplx connected_correlation(const SymmetricMps& m, const Mat& a, const Mat& b, int r) {
  return correlation(m, a, b, r) - expectation(m, a) * expectation(m, b);
}

struct SchmidtSpectrum {
  std::vector<double> values;
  /// Half-open index ranges of (relatively) degenerate values.
  std::vector<std::pair<int, int>> blocks;
  double sum = 0.0;
  double lower_bound = 0.0;  // 1/D^2
};

inline SchmidtSpectrum schmidt_spectrum(const SymmetricMps& m, double rel_tol = 1e-8) {
  require(m.canonical, "schmidt_spectrum: MPS must be canonical");
  SchmidtSpectrum s;
  for (Eigen::Index i = 0; i < m.schmidt.size(); ++i) s.values.push_back(std::max(0.0, m.schmidt(i)));
  for (double v : s.values) s.sum += v;
  int start = 0;
  for (int i = 1; i <= static_cast<int>(s.values.size()); ++i) {
    if (i == static_cast<int>(s.values.size()) ||
        s.values[i - 1] - s.values[i] > rel_tol * std::max(s.values[i - 1], 1e-300)) {
      s.blocks.emplace_back(start, i);
      start = i;
    }
  }
  s.lower_bound = 1.0 / (static_cast<double>(m.D) * m.D);
  return s;
}

inline constexpr double kMaxChainDim = 16777216.0;  // 4^12

/// psi(s_1..s_n) = vl^T A^{s_1} ... A^{s_n} vr, site 1 most significant,
/// normalized.
inline Vec finite_chain_vector(const SymmetricMps& m, int n_sites, const Vec& vl, const Vec& vr) {
  require(n_sites >= 1, "finite chain needs at least one site");
  require(vl.size() == m.D && vr.size() == m.D, "boundary vectors must have length D");
  if (n_sites > 12 || std::pow(static_cast<double>(m.d), n_sites) > kMaxChainDim)
    fail(ErrorKind::resource_guard, "finite_chain_vector: d^n exceeds the 4^12 memory guard");
  // rows: physical configurations so far, cols: virtual index
  Mat cur = vl.transpose();
  for (int site = 0; site < n_sites; ++site) {
    Mat next(cur.rows() * m.d, m.D);
    for (Eigen::Index c = 0; c < cur.rows(); ++c)
      for (int s = 0; s < m.d; ++s) next.row(c * m.d + s) = cur.row(c) * m.A[s];
    cur = std::move(next);
  }
  Vec psi = cur * vr;
  double nrm = psi.norm();
  if (nrm < 1e-300) fail(ErrorKind::validation, "finite_chain_vector: boundary vectors give a zero state");
  return psi / nrm;
}

/// Applies a one-site operator at `site` (0-based, most significant first).
inline Vec apply_site_operator(const Vec& psi, const Mat& op, int site, int n_sites, int d) {
  Vec out = Vec::Zero(psi.size());
  Eigen::Index inner = 1;
  for (int k = site + 1; k < n_sites; ++k) inner *= d;
  const Eigen::Index outer = psi.size() / (inner * d);
  for (Eigen::Index o = 0; o < outer; ++o)
    for (int s = 0; s < d; ++s)
      for (int sp = 0; sp < d; ++sp) {
        cplx c = op(sp, s);
        if (c == cplx(0)) continue;
        out.segment((o * d + sp) * inner, inner) += c * psi.segment((o * d + s) * inner, inner);
      }
  return out;
}

/// Blocks k sites into one: A^{(s_1..s_k)} = A^{s_1}...A^{s_k}.
inline SymmetricMps block_sites(const SymmetricMps& m, int k) {
  require(k >= 1, "block size must be positive");
  std::vector<Mat> A = m.A;
  std::vector<Mat> U = m.onsite;
  for (int step = 1; step < k; ++step) {
    std::vector<Mat> next;
    next.reserve(A.size() * m.A.size());
    for (const auto& a : A)
      for (const auto& b : m.A) next.push_back(a * b);
    A = std::move(next);
    for (std::size_t g = 0; g < U.size(); ++g) U[g] = kron(U[g], m.onsite[g]);
  }
  SymmetricMps out = m;
  out.A = std::move(A);
  out.onsite = std::move(U);
  out.d = static_cast<int>(out.A.size());
  out.canonical = false;
  out.injective = false;
  out.label = m.label + (k > 1 ? "^" + std::to_string(k) : "");
  return out;
}

}  // namespace sptkit
