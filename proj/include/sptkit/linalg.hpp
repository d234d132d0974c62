#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <complex>
#include <random>
#include <vector>

#include "sptkit/error.hpp"
#include "sptkit/phase.hpp"

namespace sptkit {

using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

inline double max_abs(const Mat& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

inline double unitarity_error(const Mat& u) {
  return max_abs(u.adjoint() * u - Mat::Identity(u.cols(), u.cols()));
}

inline bool is_unitary(const Mat& u, double tol = 1e-10) {
  return u.rows() == u.cols() && unitarity_error(u) < tol;
}

inline double op_norm(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

struct PolarResult {
  Mat unitary;
  /// max |sigma_i / mean(sigma) - 1|: how far the input was from a scaled unitary.
  double residual;
};

/// Unitary factor of the polar decomposition X = W P.
inline PolarResult polar_unitary(const Mat& x) {
  Eigen::JacobiSVD<Mat> svd(x, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double mean = s.mean();
  double res = 0.0;
  for (Eigen::Index i = 0; i < s.size(); ++i) res = std::max(res, std::fabs(s(i) / mean - 1.0));
  return {svd.matrixU() * svd.matrixV().adjoint(), res};
}

/// exp(i t H) for Hermitian H.
inline Mat expi_hermitian(const Mat& h, double t) {
  Eigen::SelfAdjointEigenSolver<Mat> es(h);
  Vec phases = (cplx(0, t) * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// Spin operators (Sx, Sy, Sz) for spin s = two_s / 2 in the basis
/// m = s, s-1, ..., -s.
struct SpinOperators {
  Mat x, y, z;
};

inline SpinOperators spin_operators(int two_s) {
  require(two_s >= 0, "spin must be non-negative");
  const int dim = two_s + 1;
  const double s = two_s / 2.0;
  Mat sp = Mat::Zero(dim, dim);
  Mat sz = Mat::Zero(dim, dim);
  for (int k = 0; k < dim; ++k) {
    double m = s - k;
    sz(k, k) = m;
    if (k > 0) sp(k - 1, k) = std::sqrt(s * (s + 1) - m * (m + 1));
  }
  Mat sm = sp.adjoint();
  return {(sp + sm) / 2.0, (sp - sm) / cplx(0, 2), sz};
}

/// Haar-ish random unitary from the QR factorization of a Ginibre matrix.
template <class Rng>
Mat random_unitary(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  Eigen::HouseholderQR<Mat> qr(g);
  Mat q = qr.householderQ();
  Mat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) {
    cplx d = r(j, j);
    if (std::abs(d) > 0) q.col(j) *= d / std::abs(d);
  }
  return q;
}

template <class Rng>
Mat random_hermitian(Eigen::Index n, Rng& rng) {
  std::normal_distribution<double> nd;
  Mat g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = cplx(nd(rng), nd(rng));
  return (g + g.adjoint()) / 2.0;
}

/// Column-major vectorization, vec(A X B) = (B^T kron A) vec(X).
inline Vec vectorize(const Mat& x) { return Eigen::Map<const Vec>(x.data(), x.size()); }

inline Mat unvectorize(const Vec& v, Eigen::Index rows) {
  return Eigen::Map<const Mat>(v.data(), rows, v.size() / rows);
}

struct LeadingEigen {
  cplx value;
  Vec vector;
  /// Modulus of the largest eigenvalue other than the leading one (0 if none).
  double second_abs = 0.0;
};

struct Eigensystem {
  Vec values;
  Mat vectors;
};

/// Dense complex eigendecomposition. The QR iteration occasionally stalls on
/// highly structured (nilpotent, permutation-like) transfer matrices; the
/// retry conjugates by a fixed random unitary, which leaves the spectrum alone.
inline Eigensystem eigensolve(const Mat& m) {
  Eigen::ComplexEigenSolver<Mat> es(m, true);
  if (es.info() == Eigen::Success) return {es.eigenvalues(), es.eigenvectors()};
  std::mt19937_64 rng(0x5eed);
  Mat q = random_unitary(m.rows(), rng);
  es.setMaxIterations(200 * m.rows());
  es.compute(q.adjoint() * m * q, true);
  if (es.info() != Eigen::Success) fail(ErrorKind::validation, "transfer eigensolver did not converge");
  return {es.eigenvalues(), q * es.eigenvectors()};
}

/// Dense eigendecomposition; returns the eigenpair of largest modulus.
inline LeadingEigen leading_eigen(const Mat& m) {
  auto es = eigensolve(m);
  const auto& ev = es.values;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i)) > std::abs(ev(best))) best = i;
  double second = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != best) second = std::max(second, std::abs(ev(i)));
  return {ev(best), es.vectors.col(best), second};
}

/// Eigenpair whose eigenvalue is closest to `target`.
inline LeadingEigen eigen_near(const Mat& m, cplx target) {
  auto es = eigensolve(m);
  const auto& ev = es.values;
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i < ev.size(); ++i)
    if (std::abs(ev(i) - target) < std::abs(ev(best) - target)) best = i;
  double second = 0.0;
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (i != best) second = std::max(second, std::abs(ev(i)));
  return {ev(best), es.vectors.col(best), second};
}

/// Phase convention for eigenvectors: largest-modulus entry real positive.
inline void fix_phase(Eigen::Ref<Vec> v) {
  Eigen::Index k = 0;
  v.cwiseAbs().maxCoeff(&k);
  if (std::abs(v(k)) > 0) v *= std::conj(v(k)) / std::abs(v(k));
}

}  // namespace sptkit
