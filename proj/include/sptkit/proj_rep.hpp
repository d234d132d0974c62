#pragma once

#include <string>
#include <vector>

#include "sptkit/cohomology.hpp"
#include "sptkit/linalg.hpp"

namespace sptkit {

/// u(g) u(h) = mu(g,h) u(gh) with u(e) = 1.
struct MultiplierRep {
  GroupPtr group;
  int dim = 0;
  std::vector<Mat> matrices;
  Cocycle multiplier;
  /// Largest |u(g)u(h) - mu(g,h)u(gh)| entry seen during extraction.
  double residual = 0.0;
};

struct ExtractOptions {
  double unitarity_tol = 1e-10;
  double residual_tol = 1e-8;
};

/// mu(g,h) = tr(u(g) u(h) u(gh)^dagger) / dim, with validation of unitarity,
/// |mu| = 1 and the multiplier residual.
inline MultiplierRep extract_multiplier(const GroupPtr& group, std::vector<Mat> matrices,
                                        const ExtractOptions& opt = {}) {
  const int n = group->order();
  require(static_cast<int>(matrices.size()) == n, "extract_multiplier: need one matrix per group element");
  const Eigen::Index d = matrices[0].rows();
  for (int g = 0; g < n; ++g) {
    require(matrices[g].rows() == d && matrices[g].cols() == d, "extract_multiplier: matrix shape mismatch");
    if (unitarity_error(matrices[g]) > opt.unitarity_tol)
      fail(ErrorKind::validation, "extract_multiplier: u(" + std::to_string(g) + ") is not unitary");
  }
  if (max_abs(matrices[0] - Mat::Identity(d, d)) > opt.unitarity_tol)
    fail(ErrorKind::validation, "extract_multiplier: u(e) is not the identity");

  MultiplierRep rep{group, static_cast<int>(d), std::move(matrices), trivial_cocycle(group), 0.0};
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) {
      const Mat& ugh = rep.matrices[group->mul(g, h)];
      Mat prod = rep.matrices[g] * rep.matrices[h];
      cplx mu = (prod * ugh.adjoint()).trace() / static_cast<double>(d);
      if (std::fabs(std::abs(mu) - 1.0) > opt.residual_tol)
        fail(ErrorKind::validation, "extract_multiplier: |mu(" + std::to_string(g) + "," + std::to_string(h) +
                                        ")| deviates from 1; matrices do not form a multiplier representation");
      Phase p = Phase::from_complex(mu);
      double res = max_abs(prod - p.value() * ugh);
      if (res > opt.residual_tol)
        fail(ErrorKind::validation, "extract_multiplier: residual " + std::to_string(res) + " at (" +
                                        std::to_string(g) + "," + std::to_string(h) + ")");
      rep.residual = std::max(rep.residual, res);
      rep.multiplier.at(g, h) = p;
    }
  return rep;
}

/// Snap denominator 2|G|·dim used for extracted multipliers.
inline ClassifyOptions snap_options_for(const MultiplierRep& rep) {
  ClassifyOptions o;
  o.snap_denominator = 2 * static_cast<std::int64_t>(rep.group->order()) * rep.dim;
  return o;
}

inline CohomologyClass classify_rep(const MultiplierRep& rep) { return classify(rep.multiplier, snap_options_for(rep)); }

inline MultiplierRep rep_tensor(const MultiplierRep& a, const MultiplierRep& b) {
  require(same_group(a.group, b.group), "rep_tensor: group mismatch");
  MultiplierRep out{a.group, a.dim * b.dim, {}, cocycle_product(a.multiplier, b.multiplier),
                    std::max(a.residual, b.residual)};
  for (std::size_t g = 0; g < a.matrices.size(); ++g) out.matrices.push_back(kron(a.matrices[g], b.matrices[g]));
  return out;
}

inline MultiplierRep rep_conjugate(const MultiplierRep& a) {
  MultiplierRep out{a.group, a.dim, {}, cocycle_inverse(a.multiplier), a.residual};
  for (const auto& m : a.matrices) out.matrices.push_back(m.conjugate());
  return out;
}

/// mu-twisted regular representation on C[G]: v(g)|k> = mu(g,k)|gk>.
inline MultiplierRep regular_projective_rep(const Cocycle& mu) {
  if (!mu.is_exact()) fail(ErrorKind::validation, "regular_projective_rep: cocycle must be exact");
  require_cocycle(mu, "regular_projective_rep");
  if (!is_normalized(mu)) fail(ErrorKind::validation, "regular_projective_rep: cocycle must be normalized");
  const auto& G = *mu.group;
  const int n = G.order();
  MultiplierRep rep{mu.group, n, {}, mu, 0.0};
  for (int g = 0; g < n; ++g) {
    Mat v = Mat::Zero(n, n);
    for (int k = 0; k < n; ++k) v(G.mul(g, k), k) = mu(g, k).value();
    rep.matrices.push_back(std::move(v));
  }
  return rep;
}

/// u(g) -> u(g) / det(u(g))^{1/D}: the multiplier then takes values in the
/// D-th roots of unity.
inline std::vector<Mat> det_gauge(std::vector<Mat> u) {
  for (std::size_t g = 0; g < u.size(); ++g) {
    if (g == 0) {
      u[0] = Mat::Identity(u[0].rows(), u[0].cols());
      continue;
    }
    const double d = static_cast<double>(u[g].rows());
    cplx det = u[g].determinant();
    u[g] *= std::polar(1.0, -std::arg(det) / d);
  }
  return u;
}

/// u(g) -> lambda(g) u(g).
inline std::vector<Mat> phase_regauge(std::vector<Mat> u, const std::vector<Phase>& lambda) {
  require(lambda.size() == u.size(), "phase_regauge: size mismatch");
  for (std::size_t g = 0; g < u.size(); ++g) u[g] *= lambda[g].value();
  return u;
}

/// Dimension of {X : u(g) X = X u(g) for all g}; 1 for irreducible reps.
inline int commutant_dimension(const MultiplierRep& rep, double tol = 1e-9) {
  const Eigen::Index d = rep.dim;
  const Mat id = Mat::Identity(d, d);
  Mat stacked(static_cast<Eigen::Index>(rep.matrices.size()) * d * d, d * d);
  for (std::size_t g = 0; g < rep.matrices.size(); ++g) {
    const Mat& u = rep.matrices[g];
    stacked.block(static_cast<Eigen::Index>(g) * d * d, 0, d * d, d * d) = kron(id, u) - kron(u.transpose(), id);
  }
  Eigen::JacobiSVD<Mat> svd(stacked);
  const auto& s = svd.singularValues();
  int null = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) null += s(i) < tol;
  return null + static_cast<int>(d * d - s.size());
}

}  // namespace sptkit
