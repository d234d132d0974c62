#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sptkit/detector.hpp"
#include "sptkit/mps.hpp"
#include "sptkit/parallel.hpp"
#include "sptkit/proj_rep.hpp"
#include "sptkit/states.hpp"

namespace sptkit {

/// Virtual-space action of the symmetry: sum_j U(g)_ij A^j = e^{i theta(g)}
/// w(g)^dagger A^i w(g). The stored unitaries are u(g) = conj(w(g)), the
/// action on the left boundary of a right half-chain, determinant gauged.
struct EdgeRep {
  GroupPtr group;
  std::vector<Mat> u;
  std::vector<Phase> theta;
  std::vector<double> residual;
  std::vector<double> polar_residual;
  MultiplierRep rep;
  CohomologyClass cls;

  double max_residual() const { return residual.empty() ? 0.0 : *std::max_element(residual.begin(), residual.end()); }
};

struct EdgeOptions {
  double broken_tol = 1e-6;
  double residual_tol = 1e-6;
  double polar_tol = 1e-6;
};

inline EdgeRep compute_edge_rep(const SymmetricMps& in, const EdgeOptions& opt = {}) {
  SymmetricMps m = in.canonical ? in : canonicalize(in);
  const int n = m.group->order();
  const Eigen::Index D = m.D;
  std::vector<Mat> w(n);
  std::vector<Phase> theta(n);
  std::vector<double> res(n, 0.0), pres(n, 0.0);
  parallel_for(n, [&](int g) {
    if (g == 0) {
      w[0] = Mat::Identity(D, D);
      return;
    }
    std::vector<Mat> B = twisted_tensor(m.A, m.onsite[g]);
    auto lead = leading_eigen(left_map_matrix(m.A, B));
    if (std::abs(lead.value) < 1.0 - opt.broken_tol)
      fail(ErrorKind::broken_symmetry, "symmetry broken for group element " + std::to_string(g) +
                                           ": twisted transfer eigenvalue modulus " +
                                           std::to_string(std::abs(lead.value)));
    auto polar = polar_unitary(unvectorize(lead.vector, D));
    pres[g] = polar.residual;
    if (polar.residual > opt.polar_tol)
      fail(ErrorKind::classification, "polar correction residual " + std::to_string(polar.residual) +
                                          " too large for element " + std::to_string(g));
    const Mat& W = polar.unitary;
    const cplx phase = lead.value / std::abs(lead.value);
    double r = 0.0;
    for (std::size_t i = 0; i < m.A.size(); ++i) r += (B[i] - phase * W.adjoint() * m.A[i] * W).norm();
    res[g] = r;
    if (r > opt.residual_tol)
      fail(ErrorKind::classification, "edge fixed-point residual " + std::to_string(r) + " for element " +
                                          std::to_string(g));
    w[g] = W;
    theta[g] = Phase::from_complex(phase);
  });
  std::vector<Mat> u(n);
  for (int g = 0; g < n; ++g) u[g] = w[g].conjugate();
  u = det_gauge(std::move(u));
  EdgeRep e{m.group, u, theta, res, pres, extract_multiplier(m.group, u), {}};
  e.cls = classify_rep(e.rep);
  return e;
}

struct SptIndexResult {
  CohomologyClass cls;
  bool trivial = true;
  double max_residual = 0.0;
  double snap_error = 0.0;
  std::optional<std::string> verdict;
  std::optional<cplx> commutator;
};

/// Class of a family of virtual unitaries (any phases, any basis).
inline CohomologyClass index_from_unitaries(const GroupPtr& group, const std::vector<Mat>& u) {
  return classify_rep(extract_multiplier(group, det_gauge(u)));
}

inline SptIndexResult compute_index(const SymmetricMps& m, const EdgeOptions& opt = {}) {
  EdgeRep e = compute_edge_rep(m, opt);
  SptIndexResult r;
  r.cls = e.cls;
  r.trivial = e.cls.is_trivial();
  r.max_residual = std::max(e.max_residual(), e.rep.residual);
  r.snap_error = e.cls.snap_error;
  return r;
}

/// Rebinds the on-site action of m to the detector subgroup realizations.
inline SymmetricMps with_detector(const SymmetricMps& m, const CompactDetectorSpec& spec) {
  require(!spec.realizations.empty() && spec.realizations[0].rows() == m.d,
          "detector realizations do not match the physical dimension");
  SymmetricMps out = make_mps(m.A, spec.subgroup, spec.realizations, m.label, spec.kind);
  out.canonical = m.canonical;
  out.injective = m.injective;
  out.schmidt = m.schmidt;
  return out;
}

/// SO3: commutator phase tr(u_x u_y u_x^dagger u_y^dagger)/D = +-1, with -1
/// the Haldane phase. U1: the edge rep of Z_n must lift linearly.
inline SptIndexResult detector_verdict(const SymmetricMps& m, const CompactDetectorSpec& spec,
                                       const EdgeOptions& opt = {}) {
  SymmetricMps md = with_detector(m, spec);
  EdgeRep e = compute_edge_rep(md, opt);
  SptIndexResult r;
  r.cls = e.cls;
  r.trivial = e.cls.is_trivial();
  r.max_residual = std::max(e.max_residual(), e.rep.residual);
  r.snap_error = e.cls.snap_error;
  if (spec.kind == DetectorKind::so3) {
    const Mat& ux = e.u[1];
    const Mat& uy = e.u[2];
    cplx c = (ux * uy * ux.adjoint() * uy.adjoint()).trace() / static_cast<double>(ux.rows());
    r.commutator = c;
    bool minus = std::abs(c + 1.0) < 1e-6, plus = std::abs(c - 1.0) < 1e-6;
    if (!minus && !plus)
      fail(ErrorKind::classification, "SO(3) detector: commutator phase is not +-1 within 1e-6");
    if (minus == r.trivial) fail(ErrorKind::classification, "SO(3) detector: commutator disagrees with the class");
    r.verdict = minus ? "haldane" : "trivial";
  } else {
    if (!r.trivial) fail(ErrorKind::classification, "U(1) detector: edge rep of Z_n does not lift linearly");
    r.verdict = "trivial";
  }
  return r;
}

struct StackCheck {
  bool passed = false;
  CohomologyClass stacked;
  CohomologyClass expected;
  double max_residual = 0.0;
};

inline StackCheck stacked_index_check(const SymmetricMps& a, const SymmetricMps& b) {
  auto ia = compute_index(a), ib = compute_index(b);
  auto is = compute_index(stack_states(a, b));
  StackCheck c{false, is.cls, class_product(ia.cls, ib.cls),
               std::max({ia.max_residual, ib.max_residual, is.max_residual})};
  c.passed = c.stacked == c.expected && same_class(c.stacked, c.expected);
  return c;
}

// ---------------------------------------------------------------------------
// Relative zero-dimensional charges of product states.

/// g -> prod_{j in support} q_j(g) / q'_j(g). Sites outside the support must
/// carry equal charges.
inline Charge relative_charge(const std::vector<Charge>& a, const std::vector<Charge>& b, const std::set<int>& support) {
  require(a.size() == b.size() && !a.empty(), "relative_charge: charge lists must have equal, nonzero length");
  for (int j : support) require(j >= 0 && j < static_cast<int>(a.size()), "relative_charge: support outside the window");
  for (int j = 0; j < static_cast<int>(a.size()); ++j)
    if (!support.count(j) && !charges_equal(a[j], b[j]))
      fail(ErrorKind::validation, "relative_charge: states differ at site " + std::to_string(j) +
                                      " outside the declared support");
  Charge q = trivial_charge(a[0].group);
  for (int j : support) q = charge_product(q, charge_product(a[j], charge_conjugate(b[j])));
  return q;
}

/// Pair (w, e) of one-site charges that cancels a relative charge q when w is
/// stacked onto the first state and e onto the second: w carries conj(q).
inline std::pair<Charge, Charge> neutralizing_pair(const Charge& q) {
  return {charge_conjugate(q), trivial_charge(q.group)};
}

// ---------------------------------------------------------------------------
// Schmidt-block diagnostics.

struct TopBlockResult {
  int block_size = 0;
  CohomologyClass cls;
  double leakage = 0.0;  // weight of u(g) outside the top block
};

inline TopBlockResult top_block_class(const SymmetricMps& in) {
  SymmetricMps m = in.canonical ? in : canonicalize(in);
  EdgeRep e = compute_edge_rep(m);
  auto spec = schmidt_spectrum(m);
  const int k = spec.blocks.front().second;
  TopBlockResult r;
  r.block_size = k;
  std::vector<Mat> sub;
  for (const auto& u : e.u) {
    r.leakage = std::max(r.leakage, std::max(max_abs(u.topRightCorner(k, m.D - k)), max_abs(u.bottomLeftCorner(m.D - k, k))));
    sub.push_back(u.topLeftCorner(k, k));
  }
  if (r.leakage > 1e-8) fail(ErrorKind::classification, "edge rep does not preserve the top Schmidt block");
  r.cls = index_from_unitaries(m.group, sub);
  return r;
}

/// X -> sum_{s,s'} O_{s's} A^s X A^{s' dagger}
inline Mat apply_right_operator(const SymmetricMps& m, const Mat& op, const Mat& X) {
  Mat out = Mat::Zero(m.D, m.D);
  for (int s = 0; s < m.d; ++s)
    for (int sp = 0; sp < m.d; ++sp)
      if (op(sp, s) != cplx(0)) out += op(sp, s) * (m.A[s] * X * m.A[sp].adjoint());
  return out;
}

/// Matrix elements <xi_a| O |xi_b> between top-block Schmidt vectors of the
/// right half-chain, with O placed w sites away from the cut, minus
/// delta_ab <O>. Returns the largest entry of the deviation.
inline double block_matrix_deviation(const SymmetricMps& in, const Mat& op, int w) {
  require(w >= 0, "window width must be non-negative");
  SymmetricMps m = in.canonical ? in : canonicalize(in);
  auto spec = schmidt_spectrum(m);
  const int k = spec.blocks.front().second;
  Mat id = Mat::Identity(m.d, m.d);
  Mat Q = apply_right_operator(m, op, right_fixed_point(m));
  for (int t = 0; t < w; ++t) Q = apply_right_operator(m, id, Q);
  Mat top = Q.topLeftCorner(k, k) / spec.values[0];
  return max_abs(top - expectation(m, op) * Mat::Identity(k, k));
}

}  // namespace sptkit
