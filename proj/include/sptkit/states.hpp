#pragma once

#include <optional>
#include <string>

#include "sptkit/detector.hpp"
#include "sptkit/mps.hpp"
#include "sptkit/proj_rep.hpp"

namespace sptkit {

/// Bonded maximally entangled pairs on V (x) conj(V): A^{(a,b)} = |a><b| / sqrt(D)
/// with physical index a*D + b and on-site action v(g) (x) conj(v(g)). The
/// regular mu-representation is used unless a smaller rep is supplied.
inline SymmetricMps fixed_point_state(const Cocycle& mu, const std::optional<MultiplierRep>& rep = std::nullopt) {
  if (!mu.is_exact()) fail(ErrorKind::validation, "fixed_point_state: cocycle must be exact");
  MultiplierRep v = rep ? *rep : regular_projective_rep(normalize(mu));
  if (rep) {
    require(same_group(rep->group, mu.group), "fixed_point_state: rep group mismatch");
    if (!same_class(classify_rep(*rep), classify(mu)))
      fail(ErrorKind::validation, "fixed_point_state: supplied rep does not carry the class of mu");
  }
  const int D = v.dim;
  std::vector<Mat> A;
  const double s = 1.0 / std::sqrt(static_cast<double>(D));
  for (int a = 0; a < D; ++a)
    for (int b = 0; b < D; ++b) {
      Mat m = Mat::Zero(D, D);
      m(a, b) = s;
      A.push_back(std::move(m));
    }
  std::vector<Mat> U;
  for (const auto& m : v.matrices) U.push_back(kron(m, m.conjugate()));
  return canonicalize(make_mps(std::move(A), mu.group, std::move(U), "fixed-point"));
}

/// Spin-1 AKLT chain, basis m = +1, 0, -1, acted on by the SO(3) detector.
inline SymmetricMps aklt_state() {
  Mat sp(2, 2), sm(2, 2), sz(2, 2);
  sp << 0, 1, 0, 0;
  sm << 0, 0, 1, 0;
  sz << 1, 0, 0, -1;
  std::vector<Mat> A{std::sqrt(2.0 / 3.0) * sp, -std::sqrt(1.0 / 3.0) * sz, -std::sqrt(2.0 / 3.0) * sm};
  auto det = so3_detector(2);
  return canonicalize(make_mps(std::move(A), det.subgroup, det.realizations, "aklt", DetectorKind::so3));
}

/// Cluster state with pairs of qubits blocked into one site (d = 4, D = 2):
/// B^{(s1,s2)}[a,b] = delta_{b,s2} (-1)^{a s1 + s1 s2} / 2, physical index
/// 2 s1 + s2. Z2xZ2 acts by X on the first (element 1) or second (element 2)
/// qubit of each pair.
inline SymmetricMps cluster_state() {
  std::vector<Mat> A;
  for (int s1 = 0; s1 < 2; ++s1)
    for (int s2 = 0; s2 < 2; ++s2) {
      Mat m = Mat::Zero(2, 2);
      for (int a = 0; a < 2; ++a) m(a, s2) = ((a * s1 + s1 * s2) % 2 ? -0.5 : 0.5);
      A.push_back(std::move(m));
    }
  Mat x(2, 2), id = Mat::Identity(2, 2);
  x << 0, 1, 1, 0;
  std::vector<Mat> U{kron(id, id), kron(x, id), kron(id, x), kron(x, x)};
  return canonicalize(make_mps(std::move(A), build_group("Z2xZ2"), std::move(U), "cluster"));
}

/// D = 1, d = 1 product state carrying the on-site charge q.
inline SymmetricMps product_state(const Charge& q) {
  require(validate_charge(q).empty(), "product_state: charge is not multiplicative");
  std::vector<Mat> U;
  for (const auto& p : q.values) U.push_back(Mat::Constant(1, 1, p.value()));
  return canonicalize(make_mps({Mat::Identity(1, 1)}, q.group, std::move(U), "product"));
}

/// Spin-1 |m=0> product state under the SO(3) detector.
inline SymmetricMps spin1_product_state() {
  std::vector<Mat> A{Mat::Zero(1, 1), Mat::Identity(1, 1), Mat::Zero(1, 1)};
  auto det = so3_detector(2);
  return canonicalize(make_mps(std::move(A), det.subgroup, det.realizations, "product-spin1", DetectorKind::so3));
}

/// Catalog names: "aklt", "cluster", "product" (trivial charge on `group`),
/// "product-spin1".
inline SymmetricMps catalog_state(const std::string& name, const std::string& group = "Z2xZ2") {
  if (name == "aklt") return aklt_state();
  if (name == "cluster") return cluster_state();
  if (name == "product") return product_state(trivial_charge(build_group(group)));
  if (name == "product-spin1") return spin1_product_state();
  fail(ErrorKind::validation, "unknown catalog state '" + name + "'");
}

inline constexpr int kMaxAutoBlock = 3;

/// Kronecker product in physical and bond spaces; re-canonicalized, blocking
/// up to three sites if the plain product is not injective.
inline SymmetricMps stack_states(const SymmetricMps& a, const SymmetricMps& b) {
  require(same_group(a.group, b.group), "stack_states: group mismatch");
  require(a.detector == b.detector, "stack_states: detector mismatch");
  std::vector<Mat> A;
  for (const auto& x : a.A)
    for (const auto& y : b.A) A.push_back(kron(x, y));
  std::vector<Mat> U;
  for (std::size_t g = 0; g < a.onsite.size(); ++g) U.push_back(kron(a.onsite[g], b.onsite[g]));
  SymmetricMps raw = make_mps(std::move(A), a.group, std::move(U), a.label + "*" + b.label, a.detector);
  std::string last;
  for (int k = 1; k <= kMaxAutoBlock; ++k) {
    try {
      return canonicalize(k == 1 ? raw : block_sites(raw, k));
    } catch (const Error& e) {
      last = e.what();
    }
  }
  fail(ErrorKind::validation, "stacked state is not injective even after blocking " + std::to_string(kMaxAutoBlock) +
                                  " sites: " + last);
}

}  // namespace sptkit
