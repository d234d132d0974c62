#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "sptkit/error.hpp"
#include "sptkit/group.hpp"
#include "sptkit/phase.hpp"
#include "sptkit/smith.hpp"

namespace sptkit {

/// U(1)-valued 2-cochain on a finite group; entry (g,h) is mu(g,h).
struct Cocycle {
  GroupPtr group;
  std::vector<Phase> table;

  int order() const { return group->order(); }
  const Phase& operator()(int g, int h) const { return table[static_cast<std::size_t>(g) * order() + h]; }
  Phase& at(int g, int h) { return table[static_cast<std::size_t>(g) * order() + h]; }

  bool is_exact() const {
    return std::all_of(table.begin(), table.end(), [](const Phase& p) { return p.is_exact(); });
  }
};

inline Cocycle trivial_cocycle(const GroupPtr& g) {
  return Cocycle{g, std::vector<Phase>(static_cast<std::size_t>(g->order()) * g->order())};
}

/// Builds mu(g,h) = exp(2 pi i exps[g*n+h] / den).
inline Cocycle cocycle_from_exponents(const GroupPtr& g, const std::vector<std::int64_t>& exps,
                                      std::int64_t den) {
  const int n = g->order();
  require(static_cast<int>(exps.size()) == n * n, "cocycle exponent table has wrong size");
  Cocycle c{g, {}};
  c.table.reserve(exps.size());
  for (auto e : exps) c.table.push_back(Phase::exact(e, den));
  return c;
}

/// d nu(g,h) = nu(g) nu(h) / nu(gh).
inline Cocycle coboundary(const GroupPtr& g, const std::vector<Phase>& nu) {
  const int n = g->order();
  require(static_cast<int>(nu.size()) == n, "coboundary: nu has wrong length");
  Cocycle c = trivial_cocycle(g);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) c.at(a, b) = nu[a] * nu[b] / nu[g->mul(a, b)];
  return c;
}

struct Triple {
  int g, h, k;
};

namespace detail {
inline bool phases_match(const Phase& a, const Phase& b, double tol) {
  if (a.is_exact() && b.is_exact()) return a == b;
  return Phase::distance(a, b) < tol;
}
}  // namespace detail

/// Triples violating mu(h,k) mu(g,hk) = mu(gh,k) mu(g,h). Exact entries are
/// compared exactly, approximate ones to `tol` radians.
inline std::vector<Triple> check_cocycle(const Cocycle& mu, double tol = 1e-9) {
  const auto& G = *mu.group;
  const int n = G.order();
  require(static_cast<int>(mu.table.size()) == n * n, "cocycle table has wrong size");
  std::vector<Triple> out;
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h)
      for (int k = 0; k < n; ++k) {
        Phase lhs = mu(h, k) * mu(g, G.mul(h, k));
        Phase rhs = mu(G.mul(g, h), k) * mu(g, h);
        if (!detail::phases_match(lhs, rhs, tol)) out.push_back({g, h, k});
      }
  return out;
}

inline void require_cocycle(const Cocycle& mu, const char* who) {
  auto bad = check_cocycle(mu);
  if (!bad.empty()) {
    fail(ErrorKind::validation, std::string(who) + ": input is not a 2-cocycle (fails at (" +
                                    std::to_string(bad[0].g) + "," + std::to_string(bad[0].h) + "," +
                                    std::to_string(bad[0].k) + "))");
  }
}

inline Cocycle cocycle_product(const Cocycle& a, const Cocycle& b) {
  require(same_group(a.group, b.group), "cocycle_product: group mismatch");
  Cocycle c = a;
  for (std::size_t i = 0; i < c.table.size(); ++i) c.table[i] *= b.table[i];
  return c;
}

inline Cocycle cocycle_inverse(const Cocycle& a) {
  Cocycle c = a;
  for (auto& p : c.table) p = p.inverse();
  return c;
}

/// Divides out the constant coboundary mu(e,e); for a cocycle this makes
/// mu(e,g) = mu(g,e) = 1.
inline Cocycle normalize(const Cocycle& mu) {
  require_cocycle(mu, "normalize");
  const Phase c = mu(0, 0);
  Cocycle out = mu;
  for (auto& p : out.table) p = p / c;
  for (int g = 0; g < mu.order(); ++g) {
    out.at(0, g) = Phase::one();
    out.at(g, 0) = Phase::one();
  }
  return out;
}

inline bool is_normalized(const Cocycle& mu) {
  for (int g = 0; g < mu.order(); ++g)
    if (!mu(0, g).is_one() || !mu(g, 0).is_one()) return false;
  return true;
}

/// Rounds every entry to the nearest multiple of 1/den; fails with a
/// classification error if some entry is farther than `tol` radians away.
inline Cocycle snap_cocycle(const Cocycle& mu, std::int64_t den, double tol = 1e-6, double* max_err = nullptr) {
  Cocycle out = mu;
  double worst = 0.0;
  for (std::size_t i = 0; i < out.table.size(); ++i) {
    auto s = mu.table[i].snapped(den, tol);
    if (!s) {
      fail(ErrorKind::classification,
           "snap failure: phase " + mu.table[i].to_string() + " is not within " + std::to_string(tol) +
               " rad of a multiple of 1/" + std::to_string(den));
    }
    worst = std::max(worst, Phase::distance(*s, mu.table[i]));
    out.table[i] = *s;
  }
  if (max_err) *max_err = worst;
  return out;
}

// ---------------------------------------------------------------------------
// Linear algebra of normalized cochains over Z/MZ, M = |G|^2.

/// Smith data of the normalized coboundary map on 2-cochains (rows: triples
/// of non-identity elements, columns: pairs). Its non-unit invariant factors
/// are the elementary divisors of H^2(G, U(1)).
struct CohomologyStructure {
  GroupPtr group;
  std::int64_t order = 1;    // N
  std::int64_t modulus = 1;  // M = N^2
  SmithResult d2;
  std::vector<std::int64_t> divisors;  // invariant factors > 1, in divisibility order
  std::vector<int> divisor_pivots;     // pivot index of each divisor in d2

  int pair_column(int g, int h) const { return (g - 1) * static_cast<int>(order - 1) + (h - 1); }
};

inline constexpr int kMaxH2Order = 64;
inline constexpr std::int64_t kMaxH2Entries = 20'000'000;

namespace detail {

inline std::shared_ptr<const CohomologyStructure> build_structure(const GroupPtr& group) {
  const int n = group->order();
  if (n > kMaxH2Order)
    fail(ErrorKind::resource_guard, "H^2 computation limited to group order <= 64 (got " + std::to_string(n) + ")");
  const std::int64_t m = static_cast<std::int64_t>(n) - 1;
  if (m * m * m * m * m > kMaxH2Entries)
    fail(ErrorKind::resource_guard, "H^2 linear system for order " + std::to_string(n) + " exceeds the memory guard");
  auto s = std::make_shared<CohomologyStructure>();
  s->group = group;
  s->order = n;
  s->modulus = static_cast<std::int64_t>(n) * n;
  const int rows = static_cast<int>(m * m * m), cols = static_cast<int>(m * m);
  ModMatrix d2(rows, cols, s->modulus);
  const auto& G = *group;
  int row = 0;
  for (int g = 1; g < n; ++g)
    for (int h = 1; h < n; ++h)
      for (int k = 1; k < n; ++k, ++row) {
        int gh = G.mul(g, h), hk = G.mul(h, k);
        d2.add(row, s->pair_column(h, k), 1);
        if (gh != 0) d2.add(row, s->pair_column(gh, k), -1);
        if (hk != 0) d2.add(row, s->pair_column(g, hk), 1);
        d2.add(row, s->pair_column(g, h), -1);
      }
  s->d2 = smith_normal_form(std::move(d2));
  for (int t = 0; t < s->d2.rank(); ++t) {
    std::int64_t d = s->d2.diagonal[t];
    if (d != 1) {
      if (n % d != 0) fail(ErrorKind::classification, "internal: invariant factor does not divide |G|");
      s->divisors.push_back(d);
      s->divisor_pivots.push_back(t);
    }
  }
  return s;
}

}  // namespace detail

/// Cached per multiplication table; safe to call concurrently.
inline std::shared_ptr<const CohomologyStructure> cohomology_structure(const GroupPtr& group) {
  static std::mutex mu;
  static std::map<std::vector<std::vector<int>>, std::shared_ptr<const CohomologyStructure>> cache;
  auto key = group->table();
  {
    std::lock_guard<std::mutex> lock(mu);
    if (auto it = cache.find(key); it != cache.end()) return it->second;
  }
  auto s = detail::build_structure(group);
  std::lock_guard<std::mutex> lock(mu);
  return cache.emplace(std::move(key), std::move(s)).first->second;
}

struct H2Result {
  GroupPtr group;
  std::vector<std::int64_t> divisors;  // empty: trivial H^2
  std::vector<Cocycle> generators;     // one |G|-th-root-valued representative per divisor
};

inline H2Result compute_h2(const GroupPtr& group) {
  auto s = cohomology_structure(group);
  H2Result r{group, s->divisors, {}};
  const int n = group->order();
  const auto& C = s->d2.column_transform;
  for (std::size_t i = 0; i < s->divisors.size(); ++i) {
    const std::int64_t d = s->divisors[i];
    const int t = s->divisor_pivots[i];
    std::vector<std::int64_t> exps(static_cast<std::size_t>(n) * n, 0);
    for (int g = 1; g < n; ++g)
      for (int h = 1; h < n; ++h) {
        std::int64_t v = C.at(s->pair_column(g, h), t) % n;
        exps[static_cast<std::size_t>(g) * n + h] = (v * (n / d)) % n;
      }
    r.generators.push_back(cocycle_from_exponents(group, exps, n));
  }
  return r;
}

namespace detail {

/// For an exact normalized cocycle, returns a cohomologous cocycle with
/// values in the |G|-th roots of unity together with nu such that
/// mu = reduced * d nu. Uses mu^N = d phi with phi(g) = prod_h mu(g,h).
inline std::pair<Cocycle, std::vector<Phase>> reduce_to_order_roots(const Cocycle& mu) {
  const auto& G = *mu.group;
  const int n = G.order();
  std::vector<Phase> nu(n);
  for (int g = 0; g < n; ++g) {
    Phase phi = Phase::one();
    for (int h = 0; h < n; ++h) phi *= mu(g, h);
    nu[g] = Phase::exact(phi.num(), phi.den() * n);
  }
  Cocycle red = cocycle_product(mu, cocycle_inverse(coboundary(mu.group, nu)));
  for (const auto& p : red.table)
    if (n % p.den() != 0) fail(ErrorKind::classification, "internal: root reduction failed");
  return {red, nu};
}

inline std::vector<std::int64_t> exponents_over(const Cocycle& mu, std::int64_t den) {
  std::vector<std::int64_t> k;
  k.reserve(mu.table.size());
  for (const auto& p : mu.table) k.push_back(p.num() * (den / p.den()));
  return k;
}

}  // namespace detail

struct ClassifyOptions {
  /// Denominator used to snap approximate entries; 0 selects 2|G|.
  std::int64_t snap_denominator = 0;
  double snap_tolerance = 1e-6;
};

/// Exact version of mu: approximate entries are snapped to multiples of
/// 1/snap_denominator.
inline Cocycle exact_cocycle(const Cocycle& mu, const ClassifyOptions& opt = {}, double* snap_err = nullptr) {
  if (snap_err) *snap_err = 0.0;
  if (mu.is_exact()) return mu;
  require_cocycle(mu, "classify");
  std::int64_t den = opt.snap_denominator > 0 ? opt.snap_denominator : 2 * mu.order();
  return snap_cocycle(mu, den, opt.snap_tolerance, snap_err);
}

inline Cocycle exact_normalized(const Cocycle& mu, const ClassifyOptions& opt = {}, double* snap_err = nullptr) {
  return normalize(exact_cocycle(mu, opt, snap_err));
}

struct CoboundaryWitness {
  std::vector<Phase> nu;
};

/// nu with d nu = mu if mu is a coboundary. Solved as a linear system over
/// Z/|G|^2 Z, which suffices because any nu with d nu in the |G|-th roots of
/// unity takes values in the |G|^2-th roots.
inline std::optional<CoboundaryWitness> is_coboundary(const Cocycle& mu, const ClassifyOptions& opt = {}) {
  const Cocycle target = exact_cocycle(mu, opt);
  require_cocycle(target, "is_coboundary");
  const Phase c = target(0, 0);
  Cocycle m = normalize(target);
  auto [red, nu0] = detail::reduce_to_order_roots(m);
  const auto& G = *mu.group;
  const int n = G.order();
  const std::int64_t M = static_cast<std::int64_t>(n) * n;

  std::vector<Phase> nu(n);
  for (int g = 0; g < n; ++g) nu[g] = c * nu0[g];
  if (n > 1) {
    const int m1 = n - 1;
    ModMatrix d1(m1 * m1, m1, M);
    ModMatrix rhs(m1 * m1, 1, M);
    auto k = detail::exponents_over(red, n);
    for (int g = 1; g < n; ++g)
      for (int h = 1; h < n; ++h) {
        int row = (g - 1) * m1 + (h - 1);
        d1.add(row, g - 1, 1);
        d1.add(row, h - 1, 1);
        int gh = G.mul(g, h);
        if (gh != 0) d1.add(row, gh - 1, -1);
        rhs.at(row, 0) = (k[static_cast<std::size_t>(g) * n + h] * n) % M;
      }
    auto snf = smith_normal_form(std::move(d1), &rhs);
    std::vector<std::int64_t> z(m1, 0);
    for (int t = 0; t < m1 * m1; ++t) {
      std::int64_t b = snf.rhs.at(t, 0);
      if (t < snf.rank()) {
        std::int64_t s = snf.diagonal[t];
        if (b % s != 0) return std::nullopt;
        z[t] = b / s;
      } else if (b != 0) {
        return std::nullopt;
      }
    }
    for (int g = 1; g < n; ++g) {
      std::int64_t bg = 0;
      for (int t = 0; t < m1; ++t) bg = (bg + detail::mulmod(snf.column_transform.at(g - 1, t), z[t], M)) % M;
      nu[g] *= Phase::exact(bg, M);
    }
  }
  // The witness must reproduce the (snapped) input exactly.
  Cocycle check = coboundary(mu.group, nu);
  for (std::size_t i = 0; i < check.table.size(); ++i)
    if (!(check.table[i] == target.table[i]))
      fail(ErrorKind::classification, "internal: coboundary witness does not reproduce the cocycle");
  return CoboundaryWitness{nu};
}

/// Equivalence class in H^2(G, U(1)).
struct CohomologyClass {
  GroupPtr group;
  std::vector<std::int64_t> divisors;
  /// Coordinates with respect to compute_h2's generators, entry i in Z/divisors[i].
  std::vector<std::int64_t> coordinates;
  /// Canonical representative: sum of coordinates times generators (exponents over |G|).
  Cocycle representative;
  /// For abelian groups, beta(g,h) = mu(g,h)/mu(h,g), a complete invariant.
  std::optional<std::vector<Phase>> fingerprint;
  double snap_error = 0.0;

  bool is_trivial() const {
    return std::all_of(coordinates.begin(), coordinates.end(), [](std::int64_t c) { return c == 0; });
  }

  friend bool operator==(const CohomologyClass& a, const CohomologyClass& b) {
    return same_group(a.group, b.group) && a.coordinates == b.coordinates;
  }
};

inline std::vector<Phase> bicharacter_fingerprint(const Cocycle& mu) {
  const int n = mu.order();
  std::vector<Phase> beta(static_cast<std::size_t>(n) * n);
  for (int g = 0; g < n; ++g)
    for (int h = 0; h < n; ++h) beta[static_cast<std::size_t>(g) * n + h] = mu(g, h) / mu(h, g);
  return beta;
}

inline CohomologyClass class_from_coordinates(const GroupPtr& group, std::vector<std::int64_t> coords) {
  auto s = cohomology_structure(group);
  auto h2 = compute_h2(group);
  require(coords.size() == s->divisors.size(), "class coordinates have wrong length");
  Cocycle rep = trivial_cocycle(group);
  for (std::size_t i = 0; i < coords.size(); ++i) {
    coords[i] %= s->divisors[i];
    if (coords[i] < 0) coords[i] += s->divisors[i];
    for (std::int64_t c = 0; c < coords[i]; ++c) rep = cocycle_product(rep, h2.generators[i]);
  }
  CohomologyClass cls{group, s->divisors, std::move(coords), rep, std::nullopt, 0.0};
  if (group->is_abelian()) cls.fingerprint = bicharacter_fingerprint(rep);
  return cls;
}

/// Snaps (if approximate), normalizes, reduces to |G|-th roots and reads off
/// the class coordinates from the Smith data.
inline CohomologyClass classify(const Cocycle& mu, const ClassifyOptions& opt = {}) {
  double snap_err = 0.0;
  Cocycle m = exact_normalized(mu, opt, &snap_err);
  auto [red, nu] = detail::reduce_to_order_roots(m);
  (void)nu;
  auto s = cohomology_structure(mu.group);
  const int n = mu.order();
  const std::int64_t M = s->modulus;
  auto k = detail::exponents_over(red, n);
  std::vector<std::int64_t> coords;
  const auto& Ci = s->d2.column_transform_inverse;
  for (std::size_t i = 0; i < s->divisors.size(); ++i) {
    const int t = s->divisor_pivots[i];
    const std::int64_t d = s->divisors[i];
    std::int64_t y = 0;
    for (int g = 1; g < n; ++g)
      for (int h = 1; h < n; ++h)
        y = (y + detail::mulmod(Ci.at(t, s->pair_column(g, h)), k[static_cast<std::size_t>(g) * n + h], M)) % M;
    const std::int64_t step = n / d;
    if (y % step != 0) fail(ErrorKind::classification, "internal: class coordinate is not integral");
    coords.push_back((y / step) % d);
  }
  CohomologyClass cls = class_from_coordinates(mu.group, std::move(coords));
  cls.snap_error = snap_err;
  if (mu.group->is_abelian()) cls.fingerprint = bicharacter_fingerprint(m);
  return cls;
}

/// Abelian groups compare fingerprints; otherwise decided by
/// is_coboundary(mu1 / mu2) on the representatives.
inline bool same_class(const CohomologyClass& a, const CohomologyClass& b) {
  if (!same_group(a.group, b.group)) return false;
  if (a.fingerprint && b.fingerprint) return *a.fingerprint == *b.fingerprint;
  return is_coboundary(cocycle_product(a.representative, cocycle_inverse(b.representative))).has_value();
}

inline CohomologyClass class_product(const CohomologyClass& a, const CohomologyClass& b) {
  require(same_group(a.group, b.group), "class_product: group mismatch");
  std::vector<std::int64_t> c(a.coordinates.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coordinates[i] + b.coordinates[i];
  return class_from_coordinates(a.group, std::move(c));
}

inline CohomologyClass class_inverse(const CohomologyClass& a) {
  std::vector<std::int64_t> c(a.coordinates.size());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = -a.coordinates[i];
  return class_from_coordinates(a.group, std::move(c));
}

// ---------------------------------------------------------------------------
// Exhaustive enumeration, used as an independent check of compute_h2.

struct BruteForceH2 {
  std::int64_t class_count = 0;
  /// Normalized cocycles as exponent tables over root_order (size n*n).
  std::vector<std::vector<std::int64_t>> cocycles;
  /// Orbit label of each cocycle under multiplication by coboundaries.
  std::vector<int> orbit;
};

inline BruteForceH2 brute_force_h2(const GroupPtr& group, int root_order) {
  const auto& G = *group;
  const int n = G.order();
  require(root_order >= 1, "root order must be positive");
  const int free_entries = (n - 1) * (n - 1);
  double space = std::pow(static_cast<double>(root_order), free_entries);
  if (space > 1e8) fail(ErrorKind::resource_guard, "brute-force H^2 search space exceeds 1e8 cochains");
  const std::int64_t K = static_cast<std::int64_t>(root_order) * n;
  double nu_space = std::pow(static_cast<double>(K), n - 1);
  if (nu_space > 1e7) fail(ErrorKind::resource_guard, "brute-force coboundary enumeration exceeds 1e7");

  auto idx = [n](int g, int h) { return static_cast<std::size_t>(g) * n + h; };
  auto is_cocycle = [&](const std::vector<std::int64_t>& a) {
    for (int g = 0; g < n; ++g)
      for (int h = 0; h < n; ++h)
        for (int k = 0; k < n; ++k) {
          std::int64_t l = a[idx(h, k)] + a[idx(g, G.mul(h, k))];
          std::int64_t r = a[idx(G.mul(g, h), k)] + a[idx(g, h)];
          if ((l - r) % root_order != 0) return false;
        }
    return true;
  };

  BruteForceH2 out;
  std::vector<std::int64_t> a(static_cast<std::size_t>(n) * n, 0);
  std::vector<int> digits(free_entries, 0);
  for (;;) {
    for (int i = 0; i < free_entries; ++i) a[idx(1 + i / (n - 1), 1 + i % (n - 1))] = digits[i];
    if (is_cocycle(a)) out.cocycles.push_back(a);
    int pos = 0;
    while (pos < free_entries && ++digits[pos] == root_order) digits[pos++] = 0;
    if (pos == free_entries) break;
  }

  // Coboundaries d nu with nu in the K-th roots (normalized nu(e) = 1) that
  // land in the root_order-th roots.
  std::set<std::vector<std::int64_t>> cob;
  std::vector<std::int64_t> nu(n, 0);
  const std::int64_t scale = K / root_order;
  for (;;) {
    std::vector<std::int64_t> d(static_cast<std::size_t>(n) * n);
    bool ok = true;
    for (int g = 0; g < n && ok; ++g)
      for (int h = 0; h < n; ++h) {
        std::int64_t v = ((nu[g] + nu[h] - nu[G.mul(g, h)]) % K + K) % K;
        if (v % scale != 0) {
          ok = false;
          break;
        }
        d[idx(g, h)] = v / scale;
      }
    if (ok) cob.insert(d);
    int pos = 1;
    while (pos < n && ++nu[pos] == K) nu[pos++] = 0;
    if (pos >= n) break;
  }

  std::map<std::vector<std::int64_t>, int> label;
  for (const auto& z : out.cocycles) {
    std::vector<std::int64_t> best;
    for (const auto& b : cob) {
      std::vector<std::int64_t> w(z.size());
      for (std::size_t i = 0; i < z.size(); ++i) w[i] = (z[i] + b[i]) % root_order;
      if (best.empty() || w < best) best = std::move(w);
    }
    auto it = label.find(best);
    if (it == label.end()) it = label.emplace(best, static_cast<int>(label.size())).first;
    out.orbit.push_back(it->second);
  }
  out.class_count = static_cast<std::int64_t>(label.size());
  return out;
}

}  // namespace sptkit
