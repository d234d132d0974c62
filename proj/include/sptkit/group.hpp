#pragma once

#include <array>
#include <cstdint>
#include <cctype>
#include <memory>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "sptkit/error.hpp"
#include "sptkit/phase.hpp"

namespace sptkit {

/// A finite group given by its multiplication table. Elements are the
/// indices 0..order-1 and the identity is always element 0.
class FiniteGroup {
 public:
  /// Validates closure, identity, invertibility and associativity. Orders up
  /// to 64 are checked exhaustively; larger groups on 10^4 sampled triples.
  FiniteGroup(std::string name, std::vector<std::vector<int>> mult) : name_(std::move(name)) {
    order_ = static_cast<int>(mult.size());
    require(order_ > 0, "group table must be non-empty");
    mult_.resize(static_cast<std::size_t>(order_) * order_);
    for (int a = 0; a < order_; ++a) {
      require(static_cast<int>(mult[a].size()) == order_,
              "group table row " + std::to_string(a) + " has wrong length");
      for (int b = 0; b < order_; ++b) {
        int c = mult[a][b];
        require(c >= 0 && c < order_, "group table not closed at (" + std::to_string(a) + "," +
                                          std::to_string(b) + ")");
        mult_[idx(a, b)] = c;
      }
    }
    for (int g = 0; g < order_; ++g) {
      require(mul(0, g) == g && mul(g, 0) == g,
              "element 0 is not the identity (fails at " + std::to_string(g) + ")");
    }
    inv_.assign(order_, -1);
    for (int g = 0; g < order_; ++g) {
      for (int h = 0; h < order_; ++h) {
        if (mul(g, h) == 0) {
          inv_[g] = h;
          break;
        }
      }
      require(inv_[g] >= 0, "element " + std::to_string(g) + " has no inverse");
    }
    auto check = [&](int a, int b, int c) {
      if (mul(mul(a, b), c) != mul(a, mul(b, c))) {
        fail(ErrorKind::validation, "group table is not associative at triple (" +
                                        std::to_string(a) + "," + std::to_string(b) + "," +
                                        std::to_string(c) + ")");
      }
    };
    if (order_ <= 64) {
      for (int a = 0; a < order_; ++a)
        for (int b = 0; b < order_; ++b)
          for (int c = 0; c < order_; ++c) check(a, b, c);
    } else {
      std::mt19937_64 rng(0x5eed);
      std::uniform_int_distribution<int> pick(0, order_ - 1);
      for (int t = 0; t < 10000; ++t) check(pick(rng), pick(rng), pick(rng));
    }
  }

  const std::string& name() const { return name_; }
  int order() const { return order_; }
  static constexpr int identity() { return 0; }
  int mul(int a, int b) const { return mult_[idx(a, b)]; }
  int inv(int a) const { return inv_[a]; }

  std::vector<std::vector<int>> table() const {
    std::vector<std::vector<int>> t(order_, std::vector<int>(order_));
    for (int a = 0; a < order_; ++a)
      for (int b = 0; b < order_; ++b) t[a][b] = mul(a, b);
    return t;
  }

  bool is_abelian() const {
    for (int a = 0; a < order_; ++a)
      for (int b = a + 1; b < order_; ++b)
        if (mul(a, b) != mul(b, a)) return false;
    return true;
  }

  int element_order(int g) const {
    int k = 1;
    for (int x = g; x != 0; x = mul(x, g)) ++k;
    return k;
  }

  friend bool operator==(const FiniteGroup& a, const FiniteGroup& b) {
    return a.order_ == b.order_ && a.mult_ == b.mult_;
  }

 private:
  std::size_t idx(int a, int b) const { return static_cast<std::size_t>(a) * order_ + b; }

  std::string name_;
  int order_ = 0;
  std::vector<int> mult_;
  std::vector<int> inv_;
};

using GroupPtr = std::shared_ptr<const FiniteGroup>;

inline bool same_group(const GroupPtr& a, const GroupPtr& b) {
  return a && b && (a == b || *a == *b);
}

namespace detail {

// Product of cyclic groups; element index is mixed radix with the first
// factor least significant.
inline std::vector<std::vector<int>> abelian_table(const std::vector<int>& factors) {
  int order = 1;
  for (int n : factors) order *= n;
  std::vector<std::vector<int>> t(order, std::vector<int>(order));
  for (int a = 0; a < order; ++a) {
    for (int b = 0; b < order; ++b) {
      int ra = a, rb = b, out = 0, stride = 1;
      for (int n : factors) {
        out += ((ra % n + rb % n) % n) * stride;
        ra /= n;
        rb /= n;
        stride *= n;
      }
      t[a][b] = out;
    }
  }
  return t;
}

// r^k s^m has index k + 4m; s r s^-1 = r^-1.
inline std::vector<std::vector<int>> dihedral4_table() {
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      int ka = a % 4, ma = a / 4, kb = b % 4, mb = b / 4;
      int k = ((ka + (ma ? -kb : kb)) % 4 + 4) % 4;
      t[a][b] = k + 4 * ((ma + mb) % 2);
    }
  }
  return t;
}

// Index = 4*sign + unit with units (1, i, j, k).
inline std::vector<std::vector<int>> quaternion_table() {
  // unit products: {sign, unit}
  const std::array<std::array<std::array<int, 2>, 4>, 4> prod{{
      {{{0, 0}, {0, 1}, {0, 2}, {0, 3}}},
      {{{0, 1}, {1, 0}, {0, 3}, {1, 2}}},
      {{{0, 2}, {1, 3}, {1, 0}, {0, 1}}},
      {{{0, 3}, {0, 2}, {1, 1}, {1, 0}}},
  }};
  std::vector<std::vector<int>> t(8, std::vector<int>(8));
  for (int a = 0; a < 8; ++a) {
    for (int b = 0; b < 8; ++b) {
      auto [s, u] = prod[a % 4][b % 4];
      int sign = (s + a / 4 + b / 4) % 2;
      t[a][b] = 4 * sign + u;
    }
  }
  return t;
}

// Permutations of {0,1,2} in lexicographic order; (p*q)(x) = p(q(x)).
inline std::vector<std::vector<int>> symmetric3_table() {
  const std::array<std::array<int, 3>, 6> perms{{
      {0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
  auto find = [&](const std::array<int, 3>& p) {
    for (int i = 0; i < 6; ++i)
      if (perms[i] == p) return i;
    return -1;
  };
  std::vector<std::vector<int>> t(6, std::vector<int>(6));
  for (int a = 0; a < 6; ++a) {
    for (int b = 0; b < 6; ++b) {
      std::array<int, 3> c{};
      for (int x = 0; x < 3; ++x) c[x] = perms[a][perms[b][x]];
      t[a][b] = find(c);
    }
  }
  return t;
}

inline std::optional<std::vector<int>> parse_cyclic_product(std::string_view name) {
  std::vector<int> factors;
  std::size_t pos = 0;
  while (pos < name.size()) {
    if (name[pos] != 'Z') return std::nullopt;
    ++pos;
    std::size_t start = pos;
    while (pos < name.size() && std::isdigit(static_cast<unsigned char>(name[pos]))) ++pos;
    if (start == pos) return std::nullopt;
    int n = std::stoi(std::string(name.substr(start, pos - start)));
    if (n < 1) return std::nullopt;
    factors.push_back(n);
    if (pos < name.size()) {
      if (name[pos] != 'x') return std::nullopt;
      ++pos;
    }
  }
  if (factors.empty()) return std::nullopt;
  return factors;
}

}  // namespace detail

inline GroupPtr make_group(std::string name, std::vector<std::vector<int>> mult) {
  return std::make_shared<const FiniteGroup>(std::move(name), std::move(mult));
}

/// Catalog: "Zn", products such as "Z2xZ2" / "Z2xZ2xZ2" ("Z2^3" is an
/// alias), "D4", "Q8", "S3".
inline GroupPtr build_group(std::string_view name) {
  if (name == "D4") return make_group("D4", detail::dihedral4_table());
  if (name == "Q8") return make_group("Q8", detail::quaternion_table());
  if (name == "S3") return make_group("S3", detail::symmetric3_table());
  if (name == "Z2^3") return make_group("Z2xZ2xZ2", detail::abelian_table({2, 2, 2}));
  if (auto factors = detail::parse_cyclic_product(name)) {
    long long order = 1;
    for (int n : *factors) order *= n;
    if (order > 4096) fail(ErrorKind::resource_guard, "catalog group order exceeds 4096");
    return make_group(std::string(name), detail::abelian_table(*factors));
  }
  fail(ErrorKind::validation, "unknown catalog group '" + std::string(name) + "'");
}

inline GroupPtr direct_product(const FiniteGroup& a, const FiniteGroup& b) {
  int n = a.order() * b.order();
  std::vector<std::vector<int>> t(n, std::vector<int>(n));
  for (int x = 0; x < n; ++x)
    for (int y = 0; y < n; ++y)
      t[x][y] = a.mul(x % a.order(), y % a.order()) + a.order() * b.mul(x / a.order(), y / a.order());
  return make_group(a.name() + "x" + b.name(), std::move(t));
}

// ---------------------------------------------------------------------------
// Charges: one-dimensional representations g -> U(1).

struct Charge {
  GroupPtr group;
  std::vector<Phase> values;

  const Phase& operator()(int g) const { return values[g]; }
};

inline Charge trivial_charge(const GroupPtr& g) {
  return Charge{g, std::vector<Phase>(g->order(), Phase::one())};
}

/// q(g) = exp(2 pi i k g / n) on a cyclic group Z_n.
inline Charge cyclic_charge(const GroupPtr& g, std::int64_t k) {
  Charge c{g, {}};
  for (int x = 0; x < g->order(); ++x) c.values.push_back(Phase::exact(k * x, g->order()));
  return c;
}

inline Charge charge_product(const Charge& a, const Charge& b) {
  require(same_group(a.group, b.group), "charge_product: group mismatch");
  Charge c{a.group, a.values};
  for (std::size_t i = 0; i < c.values.size(); ++i) c.values[i] *= b.values[i];
  return c;
}

inline Charge charge_conjugate(const Charge& a) {
  Charge c{a.group, a.values};
  for (auto& v : c.values) v = v.inverse();
  return c;
}

inline bool charges_equal(const Charge& a, const Charge& b, double tol = 1e-12) {
  if (!same_group(a.group, b.group)) return false;
  for (std::size_t i = 0; i < a.values.size(); ++i)
    if (Phase::distance(a.values[i], b.values[i]) > tol) return false;
  return true;
}

inline bool is_trivial(const Charge& a, double tol = 1e-12) {
  for (const auto& v : a.values)
    if (Phase::distance(v, Phase::one()) > tol) return false;
  return true;
}

struct ChargeViolation {
  int g;
  int h;
};

/// Pairs (g,h) with q(g)q(h) != q(gh). Exact charges are compared exactly,
/// approximate ones to 1e-9.
inline std::vector<ChargeViolation> validate_charge(const Charge& c) {
  std::vector<ChargeViolation> out;
  const auto& G = *c.group;
  require(static_cast<int>(c.values.size()) == G.order(), "charge table has wrong length");
  for (int g = 0; g < G.order(); ++g) {
    for (int h = 0; h < G.order(); ++h) {
      Phase lhs = c(g) * c(h);
      const Phase& rhs = c(G.mul(g, h));
      bool ok = (lhs.is_exact() && rhs.is_exact()) ? lhs == rhs : Phase::distance(lhs, rhs) < 1e-9;
      if (!ok) out.push_back({g, h});
    }
  }
  return out;
}

}  // namespace sptkit
