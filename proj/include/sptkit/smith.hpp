#pragma once

#include <cstdint>
#include <numeric>
#include <tuple>
#include <vector>

#include "sptkit/error.hpp"

namespace sptkit {

/// Dense integer matrix with entries reduced modulo `modulus`.
class ModMatrix {
 public:
  ModMatrix(int rows, int cols, std::int64_t modulus)
      : rows_(rows), cols_(cols), mod_(modulus), data_(static_cast<std::size_t>(rows) * cols, 0) {}

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::int64_t modulus() const { return mod_; }

  std::int64_t& at(int r, int c) { return data_[static_cast<std::size_t>(r) * cols_ + c]; }
  std::int64_t at(int r, int c) const { return data_[static_cast<std::size_t>(r) * cols_ + c]; }

  void add(int r, int c, std::int64_t v) { at(r, c) = reduce(at(r, c) + v); }

  std::int64_t reduce(std::int64_t v) const {
    v %= mod_;
    return v < 0 ? v + mod_ : v;
  }

  static ModMatrix identity(int n, std::int64_t modulus) {
    ModMatrix m(n, n, modulus);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1 % modulus;
    return m;
  }

 private:
  int rows_, cols_;
  std::int64_t mod_;
  std::vector<std::int64_t> data_;
};

namespace detail {

// Returns (g, x, y) with x*a + y*b = g = gcd(a, b), for a, b >= 0.
inline std::tuple<std::int64_t, std::int64_t, std::int64_t> ext_gcd(std::int64_t a, std::int64_t b) {
  std::int64_t x0 = 1, y0 = 0, x1 = 0, y1 = 1;
  while (b != 0) {
    std::int64_t q = a / b;
    std::tie(a, b) = std::make_tuple(b, a - q * b);
    std::tie(x0, x1) = std::make_tuple(x1, x0 - q * x1);
    std::tie(y0, y1) = std::make_tuple(y1, y0 - q * y1);
  }
  return {a, x0, y0};
}

inline std::int64_t mulmod(std::int64_t a, std::int64_t b, std::int64_t m) {
  auto r = static_cast<std::int64_t>((static_cast<__int128>(a) * b) % m);
  return r < 0 ? r + m : r;
}

}  // namespace detail

/// Smith normal form over Z/MZ: R * A * C = diag(s_0, s_1, ...) with R, C
/// invertible mod M and s_0 | s_1 | ... each a divisor of M (0 encodes M).
///
/// Only the column transform C and its inverse are materialized; row
/// operations are replayed on the columns of `rhs` (if given), which then
/// holds R * rhs.
struct SmithResult {
  std::int64_t modulus = 1;
  /// Diagonal entries, one per pivot; entries equal to 0 mod M are omitted.
  std::vector<std::int64_t> diagonal;
  ModMatrix column_transform{0, 0, 1};
  ModMatrix column_transform_inverse{0, 0, 1};
  ModMatrix rhs{0, 0, 1};

  int rank() const { return static_cast<int>(diagonal.size()); }
};

inline SmithResult smith_normal_form(ModMatrix a, const ModMatrix* rhs_in = nullptr) {
  using detail::ext_gcd;
  using detail::mulmod;
  const std::int64_t M = a.modulus();
  const int rows = a.rows(), cols = a.cols();

  SmithResult out;
  out.modulus = M;
  out.column_transform = ModMatrix::identity(cols, M);
  out.column_transform_inverse = ModMatrix::identity(cols, M);
  out.rhs = rhs_in ? *rhs_in : ModMatrix(rows, 0, M);
  require(out.rhs.rows() == rows, "smith_normal_form: rhs row count mismatch");
  auto& C = out.column_transform;
  auto& Ci = out.column_transform_inverse;
  auto& B = out.rhs;

  auto red = [M](std::int64_t v) {
    v %= M;
    return v < 0 ? v + M : v;
  };
  auto gcd_m = [M](std::int64_t v) { return std::gcd(v, M); };

  // Row ops: rows (p, q) <- ([x y], [-b/g a/g]) applied to A and B.
  auto row_combine = [&](int p, int q, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    for (int c = 0; c < cols; ++c) {
      std::int64_t ap = a.at(p, c), aq = a.at(q, c);
      if (ap == 0 && aq == 0) continue;
      a.at(p, c) = red(mulmod(x, ap, M) + mulmod(y, aq, M));
      a.at(q, c) = red(mulmod(u, ap, M) + mulmod(v, aq, M));
    }
    for (int c = 0; c < B.cols(); ++c) {
      std::int64_t bp = B.at(p, c), bq = B.at(q, c);
      B.at(p, c) = red(mulmod(x, bp, M) + mulmod(y, bq, M));
      B.at(q, c) = red(mulmod(u, bp, M) + mulmod(v, bq, M));
    }
  };
  // Column ops: [col_p col_q] <- [col_p col_q] * [[x u], [y v]]; inverse
  // applied to rows p, q of Ci. det = x*v - u*y = 1.
  auto col_combine = [&](int p, int q, std::int64_t x, std::int64_t y, std::int64_t u, std::int64_t v) {
    for (int r = 0; r < rows; ++r) {
      std::int64_t ap = a.at(r, p), aq = a.at(r, q);
      if (ap == 0 && aq == 0) continue;
      a.at(r, p) = red(mulmod(ap, x, M) + mulmod(aq, y, M));
      a.at(r, q) = red(mulmod(ap, u, M) + mulmod(aq, v, M));
    }
    for (int r = 0; r < cols; ++r) {
      std::int64_t cp = C.at(r, p), cq = C.at(r, q);
      C.at(r, p) = red(mulmod(cp, x, M) + mulmod(cq, y, M));
      C.at(r, q) = red(mulmod(cp, u, M) + mulmod(cq, v, M));
    }
    // inverse of [[x u],[y v]] is [[v -u],[-y x]]
    for (int c = 0; c < cols; ++c) {
      std::int64_t ip = Ci.at(p, c), iq = Ci.at(q, c);
      Ci.at(p, c) = red(mulmod(v, ip, M) - mulmod(u, iq, M));
      Ci.at(q, c) = red(-mulmod(y, ip, M) + mulmod(x, iq, M));
    }
  };
  auto swap_rows = [&](int p, int q) {
    if (p == q) return;
    for (int c = 0; c < cols; ++c) std::swap(a.at(p, c), a.at(q, c));
    for (int c = 0; c < B.cols(); ++c) std::swap(B.at(p, c), B.at(q, c));
  };
  auto swap_cols = [&](int p, int q) {
    if (p == q) return;
    for (int r = 0; r < rows; ++r) std::swap(a.at(r, p), a.at(r, q));
    for (int r = 0; r < cols; ++r) std::swap(C.at(r, p), C.at(r, q));
    for (int c = 0; c < cols; ++c) std::swap(Ci.at(p, c), Ci.at(q, c));
  };

  const int steps = std::min(rows, cols);
  for (int t = 0; t < steps; ++t) {
    // Pivot: entry with the smallest gcd with M (units first).
    int pr = -1, pc = -1;
    std::int64_t best = 0;
    for (int r = t; r < rows && best != 1; ++r) {
      for (int c = t; c < cols; ++c) {
        std::int64_t v = a.at(r, c);
        if (v == 0) continue;
        std::int64_t g = gcd_m(v);
        if (pr < 0 || g < best) {
          pr = r;
          pc = c;
          best = g;
          if (g == 1) break;
        }
      }
    }
    if (pr < 0) break;
    swap_rows(t, pr);
    swap_cols(t, pc);

    for (;;) {
      bool changed = false;
      for (int r = t + 1; r < rows; ++r) {
        std::int64_t b = a.at(r, t);
        if (b == 0) continue;
        std::int64_t p = a.at(t, t);
        auto [g, x, y] = ext_gcd(p, b);
        if (g == p) {
          // pivot divides b: plain elimination
          std::int64_t f = red(M - (b / p) % M);
          row_combine(t, r, 1, 0, f, 1);
        } else {
          row_combine(t, r, red(x), red(y), red(-(b / g)), red(p / g));
        }
        changed = true;
      }
      for (int c = t + 1; c < cols; ++c) {
        std::int64_t b = a.at(t, c);
        if (b == 0) continue;
        std::int64_t p = a.at(t, t);
        auto [g, x, y] = ext_gcd(p, b);
        if (g == p) {
          std::int64_t f = red(M - (b / p) % M);
          col_combine(t, c, 1, 0, f, 1);
        } else {
          col_combine(t, c, red(x), red(y), red(-(b / g)), red(p / g));
        }
        changed = true;
      }
      if (changed) {
        bool clean = true;
        for (int r = t + 1; r < rows && clean; ++r) clean = a.at(r, t) == 0;
        for (int c = t + 1; c < cols && clean; ++c) clean = a.at(t, c) == 0;
        if (!clean) continue;
      }
      // Divisibility: gcd(pivot, M) must divide the remaining block.
      std::int64_t g = gcd_m(a.at(t, t));
      int bad = -1;
      for (int r = t + 1; r < rows && bad < 0; ++r)
        for (int c = t + 1; c < cols; ++c)
          if (a.at(r, c) % g != 0) {
            bad = r;
            break;
          }
      if (bad < 0) break;
      row_combine(t, bad, 1, 1, 0, 1);
    }

    // Normalize the pivot to gcd(pivot, M) by a unit column scaling.
    std::int64_t p = a.at(t, t);
    std::int64_t g = gcd_m(p);
    if (p != g) {
      auto [gg, x, y] = ext_gcd(p, M);
      (void)gg;
      (void)y;
      std::int64_t step = M / g;
      std::int64_t u = red(x);
      while (std::gcd(u, M) != 1) u = red(u + step);
      // u * p == g (mod M); inverse of u for Ci
      auto [g1, ui, y1] = ext_gcd(u, M);
      (void)g1;
      (void)y1;
      std::int64_t uinv = red(ui);
      for (int r = 0; r < rows; ++r) a.at(r, t) = mulmod(a.at(r, t), u, M);
      for (int r = 0; r < cols; ++r) C.at(r, t) = mulmod(C.at(r, t), u, M);
      for (int c = 0; c < cols; ++c) Ci.at(t, c) = mulmod(Ci.at(t, c), uinv, M);
    }
    out.diagonal.push_back(a.at(t, t));
  }
  return out;
}

}  // namespace sptkit
