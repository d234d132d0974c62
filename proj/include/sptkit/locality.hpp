#pragma once

#include <cfloat>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numbers>
#include <set>
#include <string>
#include <vector>

#include "sptkit/circuit.hpp"
#include "sptkit/linalg.hpp"
#include "sptkit/parallel.hpp"

namespace sptkit {

using real = long double;

enum class DecayKind { exponential, stretched, table };

/// f on 1..r_max, stored as values[r] (values[0] unused). Long double keeps
/// e^{-r} representable well past r = 10^3.
struct DecayFunction {
  DecayKind kind = DecayKind::exponential;
  double a = 1.0;
  double theta = 1.0;
  std::vector<real> values;
  bool truncated = false;  // table cut at the last representable value
  std::string description;

  int r_max() const { return static_cast<int>(values.size()) - 1; }
  real operator()(int r) const { return values.at(r); }
};

struct DecayCheck {
  std::vector<int> poly_onset;  // r0 per power p in {1,2,4,8}
};

inline constexpr int kPolyPowers[4] = {1, 2, 4, 8};

inline DecayCheck check_decay(const DecayFunction& f) {
  const int R = f.r_max();
  require(R >= 2, "decay function needs at least two tabulated values");
  for (int r = 1; r <= R; ++r) {
    if (!(f(r) > 0)) fail(ErrorKind::validation, "decay function not strictly positive at r = " + std::to_string(r));
    if (r > 1 && f(r) > f(r - 1))
      fail(ErrorKind::validation, "decay function increases at r = " + std::to_string(r));
  }
  // r^p f(r) must be non-increasing on [r0, R] with r0 at most R/2.
  DecayCheck out;
  for (int p : kPolyPowers) {
    int r0 = R;
    while (r0 > 1) {
      real prev = std::pow(static_cast<real>(r0 - 1), p) * f(r0 - 1);
      real cur = std::pow(static_cast<real>(r0), p) * f(r0);
      if (cur > prev) break;
      --r0;
    }
    out.poly_onset.push_back(r0);
    if (r0 > R / 2)
      fail(ErrorKind::validation, "decay function is not superpolynomial on the table: r^" + std::to_string(p) +
                                      " f(r) still grows at r = " + std::to_string(r0));
  }
  return out;
}

namespace detail {

inline DecayFunction tabulate(DecayFunction f, int r_max, const std::function<real(int)>& value) {
  require(r_max >= 2, "r_max must be at least 2");
  f.values.assign(1, 0);
  for (int r = 1; r <= r_max; ++r) {
    real v = value(r);
    if (!(v >= LDBL_MIN)) {
      f.truncated = true;
      break;
    }
    f.values.push_back(v);
  }
  require(f.r_max() >= 2, "decay function underflows immediately");
  return f;
}

}  // namespace detail

inline DecayFunction exponential_decay(double a, int r_max) {
  require(a > 0, "exponential rate must be positive");
  DecayFunction f;
  f.kind = DecayKind::exponential;
  f.a = a;
  f.description = "exp:" + std::to_string(a);
  return detail::tabulate(f, r_max, [a](int r) { return std::exp(-static_cast<real>(a) * r); });
}

inline DecayFunction stretched_decay(double a, double theta, int r_max) {
  require(a > 0 && theta > 0 && theta <= 1, "stretched exponential needs a > 0 and 0 < theta <= 1");
  DecayFunction f;
  f.kind = DecayKind::stretched;
  f.a = a;
  f.theta = theta;
  f.description = "stretched:" + std::to_string(a) + ":" + std::to_string(theta);
  return detail::tabulate(f, r_max, [a, theta](int r) {
    return std::exp(-static_cast<real>(a) * std::pow(static_cast<real>(r), static_cast<real>(theta)));
  });
}

/// values[0] is f(1).
inline DecayFunction table_decay(const std::vector<double>& values) {
  DecayFunction f;
  f.kind = DecayKind::table;
  f.description = "table";
  f.values.assign(1, 0);
  for (double v : values) f.values.push_back(v);
  return f;
}

/// "exp:A", "stretched:A:THETA" (e.g. stretched:1:0.5 for e^{-sqrt r}),
/// "const:C" (accepted by the parser, rejected by the decay check).
inline DecayFunction parse_decay(const std::string& spec, int r_max) {
  auto parts = std::vector<std::string>{};
  std::size_t start = 0;
  while (true) {
    auto k = spec.find(':', start);
    parts.push_back(spec.substr(start, k == std::string::npos ? std::string::npos : k - start));
    if (k == std::string::npos) break;
    start = k + 1;
  }
  auto num = [&](std::size_t i) {
    require(i < parts.size(), "decay spec '" + spec + "' is missing a parameter");
    try {
      return std::stod(parts[i]);
    } catch (const std::exception&) {
      fail(ErrorKind::validation, "decay spec '" + spec + "': bad number '" + parts[i] + "'");
    }
  };
  if (parts[0] == "exp") return exponential_decay(num(1), r_max);
  if (parts[0] == "stretched") return stretched_decay(num(1), num(2), r_max);
  if (parts[0] == "const") {
    std::vector<double> v(r_max, num(1));
    auto f = table_decay(v);
    f.description = spec;
    return f;
  }
  fail(ErrorKind::validation, "unknown decay kind '" + parts[0] + "'");
}

struct FFunction {
  std::vector<real> values;  // F(0..r_max)
  real c_conv = 0;           // sup_{x,y} sum_z F(|x-z|)F(|z-y|) / F(|x-y|) on the window
  real c_conv_bound = 0;     // (kappa f(1)+1)/kappa + 2 F(0) + 2 sum_{k>=1} F(k)
  real kappa = 1;
  real c_int = 0;            // sup_x sum_y F(|x-y|) on the window
  real int_tail = 0;         // sum over d > r_max/2 of F(d)
  bool truncated = false;
  std::string source;
  DecayCheck decay;

  int r_max() const { return static_cast<int>(values.size()) - 1; }
  real operator()(int r) const { return values.at(r); }
};

/// Mass scale for the recursion: the largest power of two kappa <= 1 with
/// kappa <= 1/(16 sum_r f(r)), so scaling back is exact. The
/// shifted seed then has mass at most 1/8, below the (1 + kappa f(1))/4 at
/// which the convolution series stops converging.
inline real recursion_scale(const DecayFunction& f) {
  real mass = 0;
  for (int r = 1; r <= f.r_max(); ++r) mass += f(r);
  real kappa = 1;
  while (kappa * 16 * mass > 1) kappa /= 2;
  return kappa;
}

/// F = Fh / kappa where Fh(r) = min_{1<=r'<=r} Ft(r'), Ft(r) = max[g(max(r-1,1)),
/// (g(1)+1)^{-1} sum_{m=1}^{r-1} Fh(r-m)Fh(m)], Fh(0) = Fh(1), g = kappa f.
/// The shifted seed gives f(r) <= F(r+1); with kappa = 1 and f(1) > 1/3 the
/// convolution term outgrows the seed and F flattens to a constant.
inline std::vector<real> f_recursion(const DecayFunction& f, real kappa) {
  const int R = f.r_max();
  std::vector<real> F(R + 1, 0);
  const real k = 1 / (kappa * f(1) + 1);
  real run = std::numeric_limits<real>::infinity();
  for (int r = 1; r <= R; ++r) {
    real conv = 0;
    for (int m = 1; m <= r - 1; ++m) conv += F[r - m] * F[m];
    real ft = std::max(kappa * f(std::max(r - 1, 1)), k * conv);
    run = std::min(run, ft);
    F[r] = run;
  }
  F[0] = F[1];
  for (auto& v : F) v /= kappa;
  return F;
}

inline std::vector<real> f_recursion(const DecayFunction& f) { return f_recursion(f, recursion_scale(f)); }

/// sum_{z in [0,R]} F(|x-z|) F(|z-y|)
inline real window_convolution(const std::vector<real>& F, int x, int y) {
  const int R = static_cast<int>(F.size()) - 1;
  real s = 0;
  for (int z = 0; z <= R; ++z) s += F[std::abs(x - z)] * F[std::abs(z - y)];
  return s;
}

inline FFunction build_f_function(const DecayFunction& f) {
  FFunction out;
  out.decay = check_decay(f);
  out.truncated = f.truncated;
  out.source = f.description;
  out.kappa = recursion_scale(f);
  out.values = f_recursion(f, out.kappa);
  const auto& F = out.values;
  const int R = out.r_max();

  std::vector<real> prefix(R + 1, 0);
  prefix[0] = F[0];
  for (int d = 1; d <= R; ++d) prefix[d] = prefix[d - 1] + F[d];
  for (int x = 0; x <= R; ++x) out.c_int = std::max(out.c_int, prefix[x] + prefix[R - x] - F[0]);
  for (int d = R / 2 + 1; d <= R; ++d) out.int_tail += F[d];
  out.c_conv_bound = (out.kappa * f(1) + 1) / out.kappa + 2 * F[0] + 2 * (prefix[R] - F[0]);

  std::vector<real> row_max(R + 1, 0);
  parallel_for(R + 1, [&](int x) {
    real m = 0;
    for (int y = x; y <= R; ++y) m = std::max(m, window_convolution(F, x, y) / F[y - x]);
    row_max[x] = m;
  });
  out.c_conv = *std::max_element(row_max.begin(), row_max.end());
  return out;
}

struct FAxiomReport {
  bool positive = true;
  bool monotone = true;
  bool dominates_f = true;  // f(r) <= F(r+1) for r <= r_max - 1
  bool integrable = true;   // tail beyond r_max/2 below 1e-6 of C'_F
  bool convolution = true;  // every pair within the a priori constant
  int first_violation = -1;

  bool all() const { return positive && monotone && dominates_f && integrable && convolution; }
};

/// Table checks. The convolution check compares the measured pair maximum
/// against the a priori constant.
inline FAxiomReport check_f_axioms(const FFunction& F, const DecayFunction& f) {
  FAxiomReport r;
  const int R = F.r_max();
  for (int d = 0; d <= R; ++d) {
    if (!(F(d) > 0)) r.positive = false;
    if (d > 0 && F(d) > F(d - 1)) r.monotone = false;
  }
  for (int d = 1; d <= std::min(R - 1, f.r_max()); ++d)
    if (f(d) > F(d + 1)) {
      r.dominates_f = false;
      if (r.first_violation < 0) r.first_violation = d;
    }
  r.integrable = F.int_tail <= 1e-6L * F.c_int;
  // c_conv is the maximum over all pairs of the window ratio, so every pair
  // is within the a priori constant iff c_conv is.
  r.convolution = F.c_conv <= (1 + 1e-12L) * F.c_conv_bound;
  return r;
}

// ---------------------------------------------------------------------------
// Interactions with piecewise-constant time dependence.

struct InteractionTerm {
  int first = 0;
  int last = 0;
  Mat h;
};

struct InteractionSlice {
  double duration = 1.0;
  std::vector<InteractionTerm> terms;
};

struct Interaction {
  std::vector<int> dims;  // local dimension per window site
  std::vector<InteractionSlice> slices;
};

inline void validate_interaction(const Interaction& h) {
  const int L = static_cast<int>(h.dims.size());
  double total = 0;
  for (const auto& s : h.slices) {
    require(s.duration > 0, "interaction slice with non-positive duration");
    total += s.duration;
    for (const auto& t : s.terms) {
      require(t.first >= 0 && t.first <= t.last && t.last < L,
              "interaction term support [" + std::to_string(t.first) + "," + std::to_string(t.last) +
                  "] outside the window");
      Eigen::Index dim = 1;
      for (int j = t.first; j <= t.last; ++j) dim *= h.dims[j];
      require(t.h.rows() == dim && t.h.cols() == dim, "interaction term has the wrong dimension for its support");
      require(max_abs(t.h - t.h.adjoint()) <= 1e-12, "interaction term is not Hermitian to 1e-12");
    }
  }
  require(h.slices.empty() || std::abs(total - 1.0) < 1e-12, "slice durations must sum to 1");
}

namespace detail {

/// H(S) per support in one slice, as operator norms.
inline std::map<std::pair<int, int>, double> support_norms(const InteractionSlice& s) {
  std::map<std::pair<int, int>, Mat> sum;
  for (const auto& t : s.terms) {
    auto key = std::make_pair(t.first, t.last);
    auto it = sum.find(key);
    if (it == sum.end())
      sum.emplace(key, t.h);
    else
      it->second += t.h;
  }
  std::map<std::pair<int, int>, double> out;
  for (const auto& [k, m] : sum) out[k] = op_norm(m);
  return out;
}

}  // namespace detail

/// ||H||_f = max over slices and sites j of sum_{S containing j} ||H(S)|| / f(1 + diam S).
inline double tdi_f_norm(const Interaction& h, const DecayFunction& f) {
  validate_interaction(h);
  const int L = static_cast<int>(h.dims.size());
  double best = 0.0;
  for (const auto& s : h.slices) {
    auto norms = detail::support_norms(s);
    std::vector<real> site(L, 0);
    for (const auto& [k, n] : norms) {
      const int r = 1 + k.second - k.first;
      require(r <= f.r_max(), "term diameter exceeds the decay table");
      for (int j = k.first; j <= k.second; ++j) site[j] += n / f(r);
    }
    for (real v : site) best = std::max(best, static_cast<double>(v));
  }
  return best;
}

/// |||H|||_F = max over slices and pairs x <= y of sum_{S containing x,y} ||H(S)|| / F(y - x).
inline double pair_norm(const Interaction& h, const FFunction& F) {
  validate_interaction(h);
  const int L = static_cast<int>(h.dims.size());
  require(L - 1 <= F.r_max(), "window longer than the F table");
  double best = 0.0;
  for (const auto& s : h.slices) {
    auto norms = detail::support_norms(s);
    for (int x = 0; x < L; ++x)
      for (int y = x; y < L; ++y) {
        real sum = 0;
        for (const auto& [k, n] : norms)
          if (k.first <= x && y <= k.second) sum += n;
        best = std::max(best, static_cast<double>(sum / F(y - x)));
      }
  }
  return best;
}

/// ||H||_{X,f}: the f-norm if every term meets the anchor, otherwise +inf.
inline double anchored_norm(const Interaction& h, const std::set<int>& anchor, const DecayFunction& f) {
  for (const auto& s : h.slices)
    for (const auto& t : s.terms) {
      auto it = anchor.lower_bound(t.first);
      if (it == anchor.end() || *it > t.last) return std::numeric_limits<double>::infinity();
    }
  return tdi_f_norm(h, f);
}

inline Interaction interaction_sum(const Interaction& a, const Interaction& b) {
  require(a.dims == b.dims && a.slices.size() == b.slices.size(), "interaction sum: shapes differ");
  Interaction out = a;
  for (std::size_t i = 0; i < a.slices.size(); ++i) {
    require(std::abs(a.slices[i].duration - b.slices[i].duration) < 1e-15, "interaction sum: slice grids differ");
    out.slices[i].terms.insert(out.slices[i].terms.end(), b.slices[i].terms.begin(), b.slices[i].terms.end());
  }
  return out;
}

/// Hermitian H with exp(-i H t) = U at t = duration; eigenphases in (-pi, pi].
inline Mat unitary_generator(const Mat& u, double duration) {
  Eigen::ComplexSchur<Mat> schur(u);
  Mat Z = schur.matrixU();
  Mat T = schur.matrixT();
  Vec phase(T.rows());
  for (Eigen::Index i = 0; i < T.rows(); ++i) {
    cplx l = T(i, i);
    phase(i) = std::abs(l + 1.0) < 1e-12 ? std::numbers::pi : std::arg(l);
  }
  Mat h = -Z * phase.asDiagonal() * Z.adjoint() / duration;
  return (h + h.adjoint()) / 2.0;
}

/// One slice per layer (T, V, W) of duration 1/3.
inline Interaction circuit_interaction(const GateCircuit& c) {
  Interaction h;
  for (const auto& s : c.sites) h.dims.push_back(s.dim());
  for (char layer : {'T', 'V', 'W'}) {
    InteractionSlice s;
    s.duration = 1.0 / 3.0;
    for (const auto& g : c.gates)
      if (g.layer == layer) {
        Mat gen = unitary_generator(g.matrix, s.duration);
        if (max_abs(gen) > 0) s.terms.push_back({g.first, g.last, gen});
      }
    h.slices.push_back(std::move(s));
  }
  h.slices.back().duration = 1.0 - 2.0 / 3.0;
  return h;
}

}  // namespace sptkit
