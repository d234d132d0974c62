#pragma once

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "sptkit/circuit.hpp"
#include "sptkit/locality.hpp"
#include "sptkit/spt_index.hpp"
#include "sptkit/states.hpp"

namespace sptkit {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
};

struct AcceptanceReport {
  std::uint64_t seed = 0;
  std::vector<CriterionResult> criteria;

  bool passed() const {
    for (const auto& c : criteria)
      if (!c.passed) return false;
    return true;
  }

  /// One line per criterion; no timings, so reruns compare byte for byte.
  std::string text() const {
    std::string out;
    for (const auto& c : criteria)
      out += "criterion " + std::to_string(c.id) + " " + c.name + ": " + (c.passed ? "PASS" : "FAIL") + " (" +
             c.detail + ")\n";
    return out;
  }
};

namespace acceptance {

inline std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", x);
  return buf;
}

inline Cocycle pauli_cocycle() {
  auto g = build_group("Z2xZ2");
  std::vector<std::int64_t> e(16);
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) e[a * 4 + b] = (a & 1) * ((b >> 1) & 1);
  return cocycle_from_exponents(g, e, 2);
}

/// Z2xZ2 catalog: cluster, one fixed point per class, trivial and charged products.
inline std::vector<SymmetricMps> z2xz2_states() {
  auto g = build_group("Z2xZ2");
  Charge q{g, {Phase::one(), Phase::exact(1, 2), Phase::one(), Phase::exact(1, 2)}};
  auto trivial_fp = fixed_point_state(trivial_cocycle(g));
  trivial_fp.label = "fixed-point-trivial";
  auto pauli_fp = fixed_point_state(pauli_cocycle());
  pauli_fp.label = "fixed-point-pauli";
  auto charged = product_state(q);
  charged.label = "product-charged";
  return {cluster_state(), trivial_fp, pauli_fp, product_state(trivial_charge(g)), charged};
}

/// States under the D2 subgroup of the SO(3) detector.
inline std::vector<SymmetricMps> detector_states() { return {aklt_state(), spin1_product_state()}; }

inline std::vector<SymmetricMps> all_states() {
  auto s = z2xz2_states();
  for (auto& m : detector_states()) s.push_back(std::move(m));
  return s;
}

inline std::vector<std::string> catalog_groups() {
  return {"Z2", "Z3", "Z4", "Z5", "Z6", "Z7", "Z8", "Z2xZ2", "Z2^3", "D4", "Q8", "S3"};
}

using Clock = std::chrono::steady_clock;

inline double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

/// Runs `body`, turning errors into a failed criterion and enforcing the
/// runtime limit (limit <= 0: none).
inline CriterionResult run(int id, std::string name, double limit,
                           const std::function<bool(std::string&)>& body) {
  CriterionResult r{id, std::move(name), false, ""};
  auto t0 = Clock::now();
  try {
    r.passed = body(r.detail);
  } catch (const std::exception& e) {
    r.passed = false;
    r.detail = std::string("error: ") + e.what();
  }
  if (limit > 0 && seconds_since(t0) > limit) {
    r.passed = false;
    r.detail += "; runtime limit " + std::to_string(static_cast<int>(limit)) + " s exceeded";
  }
  return r;
}

inline CriterionResult h2_divisors() {
  return run(1, "h2-divisors", 10.0, [](std::string& d) {
    bool ok = true;
    for (int n = 2; n <= 8; ++n) ok &= compute_h2(build_group("Z" + std::to_string(n))).divisors.empty();
    ok &= compute_h2(build_group("Z2xZ2")).divisors == std::vector<std::int64_t>{2};
    ok &= compute_h2(build_group("Z2^3")).divisors == std::vector<std::int64_t>{2, 2, 2};
    int agree = 0;
    for (const char* name : {"Z2", "Z3", "Z2xZ2"}) {
      auto g = build_group(name);
      std::int64_t count = 1;
      for (auto x : compute_h2(g).divisors) count *= x;
      agree += brute_force_h2(g, g->order()).class_count == count;
    }
    ok &= agree == 3;
    d = "divisors checked on 9 groups; brute force agrees on " + std::to_string(agree) + "/3";
    return ok;
  });
}

inline CriterionResult surjectivity() {
  return run(2, "surjectivity-roundtrip", 30.0, [](std::string& d) {
    int total = 0, good = 0;
    for (const auto& name : catalog_groups()) {
      auto g = build_group(name);
      auto h2 = compute_h2(g);
      std::vector<Cocycle> classes{trivial_cocycle(g)};
      for (const auto& c : h2.generators) classes.push_back(c);
      for (const auto& mu : classes) {
        ++total;
        good += compute_index(fixed_point_state(mu)).cls == classify(mu);
      }
    }
    d = std::to_string(good) + "/" + std::to_string(total) + " classes reproduced";
    return good == total;
  });
}

inline CriterionResult haldane() {
  return run(3, "haldane-detection", 1.0, [](std::string& d) {
    auto a = detector_verdict(aklt_state(), so3_detector(2));
    auto p = detector_verdict(spin1_product_state(), so3_detector(2));
    const double ea = std::abs(*a.commutator + 1.0), ep = std::abs(*p.commutator - 1.0);
    d = "aklt |c+1| = " + sci(ea) + ", product |c-1| = " + sci(ep);
    return ea < 1e-8 && ep < 1e-8 && a.verdict == "haldane" && p.verdict == "trivial";
  });
}

inline CriterionResult stacking() {
  return run(4, "stacking-homomorphism", 0, [](std::string& d) {
    int total = 0, good = 0;
    double worst = 0;
    for (const auto& family : {z2xz2_states(), detector_states()}) {
      for (std::size_t i = 0; i < family.size(); ++i)
        for (std::size_t j = i; j < family.size(); ++j) {
          auto c = stacked_index_check(family[i], family[j]);
          ++total;
          worst = std::max(worst, c.max_residual);
          good += c.passed && c.max_residual < 1e-6;
        }
    }
    auto aa = stack_states(aklt_state(), aklt_state());
    // The stacked on-site action is the D2 detector on spin 1 (x) spin 1.
    CompactDetectorSpec d2{DetectorKind::so3, aa.group, aa.onsite};
    bool trivial = compute_index(aa).trivial && detector_verdict(aa, d2).verdict == "trivial";
    d = std::to_string(good) + "/" + std::to_string(total) + " pairs, max residual " + sci(worst) +
        ", aklt^2 " + (trivial ? "trivial" : "nontrivial");
    return good == total && trivial;
  });
}

inline CriterionResult gauge_invariance(std::uint64_t seed) {
  return run(5, "gauge-invariance", 0, [seed](std::string& d) {
    std::mt19937_64 rng(seed * 1000003 + 5);
    std::uniform_real_distribution<double> ang(0, 2 * std::numbers::pi);
    int total = 0, good = 0;
    for (const auto& m : all_states()) {
      auto base = compute_index(m);
      auto e = compute_edge_rep(m);
      for (int t = 0; t < 50; ++t) {
        auto u = e.u;
        for (std::size_t g = 1; g < u.size(); ++g) u[g] *= std::polar(1.0, ang(rng));
        ++total;
        good += *index_from_unitaries(m.group, u).fingerprint == *base.cls.fingerprint;
      }
      for (int t = 0; t < 20; ++t) {
        ++total;
        good += *compute_index(virtual_gauge(m, random_unitary(m.D, rng))).cls.fingerprint == *base.cls.fingerprint;
      }
    }
    d = std::to_string(good) + "/" + std::to_string(total) + " gauges preserve the fingerprint";
    return good == total;
  });
}

inline CriterionResult charge_transfer(std::uint64_t seed) {
  return run(6, "charge-transfer", 5.0, [seed](std::string& d) {
    auto g = build_group("Z4");
    std::mt19937_64 rng(seed * 1000003 + 6);
    std::uniform_int_distribution<int> k(0, 3);
    const int n = 12, trials = 10;
    double worst_eq = 0, worst_overlap = 0;
    bool interior = true;
    for (int t = 0; t < trials; ++t) {
      ChargedProductSpec spec;
      spec.group = g;
      for (int i = 0; i < n; ++i) spec.charges.push_back(cyclic_charge(g, k(rng)));
      auto c = charge_transfer_circuit(spec, n);
      worst_eq = std::max(worst_eq, circuit_equivariance_residual(c.circuit));
      for (int i = 0; i < n; ++i) interior &= is_trivial(c.final_spec.charges[i]);
      auto out = simulate_product(c.circuit, basis_product(c.circuit, c.initial));
      double ov = std::abs(std::abs(product_overlap(basis_product(c.circuit, c.final), out.sites)) - 1.0);
      worst_overlap = std::max({worst_overlap, ov, out.product_residual});
    }
    d = std::to_string(trials) + " random Z4 windows of 12, max gate residual " + sci(worst_eq) +
        ", max overlap error " + sci(worst_overlap) + (interior ? "" : ", nontrivial interior charge");
    return worst_eq < 1e-12 && worst_overlap < 1e-12 && interior;
  });
}

inline CriterionResult schmidt() {
  return run(7, "schmidt-structure", 0, [](std::string& d) {
    auto a = schmidt_spectrum(aklt_state());
    bool ok = a.values.size() == 2 && std::abs(a.values[0] - 0.5) < 1e-10 && std::abs(a.values[1] - 0.5) < 1e-10;
    double worst_sum = 0;
    int bound = 0;
    auto states = all_states();
    for (const auto& m : states) {
      auto s = schmidt_spectrum(m);
      worst_sum = std::max(worst_sum, std::abs(s.sum - 1.0));
      bound += s.values[0] >= 1.0 / (static_cast<double>(m.D) * m.D);
    }
    d = std::string("aklt spectrum ") + (ok ? "(1/2, 1/2)" : "wrong") + ", max |sum - 1| " + sci(worst_sum) +
        ", lower bound holds on " + std::to_string(bound) + "/" + std::to_string(states.size());
    return ok && worst_sum < 1e-9 && bound == static_cast<int>(states.size());
  });
}

inline CriterionResult correlations(std::uint64_t seed) {
  return run(8, "correlation-decay", 0, [seed](std::string& d) {
    std::mt19937_64 rng(seed * 1000003 + 8);
    std::vector<SymmetricMps> fps{fixed_point_state(trivial_cocycle(build_group("Z2xZ2"))),
                                  fixed_point_state(pauli_cocycle())};
    auto z3 = build_group("Z3xZ3");
    fps.push_back(fixed_point_state(compute_h2(z3).generators.at(0)));
    double worst = 0;
    for (const auto& m : fps)
      for (int t = 0; t < 3; ++t) {
        Mat a = random_hermitian(m.d, rng), b = random_hermitian(m.d, rng);
        for (int r = 2; r <= 8; ++r) worst = std::max(worst, std::abs(connected_correlation(m, a, b, r)));
      }
    auto aklt = aklt_state();
    Mat z = spin_operators(2).z;
    double worst_ratio = 0;
    for (int r = 2; r <= 10; ++r) {
      double ratio = std::abs(connected_correlation(aklt, z, z, r)) / std::abs(connected_correlation(aklt, z, z, r - 1));
      worst_ratio = std::max(worst_ratio, std::abs(ratio - 1.0 / 3.0));
    }
    d = "fixed-point max |C(r>=2)| " + sci(worst) + ", aklt max |ratio - 1/3| " + sci(worst_ratio);
    return worst < 1e-12 && worst_ratio < 1e-6;
  });
}

inline CriterionResult top_block(std::uint64_t seed) {
  return run(9, "top-block", 0, [seed](std::string& d) {
    auto g = build_group("Z2xZ2");
    Charge q{g, {Phase::one(), Phase::exact(1, 2), Phase::one(), Phase::exact(1, 2)}};
    int good = 0, total = 0;
    for (const auto& m : {fixed_point_state(trivial_cocycle(g)), product_state(trivial_charge(g)), product_state(q),
                          spin1_product_state()}) {
      ++total;
      good += top_block_class(m).cls.is_trivial();
    }
    for (const auto& m : {aklt_state(), cluster_state()}) {
      ++total;
      good += !top_block_class(m).cls.is_trivial();
    }
    std::mt19937_64 rng(seed * 1000003 + 9);
    double worst_fp = 0;
    for (const auto& m : {fixed_point_state(trivial_cocycle(g)), fixed_point_state(pauli_cocycle())}) {
      Mat o = random_hermitian(m.d, rng);
      for (int w = 2; w <= 8; ++w) worst_fp = std::max(worst_fp, block_matrix_deviation(m, o, w));
    }
    auto aklt = aklt_state();
    Mat z = spin_operators(2).z;
    double worst_factor = 1;
    for (int w = 2; w <= 8; ++w) {
      double ratio = block_matrix_deviation(aklt, z, w) / std::pow(1.0 / 3.0, w);
      worst_factor = std::max({worst_factor, ratio, 1.0 / ratio});
    }
    char factor[32];
    std::snprintf(factor, sizeof factor, "%.4f", worst_factor);
    d = std::to_string(good) + "/" + std::to_string(total) + " top-block classes as expected, fixed-point deviation " +
        sci(worst_fp) + ", aklt worst factor " + factor;
    return good == total && worst_fp < 1e-12 && worst_factor < 2.0;
  });
}

inline CriterionResult f_axioms() {
  return run(10, "f-function-axioms", 10.0, [](std::string& d) {
    bool ok = true;
    for (const char* spec : {"exp:1.0", "stretched:1:0.5"}) {
      auto f = parse_decay(spec, 1000);
      auto F = build_f_function(f);
      auto r = check_f_axioms(F, f);
      ok &= r.all() && !F.truncated;
      if (!d.empty()) d += "; ";
      d += std::string(spec) + (r.all() ? " ok" : " violated at r = " + std::to_string(r.first_violation));
    }
    return ok;
  });
}

inline std::vector<CriterionResult> run_battery(std::uint64_t seed) {
  return {h2_divisors(),         surjectivity(),    haldane(),           stacking(),      gauge_invariance(seed),
          charge_transfer(seed), schmidt(),         correlations(seed),  top_block(seed), f_axioms()};
}

}  // namespace acceptance

/// Runs criteria 1-10 twice; criterion 11 compares the two reports byte for byte.
inline AcceptanceReport run_acceptance(std::uint64_t seed) {
  AcceptanceReport first{seed, acceptance::run_battery(seed)};
  AcceptanceReport second{seed, acceptance::run_battery(seed)};
  const bool same = first.text() == second.text();
  first.criteria.push_back({11, "determinism", same,
                            same ? "two runs byte-identical" : "second run differs from the first"});
  return first;
}

}  // namespace sptkit
