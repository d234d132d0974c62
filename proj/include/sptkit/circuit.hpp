#pragma once

#include <string>
#include <vector>

#include "sptkit/group.hpp"
#include "sptkit/linalg.hpp"

namespace sptkit {

/// Product state with one-dimensional on-site spaces; site j holds the
/// vector labels[j] transforming as charges[j]. Sites before first_site and
/// past the end are trivially charged.
struct ChargedProductSpec {
  GroupPtr group;
  std::vector<Charge> charges;
  std::vector<std::string> labels;
  int first_site = 0;
};

/// Stacked site: original {e, nu} times auxiliary {e', nu', xi'}. A charged
/// vector whose charge is trivial is identified with the trivial one, so the
/// space can be smaller than 2 x 3.
struct SiteSpace {
  std::vector<std::string> original;
  std::vector<std::string> aux;
  std::vector<Charge> original_charges;
  std::vector<Charge> aux_charges;

  int dim() const { return static_cast<int>(original.size() * aux.size()); }
  int index(int o, int a) const { return o * static_cast<int>(aux.size()) + a; }
  Charge charge(int k) const {
    const int na = static_cast<int>(aux.size());
    return charge_product(original_charges[k / na], aux_charges[k % na]);
  }
  std::string label(int k) const {
    const int na = static_cast<int>(aux.size());
    return original[k / na] + "." + aux[k % na];
  }
  int find(const std::string& o, const std::string& a) const {
    for (std::size_t i = 0; i < original.size(); ++i)
      for (std::size_t j = 0; j < aux.size(); ++j)
        if (original[i] == o && aux[j] == a) return index(static_cast<int>(i), static_cast<int>(j));
    return -1;
  }
};

struct Gate {
  int first = 0;
  int last = 0;  // inclusive; last - first <= 1
  Mat matrix;
  char layer = 'T';
};

struct GateCircuit {
  GroupPtr group;
  int length = 0;  // window [0, length); site `length` is the boundary site
  std::vector<SiteSpace> sites;
  std::vector<Gate> gates;
};

struct ChargeTransfer {
  GateCircuit circuit;
  std::vector<int> initial;  // basis index per stacked site
  std::vector<int> final;
  ChargedProductSpec final_spec;
};

inline constexpr int kMaxCircuitLength = 24;

namespace detail {

inline const Charge& spec_charge(const ChargedProductSpec& s, int site, const Charge& triv) {
  const int k = site - s.first_site;
  return (k >= 0 && k < static_cast<int>(s.charges.size())) ? s.charges[k] : triv;
}

/// Unitary on the sites of `sp` swapping two product basis vectors, identity
/// when they coincide.
inline Mat swap_gate(int dim, int a, int b) {
  Mat m = Mat::Identity(dim, dim);
  if (a == b) return m;
  m(a, a) = m(b, b) = 0;
  m(a, b) = m(b, a) = 1;
  return m;
}

}  // namespace detail

inline void validate_product_spec(const ChargedProductSpec& s) {
  require(s.group != nullptr, "charged product spec without a group");
  require(s.labels.empty() || s.labels.size() == s.charges.size(), "one label per site expected");
  for (std::size_t k = 0; k < s.charges.size(); ++k) {
    require(same_group(s.charges[k].group, s.group), "site charge over a different group");
    auto bad = validate_charge(s.charges[k]);
    if (!bad.empty())
      fail(ErrorKind::validation, "site " + std::to_string(s.first_site + static_cast<int>(k)) +
                                      " charge is not a homomorphism at (" + std::to_string(bad[0].g) + "," +
                                      std::to_string(bad[0].h) + ")");
  }
}

/// Three-layer charge transfer on the window [0, n) plus one boundary site n.
/// T_i moves nu_i (x) e'_i to e_i (x) nu'_i, V_0 and V_j (j odd) rewrite the
/// auxiliary charges as xi'_0 = q_0, xi'_{2m+1} = conj(q_{2m}...q_0),
/// xi'_{2m+2} = q_{2m+2}...q_0, and W_{2k} annihilates each xi'(x)xi' pair of
/// opposite charge into e'(x)e'. The total charge ends on the boundary site.
inline ChargeTransfer charge_transfer_circuit(const ChargedProductSpec& spec, int n) {
  validate_product_spec(spec);
  if (n > kMaxCircuitLength)
    fail(ErrorKind::resource_guard, "circuit length " + std::to_string(n) + " exceeds the guard " +
                                        std::to_string(kMaxCircuitLength));
  require(n >= 2 && n % 2 == 0, "circuit length must be even and at least 2");
  const auto& G = spec.group;
  const Charge triv = trivial_charge(G);
  for (std::size_t k = 0; k < spec.charges.size(); ++k) {
    const int site = spec.first_site + static_cast<int>(k);
    if ((site < 0 || site >= n) && !is_trivial(spec.charges[k]))
      fail(ErrorKind::validation, "nontrivial charge at site " + std::to_string(site) + " outside the window [0," +
                                      std::to_string(n) + ")");
  }

  std::vector<Charge> q(n + 1, triv), chi(n + 1, triv);
  for (int i = 0; i < n; ++i) q[i] = detail::spec_charge(spec, i, triv);
  Charge acc = q[0];
  chi[0] = q[0];
  for (int i = 1; i <= n; ++i) {
    if (i % 2 == 1) {
      chi[i] = charge_conjugate(acc);
    } else {
      acc = charge_product(charge_product(acc, q[i - 1]), q[i]);
      chi[i] = acc;
    }
  }

  ChargeTransfer out;
  GateCircuit& c = out.circuit;
  c.group = G;
  c.length = n;
  for (int i = 0; i <= n; ++i) {
    SiteSpace s;
    s.original = {"e"};
    s.original_charges = {triv};
    s.aux = {"e'"};
    s.aux_charges = {triv};
    if (!is_trivial(q[i])) {
      s.original.push_back("nu");
      s.original_charges.push_back(q[i]);
      s.aux.push_back("nu'");
      s.aux_charges.push_back(q[i]);
    }
    if (!is_trivial(chi[i])) {
      s.aux.push_back("xi'");
      s.aux_charges.push_back(chi[i]);
    }
    c.sites.push_back(std::move(s));
  }
  auto nu = [&](int i) { return is_trivial(q[i]) ? std::string("e") : std::string("nu"); };
  auto nup = [&](int i) { return is_trivial(q[i]) ? std::string("e'") : std::string("nu'"); };
  auto xip = [&](int i) { return is_trivial(chi[i]) ? std::string("e'") : std::string("xi'"); };

  // Two-site product index for (site i, k_i) x (site i+1, k_j).
  auto pair_index = [&](int i, int ki, int kj) { return ki * c.sites[i + 1].dim() + kj; };

  for (int i = 0; i <= n; ++i) {
    const auto& s = c.sites[i];
    c.gates.push_back({i, i, detail::swap_gate(s.dim(), s.find(nu(i), "e'"), s.find("e", nup(i))), 'T'});
  }
  {
    const auto& s = c.sites[0];
    c.gates.push_back({0, 0, detail::swap_gate(s.dim(), s.find("e", nup(0)), s.find("e", xip(0))), 'V'});
  }
  for (int j = 1; j + 1 <= n; j += 2) {
    const auto &a = c.sites[j], &b = c.sites[j + 1];
    // Identity on the original factors: swap for each original basis pair.
    Mat m = Mat::Identity(a.dim() * b.dim(), a.dim() * b.dim());
    for (std::size_t oa = 0; oa < a.original.size(); ++oa)
      for (std::size_t ob = 0; ob < b.original.size(); ++ob) {
        const auto& la = a.original[oa];
        const auto& lb = b.original[ob];
        int x = pair_index(j, a.find(la, nup(j)), b.find(lb, nup(j + 1)));
        int y = pair_index(j, a.find(la, xip(j)), b.find(lb, xip(j + 1)));
        if (x != y) {
          m(x, x) = m(y, y) = 0;
          m(x, y) = m(y, x) = 1;
        }
      }
    c.gates.push_back({j, j + 1, m, 'V'});
  }
  for (int k = 0; k + 1 < n; k += 2) {
    const auto &a = c.sites[k], &b = c.sites[k + 1];
    Mat m = Mat::Identity(a.dim() * b.dim(), a.dim() * b.dim());
    for (std::size_t oa = 0; oa < a.original.size(); ++oa)
      for (std::size_t ob = 0; ob < b.original.size(); ++ob) {
        const auto& la = a.original[oa];
        const auto& lb = b.original[ob];
        int x = pair_index(k, a.find(la, xip(k)), b.find(lb, xip(k + 1)));
        int y = pair_index(k, a.find(la, "e'"), b.find(lb, "e'"));
        if (x != y) {
          m(x, x) = m(y, y) = 0;
          m(x, y) = m(y, x) = 1;
        }
      }
    c.gates.push_back({k, k + 1, m, 'W'});
  }

  for (int i = 0; i <= n; ++i) out.initial.push_back(c.sites[i].find(nu(i), "e'"));
  for (int i = 0; i <= n; ++i)
    out.final.push_back(i < n ? c.sites[i].find("e", "e'") : c.sites[i].find("e", xip(i)));

  out.final_spec.group = G;
  for (int i = 0; i <= n; ++i) {
    out.final_spec.charges.push_back(c.sites[i].charge(out.final[i]));
    out.final_spec.labels.push_back(c.sites[i].label(out.final[i]));
  }
  return out;
}

/// max over gates and g of |G U(g) - U(g) G| with U the diagonal on-site
/// action on the gate support.
inline double gate_equivariance_residual(const GateCircuit& c, const Gate& gate) {
  double r = 0.0;
  for (int g = 0; g < c.group->order(); ++g) {
    Vec u = Vec::Ones(1);
    for (int s = gate.first; s <= gate.last; ++s) {
      const auto& sp = c.sites[s];
      Vec d(sp.dim());
      for (int k = 0; k < sp.dim(); ++k) d(k) = sp.charge(k)(g).value();
      u = kron(u, d);
    }
    Mat U = u.asDiagonal();
    r = std::max(r, max_abs(gate.matrix * U - U * gate.matrix));
  }
  return r;
}

inline double circuit_equivariance_residual(const GateCircuit& c) {
  double r = 0.0;
  for (const auto& g : c.gates) r = std::max(r, gate_equivariance_residual(c, g));
  return r;
}

/// Layer-wise support disjointness.
inline bool layers_disjoint(const GateCircuit& c) {
  for (std::size_t a = 0; a < c.gates.size(); ++a)
    for (std::size_t b = a + 1; b < c.gates.size(); ++b) {
      const auto &x = c.gates[a], &y = c.gates[b];
      if (x.layer == y.layer && x.first <= y.last && y.first <= x.last) return false;
    }
  return true;
}

inline std::vector<Vec> basis_product(const GateCircuit& c, const std::vector<int>& idx) {
  std::vector<Vec> v;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    Vec e = Vec::Zero(c.sites[i].dim());
    e(idx[i]) = 1;
    v.push_back(e);
  }
  return v;
}

struct ProductRun {
  std::vector<Vec> sites;
  double product_residual = 0.0;  // largest discarded singular value
};

/// Applies the gates in order to a product vector, refactorizing two-site
/// outputs by SVD.
inline ProductRun simulate_product(const GateCircuit& c, std::vector<Vec> v) {
  require(v.size() == c.sites.size(), "product vector has the wrong number of sites");
  ProductRun run;
  for (const auto& g : c.gates) {
    if (g.first == g.last) {
      v[g.first] = g.matrix * v[g.first];
      continue;
    }
    const int da = c.sites[g.first].dim(), db = c.sites[g.last].dim();
    Vec w = g.matrix * kron(v[g.first], v[g.last]);
    Mat M(da, db);
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < db; ++b) M(a, b) = w(a * db + b);
    Eigen::JacobiSVD<Mat> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    if (s.size() > 1) run.product_residual = std::max(run.product_residual, s(1));
    v[g.first] = s(0) * svd.matrixU().col(0);
    v[g.last] = svd.matrixV().col(0).conjugate();
  }
  run.sites = std::move(v);
  return run;
}

inline cplx product_overlap(const std::vector<Vec>& a, const std::vector<Vec>& b) {
  require(a.size() == b.size(), "product overlap: site count mismatch");
  cplx o = 1.0;
  for (std::size_t i = 0; i < a.size(); ++i) o *= a[i].dot(b[i]);
  return o;
}

}  // namespace sptkit
