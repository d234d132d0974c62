#pragma once

#include <cfloat>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "sptkit/circuit.hpp"
#include "sptkit/cohomology.hpp"
#include "sptkit/locality.hpp"
#include "sptkit/mps.hpp"
#include "sptkit/proj_rep.hpp"
#include "sptkit/spt_index.hpp"

namespace sptkit {

using Json = nlohmann::ordered_json;

/// Parses `text`; syntax errors become validation errors with line and column.
inline Json parse_json_text(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    std::string what = e.what();
    if (auto p = what.find("parse error"); p != std::string::npos) what = what.substr(p);
    fail(ErrorKind::validation, source + ": malformed JSON at line " + std::to_string(line) + ", column " +
                                    std::to_string(col) + ": " + what);
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::validation, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::validation, "cannot write '" + path + "'");
  out << text;
}

namespace detail {

inline const Json& field(const Json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::validation, what + ": missing field '" + key + "'");
  return j.at(key);
}

template <class T>
T get(const Json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::validation, what + ": " + e.what());
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Scalars and matrices.

inline Json to_json(const Phase& p) {
  if (p.is_exact()) return Json{{"num", p.num()}, {"den", p.den()}};
  return Json{{"angle", p.angle()}};
}

/// {"num":p,"den":q} or {"angle":x} with x in radians.
inline Phase phase_from_json(const Json& j, const std::string& what) {
  if (j.is_object() && j.contains("num")) {
    auto den = detail::get<std::int64_t>(detail::field(j, "den", what), what);
    require(den > 0, what + ": phase denominator must be positive");
    return Phase::exact(detail::get<std::int64_t>(j.at("num"), what), den);
  }
  if (j.is_object() && j.contains("angle")) return Phase::from_angle(detail::get<double>(j.at("angle"), what));
  fail(ErrorKind::validation, what + ": phase must be {\"num\",\"den\"} or {\"angle\"}");
}

inline Json to_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    rows.push_back(std::move(row));
  }
  return rows;
}

/// [[ [re,im] ]]; a bare number is read as a real entry.
inline Mat matrix_from_json(const Json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), what + ": matrix must be a non-empty array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  require(j[0].is_array(), what + ": matrix rows must be arrays");
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Mat m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    require(j[r].is_array() && static_cast<Eigen::Index>(j[r].size()) == cols, what + ": ragged matrix");
    for (Eigen::Index c = 0; c < cols; ++c) {
      const Json& e = j[r][c];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else {
        require(e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number(),
                what + ": entries must be [re, im]");
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      }
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Groups, charges, cocycles, reps.

inline Json to_json(const FiniteGroup& g) {
  return Json{{"name", g.name()}, {"order", g.order()}, {"mult", g.table()}, {"identity", 0}};
}

/// A catalog name or {"name","order","mult","identity":0}.
inline GroupPtr group_from_json(const Json& j, const std::string& what = "group") {
  if (j.is_string()) return build_group(j.get<std::string>());
  require(j.is_object(), what + ": expected a catalog name or a group object");
  std::string name = j.contains("name") ? detail::get<std::string>(j.at("name"), what) : std::string("custom");
  if (!j.contains("mult")) return build_group(name);
  auto mult = detail::get<std::vector<std::vector<int>>>(j.at("mult"), what + ".mult");
  if (j.contains("order"))
    require(detail::get<int>(j.at("order"), what) == static_cast<int>(mult.size()), what + ": order does not match mult");
  if (j.contains("identity")) require(detail::get<int>(j.at("identity"), what) == 0, what + ": identity must be 0");
  return make_group(name, mult);
}

/// Resolves a "group" field: the context group when the names agree, else
/// the catalog.
inline GroupPtr resolve_group(const Json& j, const GroupPtr& context, const std::string& what) {
  if (j.is_string() && context && j.get<std::string>() == context->name()) return context;
  if (j.is_object() && context && j.contains("name") && !j.contains("mult") &&
      j.at("name") == context->name())
    return context;
  return group_from_json(j, what);
}

inline Json to_json(const Charge& q) {
  Json ph = Json::array();
  for (const auto& p : q.values) ph.push_back(to_json(p));
  return Json{{"group", q.group->name()}, {"phases", ph}};
}

inline Charge charge_phases_from_json(const GroupPtr& g, const Json& phases, const std::string& what) {
  require(phases.is_array() && static_cast<int>(phases.size()) == g->order(),
          what + ": need one phase per group element");
  Charge q{g, {}};
  for (std::size_t i = 0; i < phases.size(); ++i)
    q.values.push_back(phase_from_json(phases[i], what + "[" + std::to_string(i) + "]"));
  return q;
}

inline Charge charge_from_json(const Json& j, const GroupPtr& context = nullptr, const std::string& what = "charge") {
  auto g = resolve_group(detail::field(j, "group", what), context, what);
  return charge_phases_from_json(g, detail::field(j, "phases", what), what);
}

inline Json to_json(const Cocycle& mu) {
  const int n = mu.order();
  Json rows = Json::array();
  for (int g = 0; g < n; ++g) {
    Json row = Json::array();
    for (int h = 0; h < n; ++h) row.push_back(to_json(mu(g, h)));
    rows.push_back(std::move(row));
  }
  return Json{{"group", mu.group->name()}, {"phases", rows}};
}

inline Cocycle cocycle_from_json(const Json& j, const GroupPtr& context = nullptr, const std::string& what = "cocycle") {
  auto g = resolve_group(detail::field(j, "group", what), context, what);
  const Json& ph = detail::field(j, "phases", what);
  const int n = g->order();
  require(ph.is_array() && static_cast<int>(ph.size()) == n, what + ": phases must be an order x order table");
  Cocycle mu = trivial_cocycle(g);
  for (int a = 0; a < n; ++a) {
    require(ph[a].is_array() && static_cast<int>(ph[a].size()) == n, what + ": phases must be an order x order table");
    for (int b = 0; b < n; ++b)
      mu.table[static_cast<std::size_t>(a) * n + b] =
          phase_from_json(ph[a][b], what + "[" + std::to_string(a) + "][" + std::to_string(b) + "]");
  }
  return mu;
}

inline Json rep_to_json(const GroupPtr& g, const std::vector<Mat>& matrices) {
  Json ms = Json::array();
  for (const auto& m : matrices) ms.push_back(to_json(m));
  return Json{{"group", g->name()}, {"dim", matrices.empty() ? 0 : matrices[0].rows()}, {"matrices", ms}};
}

struct RepInput {
  GroupPtr group;
  std::vector<Mat> matrices;
};

inline RepInput rep_from_json(const Json& j, const GroupPtr& context = nullptr, const std::string& what = "rep") {
  RepInput r;
  r.group = resolve_group(detail::field(j, "group", what), context, what);
  const Json& ms = detail::field(j, "matrices", what);
  require(ms.is_array() && static_cast<int>(ms.size()) == r.group->order(), what + ": need one matrix per element");
  for (std::size_t i = 0; i < ms.size(); ++i) {
    r.matrices.push_back(matrix_from_json(ms[i], what + ".matrices[" + std::to_string(i) + "]"));
    require(r.matrices.back().rows() == r.matrices.back().cols(), what + ": matrices must be square");
  }
  if (j.contains("dim"))
    require(detail::get<int>(j.at("dim"), what) == r.matrices[0].rows(), what + ": dim does not match the matrices");
  return r;
}

inline Json to_json(const CohomologyClass& c) {
  Json out{{"group", c.group->name()},
           {"divisors", c.divisors},
           {"coordinates", c.coordinates},
           {"trivial", c.is_trivial()}};
  if (c.fingerprint) {
    const int n = c.group->order();
    Json rows = Json::array();
    for (int g = 0; g < n; ++g) {
      Json row = Json::array();
      for (int h = 0; h < n; ++h) row.push_back(to_json((*c.fingerprint)[static_cast<std::size_t>(g) * n + h]));
      rows.push_back(std::move(row));
    }
    out["fingerprint"] = rows;
  } else {
    out["fingerprint"] = nullptr;
  }
  out["representative"] = to_json(c.representative)["phases"];
  out["snap_error"] = c.snap_error;
  return out;
}

// ---------------------------------------------------------------------------
// States.

inline Json to_json(const SymmetricMps& m) {
  Json t = Json::array();
  for (const auto& a : m.A) t.push_back(to_json(a));
  Json out{{"d", m.d}, {"D", m.D}, {"tensor", t}, {"group", m.group->name()},
           {"onsite", rep_to_json(m.group, m.onsite)}, {"label", m.label}};
  if (m.detector) out["detector"] = to_string(*m.detector);
  return out;
}

inline SymmetricMps state_from_json(const Json& j, const GroupPtr& context = nullptr, const std::string& what = "state") {
  auto g = resolve_group(detail::field(j, "group", what), context, what);
  const Json& t = detail::field(j, "tensor", what);
  require(t.is_array() && !t.empty(), what + ": tensor must be a non-empty list of matrices");
  std::vector<Mat> A;
  for (std::size_t i = 0; i < t.size(); ++i) A.push_back(matrix_from_json(t[i], what + ".tensor[" + std::to_string(i) + "]"));
  if (j.contains("d")) require(detail::get<int>(j.at("d"), what) == static_cast<int>(A.size()), what + ": d does not match the tensor");
  if (j.contains("D")) require(detail::get<int>(j.at("D"), what) == A[0].rows(), what + ": D does not match the tensor");
  auto rep = rep_from_json(detail::field(j, "onsite", what), g, what + ".onsite");
  require(same_group(rep.group, g), what + ": on-site rep is over a different group");
  std::optional<DetectorKind> det;
  if (j.contains("detector") && !j.at("detector").is_null()) {
    auto s = detail::get<std::string>(j.at("detector"), what);
    require(s == "so3" || s == "u1", what + ": detector must be so3 or u1");
    det = s == "so3" ? DetectorKind::so3 : DetectorKind::u1;
  }
  std::string label = j.contains("label") ? detail::get<std::string>(j.at("label"), what) : std::string("state");
  return make_mps(std::move(A), g, std::move(rep.matrices), label, det);
}

// ---------------------------------------------------------------------------
// Circuits and F-functions.

/// Either an array of charge objects or {"group", "charges": [[phase]], "first_site"}.
inline ChargedProductSpec product_spec_from_json(const Json& j, const std::string& what = "charges") {
  ChargedProductSpec s;
  if (j.is_array()) {
    require(!j.empty(), what + ": empty charge list");
    s.group = group_from_json(detail::field(j[0], "group", what), what);
    for (std::size_t i = 0; i < j.size(); ++i)
      s.charges.push_back(charge_from_json(j[i], s.group, what + "[" + std::to_string(i) + "]"));
    return s;
  }
  s.group = group_from_json(detail::field(j, "group", what), what);
  const Json& cs = detail::field(j, "charges", what);
  require(cs.is_array(), what + ": charges must be an array");
  for (std::size_t i = 0; i < cs.size(); ++i)
    s.charges.push_back(charge_phases_from_json(s.group, cs[i], what + ".charges[" + std::to_string(i) + "]"));
  if (j.contains("first_site")) s.first_site = detail::get<int>(j.at("first_site"), what);
  if (j.contains("labels")) s.labels = detail::get<std::vector<std::string>>(j.at("labels"), what);
  return s;
}

inline Json to_json(const ChargeTransfer& t) {
  const auto& c = t.circuit;
  Json sites = Json::array();
  for (const auto& s : c.sites) {
    Json basis = Json::array(), charges = Json::array();
    for (int k = 0; k < s.dim(); ++k) {
      basis.push_back(s.label(k));
      charges.push_back(to_json(s.charge(k))["phases"]);
    }
    sites.push_back(Json{{"dim", s.dim()}, {"basis", basis}, {"charges", charges}});
  }
  Json gates = Json::array();
  for (const auto& g : c.gates)
    gates.push_back(Json{{"support", {g.first, g.last}}, {"layer", std::string(1, g.layer)}, {"matrix", to_json(g.matrix)}});
  Json initial = Json::array(), final = Json::array(), final_charges = Json::array();
  for (std::size_t i = 0; i < c.sites.size(); ++i) {
    initial.push_back(c.sites[i].label(t.initial[i]));
    final.push_back(c.sites[i].label(t.final[i]));
    final_charges.push_back(to_json(t.final_spec.charges[i])["phases"]);
  }
  return Json{{"group", c.group->name()}, {"length", c.length},     {"sites", sites},
              {"gates", gates},            {"initial", initial},     {"final", final},
              {"final_charges", final_charges}};
}

/// Long double table entry: a JSON number when a double holds it, else a string.
inline Json real_to_json(real v) {
  if (v == 0 || (std::fabs(v) >= DBL_MIN && std::fabs(v) <= DBL_MAX)) return static_cast<double>(v);
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17Le", v);
  return std::string(buf);
}

inline Json to_json(const FFunction& F, const FAxiomReport& ax) {
  Json vals = Json::array();
  for (real v : F.values) vals.push_back(real_to_json(v));
  Json onset = Json::object();
  for (std::size_t i = 0; i < F.decay.poly_onset.size(); ++i)
    onset[std::to_string(kPolyPowers[i])] = F.decay.poly_onset[i];
  return Json{{"decay", F.source},
              {"r_max", F.r_max()},
              {"truncated", F.truncated},
              {"kappa", real_to_json(F.kappa)},
              {"convolution_constant", real_to_json(F.c_conv)},
              {"convolution_bound", real_to_json(F.c_conv_bound)},
              {"integrability_constant", real_to_json(F.c_int)},
              {"integrability_tail", real_to_json(F.int_tail)},
              {"polynomial_onset", onset},
              {"axioms",
               {{"positive", ax.positive},
                {"monotone", ax.monotone},
                {"dominates_f", ax.dominates_f},
                {"integrable", ax.integrable},
                {"convolution", ax.convolution}}},
              {"values", vals}};
}

}  // namespace sptkit
