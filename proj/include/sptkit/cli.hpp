#pragma once

#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sptkit/acceptance.hpp"
#include "sptkit/json_io.hpp"

namespace sptkit {

inline constexpr const char* kToolVersion = "0.1.0";

inline std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    fail(ErrorKind::validation, "sha256 digest failed");
  std::ostringstream ss;
  for (unsigned int i = 0; i < len; ++i) ss << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
  return ss.str();
}

namespace cli {

/// Run state collected for the manifest.
struct Session {
  std::string command;
  Json inputs = Json::array();
  Json tolerances = Json::object();
  std::string out_path;
  std::string output_digest;

  Json load(const std::string& path) {
    std::string text = read_text_file(path);
    inputs.push_back(Json{{"path", path}, {"sha256", sha256_hex(text)}});
    return parse_json_text(text, path);
  }

  /// A catalog name, or a path to a group JSON file.
  GroupPtr group(const std::string& arg) {
    if (std::filesystem::is_regular_file(arg)) return group_from_json(load(arg), arg);
    return build_group(arg);
  }
};

inline std::string error_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::validation: return "validation";
    case ErrorKind::broken_symmetry: return "broken_symmetry";
    case ErrorKind::classification: return "classification";
    case ErrorKind::resource_guard: return "resource_guard";
  }
  return "unknown";
}

inline Json phase_table(const Cocycle& mu) { return to_json(mu)["phases"]; }

inline Json complex_json(cplx z) { return Json::array({z.real(), z.imag()}); }

}  // namespace cli

/// Entry point shared by the binary and the tests. Writes the JSON result
/// to `out` (or --out) and the run manifest to `err`; returns the exit code.
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  using cli::Session;
  const auto t0 = std::chrono::steady_clock::now();
  Session s;
  Json result;
  int code = 0;

  CLI::App app{"Symmetry-protected topological phase toolkit for 1D chains"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);
  std::string out_path;

  // group show
  auto* group_cmd = app.add_subcommand("group", "finite groups")->require_subcommand(1);
  auto* group_show = group_cmd->add_subcommand("show", "print a group table and basic structure");
  std::string group_arg;
  group_show->add_option("--group", group_arg, "catalog name or group JSON file")->required();

  // cohomology h2
  auto* coh_cmd = app.add_subcommand("cohomology", "group cohomology")->require_subcommand(1);
  auto* coh_h2 = coh_cmd->add_subcommand("h2", "H^2(G, U(1)) as cyclic divisors with generators");
  coh_h2->add_option("--group", group_arg, "catalog name or group JSON file")->required();

  // cocycle check|classify
  auto* cocycle_cmd = app.add_subcommand("cocycle", "2-cocycles")->require_subcommand(1);
  auto* cocycle_check = cocycle_cmd->add_subcommand("check", "test the cocycle identity");
  auto* cocycle_classify = cocycle_cmd->add_subcommand("classify", "cohomology class of a cocycle");
  std::string cocycle_path;
  double cocycle_tol = 1e-9, snap_tol = 1e-6;
  std::int64_t snap_den = 0;
  for (auto* c : {cocycle_check, cocycle_classify}) {
    c->add_option("--group", group_arg, "catalog name or group JSON file");
    c->add_option("--cocycle", cocycle_path, "cocycle JSON file")->required();
  }
  cocycle_check->add_option("--tol", cocycle_tol, "angular tolerance of the identity")->capture_default_str();
  cocycle_classify->add_option("--snap-den", snap_den, "snap denominator (0: 2|G|)")->capture_default_str();
  cocycle_classify->add_option("--snap-tol", snap_tol, "snap angular tolerance")->capture_default_str();

  // rep extract
  auto* rep_cmd = app.add_subcommand("rep", "projective representations")->require_subcommand(1);
  auto* rep_extract = rep_cmd->add_subcommand("extract", "multiplier and class of a projective rep");
  std::string rep_path;
  ExtractOptions extract_opt;
  rep_extract->add_option("--rep", rep_path, "rep JSON file")->required();
  rep_extract->add_option("--group", group_arg, "catalog name or group JSON file");
  rep_extract->add_option("--unitarity-tol", extract_opt.unitarity_tol, "")->capture_default_str();
  rep_extract->add_option("--residual-tol", extract_opt.residual_tol, "")->capture_default_str();

  // state build
  auto* state_cmd = app.add_subcommand("state", "matrix product states")->require_subcommand(1);
  auto* state_build = state_cmd->add_subcommand("build", "construct a catalog or fixed-point state");
  std::string kind, charge_path;
  state_build->add_option("--kind", kind, "aklt|cluster|product|product-spin1|fixed-point")
      ->required()
      ->check(CLI::IsMember({"aklt", "cluster", "product", "product-spin1", "fixed-point"}));
  state_build->add_option("--cocycle", cocycle_path, "cocycle JSON file (fixed-point)");
  state_build->add_option("--group", group_arg, "group for product states (default Z2xZ2)");
  state_build->add_option("--charge", charge_path, "charge JSON file (product)");

  // index compute
  auto* index_cmd = app.add_subcommand("index", "SPT index")->require_subcommand(1);
  auto* index_compute = index_cmd->add_subcommand("compute", "edge class of a symmetric MPS");
  std::string state_path, detector;
  EdgeOptions edge_opt;
  int u1_order = 8;
  std::vector<int> u1_charges;
  index_compute->add_option("--state", state_path, "state JSON file")->required();
  index_compute->add_option("--detector", detector, "so3|u1")->check(CLI::IsMember({"so3", "u1"}));
  index_compute->add_option("--u1-order", u1_order, "order n of the Z_n inside U(1)")->capture_default_str();
  index_compute->add_option("--u1-charges", u1_charges, "U(1) charge of each basis state (default: S_z)")
      ->delimiter(',');
  index_compute->add_option("--broken-tol", edge_opt.broken_tol, "")->capture_default_str();
  index_compute->add_option("--residual-tol", edge_opt.residual_tol, "")->capture_default_str();
  index_compute->add_option("--polar-tol", edge_opt.polar_tol, "")->capture_default_str();

  // circuit charge-transfer
  auto* circuit_cmd = app.add_subcommand("circuit", "equivariant circuits")->require_subcommand(1);
  auto* circuit_ct = circuit_cmd->add_subcommand("charge-transfer", "sweep all charges to the window boundary");
  std::string charges_path;
  int length = 0;
  circuit_ct->add_option("--charges", charges_path, "charges JSON file")->required();
  circuit_ct->add_option("--length", length, "window length n (even, >= 2)")->required();

  // locality ffunction
  auto* loc_cmd = app.add_subcommand("locality", "locality machinery")->require_subcommand(1);
  auto* loc_f = loc_cmd->add_subcommand("ffunction", "build and check an F-function");
  std::string decay;
  int rmax = 1000;
  loc_f->add_option("--decay", decay, "exp:A | stretched:A:THETA")->required();
  loc_f->add_option("--rmax", rmax, "largest tabulated distance")->capture_default_str();

  // verify suite
  auto* verify_cmd = app.add_subcommand("verify", "acceptance battery")->require_subcommand(1);
  auto* verify_suite = verify_cmd->add_subcommand("suite", "run every acceptance criterion");
  std::uint64_t seed = 7;
  verify_suite->add_option("--seed", seed, "seed for randomized gauges and charges")->capture_default_str();

  for (auto* leaf : {group_show, coh_h2, cocycle_check, cocycle_classify, rep_extract, state_build, index_compute,
                     circuit_ct, loc_f, verify_suite})
    leaf->add_option("--out", out_path, "write the JSON result to this file instead of stdout");

  std::vector<std::string> argv_store{"sptkit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_store) argv.push_back(a.data());

  try {
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      code = app.exit(e, out, err);
      if (code != 0) code = static_cast<int>(ErrorKind::validation);
      return code;
    }
    for (const auto& a : args) {
      if (a.rfind("--", 0) == 0) break;
      s.command += (s.command.empty() ? "" : " ") + a;
    }

    if (group_show->parsed()) {
      auto g = s.group(group_arg);
      std::vector<int> orders, inverses;
      for (int x = 0; x < g->order(); ++x) {
        orders.push_back(g->element_order(x));
        inverses.push_back(g->inv(x));
      }
      result = to_json(*g);
      result["abelian"] = g->is_abelian();
      result["element_orders"] = orders;
      result["inverses"] = inverses;
    } else if (coh_h2->parsed()) {
      auto g = s.group(group_arg);
      auto h2 = compute_h2(g);
      Json gens = Json::array();
      for (const auto& c : h2.generators) gens.push_back(cli::phase_table(c));
      result = Json{{"group", g->name()}, {"divisors", h2.divisors}, {"generators", gens}};
    } else if (cocycle_check->parsed() || cocycle_classify->parsed()) {
      GroupPtr g = group_arg.empty() ? nullptr : s.group(group_arg);
      auto mu = cocycle_from_json(s.load(cocycle_path), g, cocycle_path);
      if (g) require(same_group(mu.group, g), "cocycle is over a different group than --group");
      if (cocycle_check->parsed()) {
        s.tolerances["cocycle_tol"] = cocycle_tol;
        auto bad = check_cocycle(mu, cocycle_tol);
        Json first = Json::array();
        for (std::size_t i = 0; i < bad.size() && i < 10; ++i) first.push_back({bad[i].g, bad[i].h, bad[i].k});
        result = Json{{"group", mu.group->name()},
                      {"cocycle", bad.empty()},
                      {"normalized", is_normalized(mu)},
                      {"violations", bad.size()},
                      {"first_violations", first}};
      } else {
        s.tolerances["snap_denominator"] = snap_den;
        s.tolerances["snap_tolerance"] = snap_tol;
        result = to_json(classify(mu, ClassifyOptions{snap_den, snap_tol}));
      }
    } else if (rep_extract->parsed()) {
      GroupPtr g = group_arg.empty() ? nullptr : s.group(group_arg);
      auto in = rep_from_json(s.load(rep_path), g, rep_path);
      s.tolerances["unitarity_tol"] = extract_opt.unitarity_tol;
      s.tolerances["residual_tol"] = extract_opt.residual_tol;
      auto rep = extract_multiplier(in.group, in.matrices, extract_opt);
      result = Json{{"group", in.group->name()},
                    {"dim", rep.dim},
                    {"multiplier", cli::phase_table(rep.multiplier)},
                    {"residual", rep.residual},
                    {"class", to_json(classify_rep(rep))}};
    } else if (state_build->parsed()) {
      SymmetricMps m;
      if (kind == "fixed-point") {
        require(!cocycle_path.empty(), "state build --kind fixed-point needs --cocycle");
        GroupPtr g = group_arg.empty() ? nullptr : s.group(group_arg);
        auto mu = cocycle_from_json(s.load(cocycle_path), g, cocycle_path);
        m = fixed_point_state(mu);
      } else if (kind == "product") {
        GroupPtr g = s.group(group_arg.empty() ? std::string("Z2xZ2") : group_arg);
        Charge q = charge_path.empty() ? trivial_charge(g) : charge_from_json(s.load(charge_path), g, charge_path);
        m = product_state(q);
      } else {
        m = catalog_state(kind);
      }
      result = to_json(m);
    } else if (index_compute->parsed()) {
      auto m = state_from_json(s.load(state_path), nullptr, state_path);
      s.tolerances["broken_tol"] = edge_opt.broken_tol;
      s.tolerances["residual_tol"] = edge_opt.residual_tol;
      s.tolerances["polar_tol"] = edge_opt.polar_tol;
      SptIndexResult r;
      if (detector.empty()) {
        r = compute_index(m, edge_opt);
      } else {
        CompactDetectorSpec spec;
        const bool own = m.detector && to_string(*m.detector) == detector;
        if (own) {
          spec = CompactDetectorSpec{*m.detector, m.group, m.onsite};
        } else if (detector == "so3") {
          spec = so3_detector(m.d - 1);
        } else {
          if (u1_charges.empty()) {
            require(m.d % 2 == 1, "--u1-charges is required for even physical dimension");
            for (int k = 0; k < m.d; ++k) u1_charges.push_back((m.d - 1) / 2 - k);
          }
          require(static_cast<int>(u1_charges.size()) == m.d, "--u1-charges needs one charge per basis state");
          spec = u1_detector(u1_order, u1_charges);
        }
        r = detector_verdict(m, spec, edge_opt);
      }
      if (r.max_residual > edge_opt.residual_tol)
        fail(ErrorKind::classification, "edge rep residual " + std::to_string(r.max_residual) + " exceeds " +
                                            std::to_string(edge_opt.residual_tol));
      result = Json{{"label", m.label}, {"trivial", r.trivial}};
      if (r.verdict) result["verdict"] = *r.verdict;
      if (r.commutator) result["commutator"] = cli::complex_json(*r.commutator);
      result["class"] = to_json(r.cls);
      result["max_residual"] = r.max_residual;
      result["snap_error"] = r.snap_error;
    } else if (circuit_ct->parsed()) {
      auto spec = product_spec_from_json(s.load(charges_path), charges_path);
      auto t = charge_transfer_circuit(spec, length);
      auto run = simulate_product(t.circuit, basis_product(t.circuit, t.initial));
      result = to_json(t);
      result["equivariance_residual"] = circuit_equivariance_residual(t.circuit);
      result["product_residual"] = run.product_residual;
      result["product_overlap"] =
          std::abs(product_overlap(basis_product(t.circuit, t.final), run.sites));
    } else if (loc_f->parsed()) {
      auto f = parse_decay(decay, rmax);
      auto F = build_f_function(f);
      result = to_json(F, check_f_axioms(F, f));
    } else if (verify_suite->parsed()) {
      auto rep = run_acceptance(seed);
      Json crit = Json::array();
      for (const auto& c : rep.criteria)
        crit.push_back(Json{{"id", c.id}, {"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
      result = Json{{"seed", seed}, {"passed", rep.passed()}, {"criteria", crit}};
      if (!rep.passed()) code = static_cast<int>(ErrorKind::classification);
    }

    std::string text = result.dump(2) + "\n";
    s.output_digest = sha256_hex(text);
    if (!out_path.empty()) {
      s.out_path = out_path;
      write_text_file(out_path, text);
    } else {
      out << text;
    }
  } catch (const Error& e) {
    code = e.exit_code();
    err << Json{{"error", {{"kind", cli::error_name(e.kind())}, {"message", e.what()}}}}.dump() << "\n";
  } catch (const std::exception& e) {
    code = static_cast<int>(ErrorKind::validation);
    err << Json{{"error", {{"kind", "validation"}, {"message", e.what()}}}}.dump() << "\n";
  }

  Json manifest{{"command", s.command},
                {"inputs", s.inputs},
                {"version", kToolVersion},
                {"tolerances", s.tolerances},
                {"threads", tool_threads()},
                {"exit_code", code}};
  if (!s.output_digest.empty()) manifest["output_sha256"] = s.output_digest;
  if (!s.out_path.empty()) manifest["output"] = s.out_path;
  manifest["wall_time_s"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  err << Json{{"manifest", manifest}}.dump() << "\n";
  return code;
}

}  // namespace sptkit
