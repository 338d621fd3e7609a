#pragma once

// Verification suite: runs the checks for one family member and assembles a
// versioned JSON report with a fixed field order.

#include "linklab/catalog.hpp"
#include "linklab/crossing.hpp"
#include "linklab/distance.hpp"
#include "linklab/intersection.hpp"
#include "linklab/json_io.hpp"
#include "linklab/linking.hpp"
#include "linklab/words.hpp"

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#ifndef LINKLAB_VERSION
#define LINKLAB_VERSION "unknown"
#endif

namespace linklab {

inline constexpr int kReportSchemaVersion = 1;

inline const std::vector<std::string>& suite_checks() {
  static const std::vector<std::string> names = {"disjoint", "split", "cap", "transversal", "lift", "lk", "word"};
  return names;
}

struct SuiteConfig {
  std::string family = "L";  // "L" or "U" (unlink control)
  int i = 1;
  int j = 0;
  int n = 3;
  double eps = 0.0;  // > 0 selects the near-round coefficients
  Coefficients coeffs;
  std::uint64_t seed = 1;
  std::int64_t samples = 0;  // 0: 2e6 for n <= 4, else 4e6; doubled when eps > 0
  int preimage_starts = 256;
  int distance_budget = 64;
  int intersection_starts = 256;
  double disjoint_threshold = 1e-6;
  double margin_threshold = 0.1;
  double residual_tolerance = 1e-8;
  double lk_tolerance = 0.1;
  double std_error_max = 0.05;
  std::vector<double> bump_fractions = {0.1, 0.2, 0.5};
  std::vector<std::string> checks;  // empty: all
  bool parallel = false;
  bool timings = false;

  bool selected(const std::string& name) const {
    return checks.empty() || std::find(checks.begin(), checks.end(), name) != checks.end();
  }

  Coefficients effective_coeffs() const { return eps > 0.0 ? near_round_coefficients(eps) : coeffs; }

  std::int64_t effective_samples() const {
    if (samples > 0) return samples;
    const std::int64_t base = n <= 4 ? 2'000'000 : 4'000'000;
    return eps > 0.0 ? 2 * base : base;
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <class T>
T parse_number(const std::string& key, const std::string& value) {
  std::istringstream in(value);
  T out{};
  in >> out;
  if (in.fail() || !in.eof()) throw Error(ErrorKind::parse, "config: bad value for '" + key + "': " + value);
  return out;
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw Error(ErrorKind::parse, "config: bad boolean for '" + key + "': " + value);
}

}  // namespace detail

/// Applies one dotted key. Unknown keys are rejected.
inline void apply_config_key(SuiteConfig& c, const std::string& key, const std::string& value) {
  using detail::parse_number;
  if (key == "family.kind") {
    if (value != "L" && value != "U") throw Error(ErrorKind::parse, "config: family.kind must be L or U");
    c.family = value;
  } else if (key == "family.i") {
    c.i = parse_number<int>(key, value);
  } else if (key == "family.j") {
    c.j = parse_number<int>(key, value);
  } else if (key == "family.n") {
    c.n = parse_number<int>(key, value);
  } else if (key == "family.eps") {
    c.eps = parse_number<double>(key, value);
  } else if (key == "coeffs.c1") {
    c.coeffs.c1 = parse_number<double>(key, value);
  } else if (key == "coeffs.c2") {
    c.coeffs.c2 = parse_number<double>(key, value);
  } else if (key == "coeffs.c3") {
    c.coeffs.c3 = parse_number<double>(key, value);
  } else if (key == "coeffs.c4") {
    c.coeffs.c4 = parse_number<double>(key, value);
  } else if (key == "seed") {
    c.seed = parse_number<std::uint64_t>(key, value);
  } else if (key == "mc.samples") {
    c.samples = parse_number<std::int64_t>(key, value);
  } else if (key == "preimage.starts") {
    c.preimage_starts = parse_number<int>(key, value);
  } else if (key == "distance.budget") {
    c.distance_budget = parse_number<int>(key, value);
  } else if (key == "intersection.starts") {
    c.intersection_starts = parse_number<int>(key, value);
  } else if (key == "tolerance.disjoint") {
    c.disjoint_threshold = parse_number<double>(key, value);
  } else if (key == "tolerance.margin") {
    c.margin_threshold = parse_number<double>(key, value);
  } else if (key == "tolerance.residual") {
    c.residual_tolerance = parse_number<double>(key, value);
  } else if (key == "tolerance.lk") {
    c.lk_tolerance = parse_number<double>(key, value);
  } else if (key == "tolerance.std_error") {
    c.std_error_max = parse_number<double>(key, value);
  } else if (key == "word.bump_fractions") {
    c.bump_fractions.clear();
    for (const auto& item : detail::split_list(value)) c.bump_fractions.push_back(parse_number<double>(key, item));
  } else if (key == "checks") {
    c.checks = detail::split_list(value);
    for (const auto& name : c.checks) {
      const auto& known = suite_checks();
      if (std::find(known.begin(), known.end(), name) == known.end()) {
        throw Error(ErrorKind::parse, "config: unknown check '" + name + "'");
      }
    }
  } else if (key == "run.parallel") {
    c.parallel = detail::parse_bool(key, value);
  } else if (key == "report.timings") {
    c.timings = detail::parse_bool(key, value);
  } else {
    throw Error(ErrorKind::parse, "config: unknown key '" + key + "'");
  }
}

/// Flat `key = value` lines; `#` starts a comment.
inline SuiteConfig parse_config(std::istream& in, SuiteConfig config = {}) {
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorKind::parse, "config: line " + std::to_string(number) + ": expected key = value");
    }
    apply_config_key(config, detail::trim(line.substr(0, eq)), detail::trim(line.substr(eq + 1)));
  }
  return config;
}

inline SuiteConfig parse_config(const std::string& text, SuiteConfig config = {}) {
  std::istringstream in(text);
  return parse_config(in, std::move(config));
}

inline Json to_json(const SuiteConfig& c) {
  Json out;
  out["family"] = c.family;
  out["i"] = c.i;
  out["j"] = c.j;
  out["n"] = c.n;
  out["eps"] = c.eps;
  out["coeffs"] = to_json(c.effective_coeffs());
  out["seed"] = c.seed;
  out["samples"] = c.effective_samples();
  out["preimage_starts"] = c.preimage_starts;
  out["distance_budget"] = c.distance_budget;
  out["intersection_starts"] = c.intersection_starts;
  out["bump_fractions"] = c.bump_fractions;
  out["checks"] = c.checks.empty() ? suite_checks() : c.checks;
  return out;
}

/// Builds the link a config describes.
inline Link build_link(const SuiteConfig& c) {
  require(c.eps >= 0.0, ErrorKind::domain, "config: eps must be non-negative");
  if (c.family == "U") return unlink_control(c.i, c.n);
  return build_family(c.i, c.j, c.n, c.effective_coeffs());
}

struct Report {
  Json json;
  bool pass = false;

  std::string dump() const { return json.dump(2) + "\n"; }
};

namespace detail {

inline Json record(const std::string& check, const std::string& module, const std::string& operation) {
  Json r;
  r["check"] = check;
  r["module"] = module;
  r["operation"] = operation;
  r["status"] = "pass";
  return r;
}

inline void set_status(Json& r, bool pass) { r["status"] = pass ? "pass" : "fail"; }

inline Json skipped(const std::string& check, const std::string& module, const std::string& operation,
                    const std::string& reason) {
  Json r = record(check, module, operation);
  r["status"] = "skip";
  r["reason"] = reason;
  return r;
}

inline Json witness(const DistanceResult& d) { return Json::array({to_json(d.witness_a), to_json(d.witness_b)}); }

inline const char* component_name(int m) {
  static const char* names[] = {"K1", "K2", "K3"};
  return names[m];
}

inline Vec preimage_direction(int n) { return Vec::Ones(n).normalized(); }

inline Json check_dimensions(const Link& link) {
  Json r = record("dimensions", "catalog", "build_family");
  const int expected[3] = {link.n - link.j - 2, link.n - link.i - 1, link.i + link.j};
  Json dims = Json::array();
  bool ok = true;
  for (int m = 0; m < 3; ++m) {
    const int got = link.components[static_cast<std::size_t>(m)].sphere_dim();
    dims.push_back({{"component", component_name(m)}, {"dim", got}, {"expected", expected[m]}});
    ok = ok && got == expected[m];
  }
  r["components"] = std::move(dims);
  set_status(r, ok);
  return r;
}

inline Json check_disjoint(const Link& link, const SuiteConfig& c) {
  Json r = record("disjoint", "core-geometry", "min_distance");
  Json pairs = Json::array();
  bool ok = true;
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      const auto d = min_distance(link.components[static_cast<std::size_t>(a)], link.components[static_cast<std::size_t>(b)],
                                  c.distance_budget, c.seed);
      pairs.push_back({{"pair", std::string(component_name(a)) + "-" + component_name(b)},
                       {"distance", d.distance},
                       {"witness", witness(d)},
                       {"converged", d.converged}});
      ok = ok && d.distance > c.disjoint_threshold;
    }
  }
  r["pairs"] = std::move(pairs);
  set_status(r, ok);
  return r;
}

inline Json check_split(const Link& link, const SuiteConfig& c) {
  Json r = record("split", "invariants", "split_certificate");
  Json certs = Json::array();
  bool ok = true;
  const int pairs[3][2] = {{1, 2}, {2, 3}, {3, 1}};
  for (const auto& p : pairs) {
    const auto cert = split_certificate(link, p[0], p[1], c.distance_budget, c.seed);
    const bool granted = cert.distance.distance > c.disjoint_threshold;
    certs.push_back({{"ball", "B" + std::to_string(cert.ball)},
                     {"sphere", "K" + std::to_string(cert.sphere)},
                     {"distance", cert.distance.distance},
                     {"witness", witness(cert.distance)},
                     {"granted", granted}});
    ok = ok && granted;
  }
  r["certificates"] = std::move(certs);
  set_status(r, ok);
  return r;
}

inline Json check_cap(const Link& link, const SuiteConfig& c) {
  Json r = record("cap", "catalog", "cap_upper_half");
  const auto cap = cap_upper_half(link);
  const auto patches = patches_of(cap.capped);
  const int k = cap.capped.dim();
  const double gap = cap_rim_gap(cap.capped, 1024, c.seed);
  const Vec top = patches[0].eval(unit_vector(k + 1, k));
  const Vec expected_top = link.K3().center + link.K3().radii(k) * link.K3().frame.col(k);
  const Vec cap_center = patches[1].eval(Vec::Zero(k));
  r["rim_gap"] = gap;
  r["top"] = to_json(top);
  r["cap_center"] = to_json(cap_center);
  set_status(r, gap < 1e-12 && (top - expected_top).norm() < 1e-12 && (cap_center - link.K3().center).norm() < 1e-12);
  return r;
}

inline Json intersection_record(const IntersectionReport& rep, const Vec& expected, const SuiteConfig& c) {
  Json out;
  Json points = Json::array();
  for (std::size_t k = 0; k < rep.size(); ++k) {
    points.push_back({{"point", to_json(rep.points[k])}, {"margin", rep.margins[k]}, {"residual", rep.residuals[k]}});
  }
  out["points"] = std::move(points);
  out["expected"] = to_json(expected);
  bool ok = rep.size() == 1;
  if (ok) {
    ok = (rep.points[0] - expected).norm() < c.residual_tolerance && rep.margins[0] > c.margin_threshold &&
         rep.residuals[0] < c.residual_tolerance;
  }
  out["ok"] = ok;
  return out;
}

inline Json check_transversal(const Link& link, const SuiteConfig& c) {
  Json r = record("transversal", "invariants", "transversal_intersections");
  const auto cap = cap_upper_half(link);
  const auto balls = bounding_balls(link);
  IntersectionOptions opt;
  opt.starts = c.intersection_starts;
  opt.seed = c.seed;
  opt.tolerance = c.margin_threshold;
  const Json first =
      intersection_record(transversal_intersections(cap.capped, balls[1], opt), Vec::Zero(link.n), c);
  const Vec top = link.coeffs.c2 * unit_vector(link.n, link.n - 1);
  const Json second = intersection_record(transversal_intersections(link.K2(), cap.region, opt), top, c);
  r["K3cap_B2"] = first;
  r["K2_B3half"] = second;
  set_status(r, first["ok"].get<bool>() && second["ok"].get<bool>());
  return r;
}

inline Json check_lift(const Link& link, const SuiteConfig& c) {
  Json r = record("lift", "core-geometry", "stereographic_lift");
  const double radius = link.coeffs.c2;
  const auto gs = great_spheres(link.i, link.n, radius);
  Engine rng = make_engine(c.seed, 0, 0x11f7);
  double displacement = 0.0;
  double on_g2 = 0.0;
  for (int s = 0; s < 10000; ++s) {
    const Vec x = embed(link.K2(), uniform_on_sphere(rng, link.K2().sphere_dim() + 1));
    const Vec p = stereographic_lift(x, radius);
    Vec x0 = Vec::Zero(link.n + 1);
    x0.head(link.n) = x;
    displacement = std::max(displacement, (p - x0).norm());
    on_g2 = std::max(on_g2, implicit_residual(gs.g2, p));
  }
  const auto cap = cap_upper_half(link);
  const auto lifted_cap = lifted(patches_of(cap.capped), radius);
  double in_sigma = 0.0;
  for (std::size_t ip = 0; ip < lifted_cap.size(); ++ip) {
    Engine prng = make_engine(c.seed, ip, 0x5197);
    for (int s = 0; s < 5000; ++s) {
      in_sigma = std::max(in_sigma, implicit_residual(gs.sigma, lifted_cap[ip].eval(lifted_cap[ip].sample(prng))));
    }
  }
  r["lift_radius"] = radius;
  r["K2_max_displacement"] = displacement;
  r["K2_on_G2_residual"] = on_g2;
  r["K3cap_in_sigma_residual"] = in_sigma;

  SeparationOptions sopt;
  sopt.seed = c.seed;
  const auto g3 = separation_parity(gs.g3, gs.q_plus, gs.q_minus, gs.sigma, sopt);
  const auto g3cap = separation_parity(lifted_cap, gs.q_plus, gs.q_minus, gs.sigma, sopt);
  Json parity;
  parity["module"] = "invariants";
  parity["operation"] = "separation_parity";
  parity["q_plus"] = to_json(gs.q_plus);
  parity["q_minus"] = to_json(gs.q_minus);
  parity["G3"] = {{"parity", g3.parity}, {"crossings", g3.crossings}};
  parity["G3cap"] = {{"parity", g3cap.parity}, {"crossings", g3cap.crossings}};
  r["parity"] = std::move(parity);
  set_status(r, displacement < 1e-10 && on_g2 < 1e-10 && in_sigma < c.residual_tolerance && g3.parity == 1 &&
                    g3cap.parity == 1);
  return r;
}

inline Json check_lk(const Link& link, const SuiteConfig& c) {
  Json r = record("lk", "invariants", "linking_number_mc");
  const auto cap = cap_upper_half(link);
  const auto mc = linking_number_mc(cap.capped, link.K2(), c.effective_samples(), c.seed);
  PreimageOptions popt;
  popt.starts = c.preimage_starts;
  popt.seed = c.seed;
  popt.distance_budget = c.distance_budget;
  const auto pre = preimage_degree(cap.capped, link.K2(), preimage_direction(link.n), popt);
  r["pair"] = "K3cap-K2";
  r["lk_mc"] = mc.value;
  r["std_error"] = mc.std_error;
  r["lk_rounded"] = mc.rounded;
  r["samples"] = mc.samples;
  r["lk_preimage"] = pre.degree;
  r["preimage_roots"] = pre.roots.size();
  r["preimage_value"] = to_json(pre.value);
  r["preimage_retries"] = pre.retries;
  const bool hopf = std::abs(std::abs(mc.value) - 1.0) < c.lk_tolerance && mc.std_error < c.std_error_max &&
                    std::abs(mc.rounded) == 1 && pre.degree == mc.rounded;
  set_status(r, hopf);
  return r;
}

inline Json check_word(const Link& link, const SuiteConfig& c) {
  Json r = record("word", "homotopy-words", "crossing_word");
  const auto loops = generator_loops(link.n);
  const Vec v = preimage_direction(link.n);
  PreimageOptions popt;
  popt.starts = c.preimage_starts;
  popt.seed = c.seed;
  popt.distance_budget = c.distance_budget;

  struct Named {
    const char* name;
    EmbeddedSphere loop;
  };
  const Named named[] = {{"K3", link.K3()}, {"alpha", loops.alpha}, {"beta", loops.beta}};

  Json membranes = Json::array();
  std::vector<std::string> k3_words;
  bool all_valid = true;
  bool ok = true;
  Json words;
  for (std::size_t h = 0; h < c.bump_fractions.size(); ++h) {
    const MembraneSystem sys = membrane_system_for(link, c.bump_fractions[h]);
    MembraneOptions mopt;
    mopt.seed = c.seed;
    mopt.budget = c.distance_budget;
    const auto validity = validate_membrane_system(sys, link, mopt);
    Json m;
    m["fraction"] = c.bump_fractions[h];
    m["height"] = sys.b.bump ? sys.b.bump->height : 0.0;
    Json checks;
    for (const auto& chk : validity.checks) checks[chk.name] = {{"value", chk.value}, {"passed", chk.passed}};
    m["checks"] = std::move(checks);
    m["valid"] = validity.valid;
    all_valid = all_valid && validity.valid;
    if (validity.valid) {
      const auto w = crossing_word(loop_of(link.K3()), sys);
      m["K3_word"] = w.word.str();
      k3_words.push_back(reduce_word(w.word).str());
    }
    membranes.push_back(std::move(m));
    if (!validity.valid || h != 0) continue;

    // Word details from the first membrane system.
    for (const auto& nl : named) {
      const auto w = crossing_word(loop_of(nl.loop), sys);
      const Word reduced = reduce_word(w.word);
      const long lk1 = preimage_degree(nl.loop, link.K1(), v, popt).degree;
      const long lk2 = preimage_degree(nl.loop, link.K2(), v, popt).degree;
      const bool sums = reduced.exponent_sum('a') == lk1 && reduced.exponent_sum('b') == lk2;
      Json e;
      e["word"] = w.word.str();
      e["reduced"] = reduced.str();
      e["exponent_sums"] = {reduced.exponent_sum('a'), reduced.exponent_sum('b')};
      e["linking_numbers"] = {lk1, lk2};
      e["sums_match"] = sums;
      ok = ok && sums;
      if (std::string(nl.name) == "K3") {
        const auto cc = commutator_class_check(reduced);
        e["commutator"] = cc.is_commutator;
        e["normal_form"] = cc.normal_form.str();
        e["symmetry"] = cc.symmetry;
        ok = ok && cc.is_commutator;
      } else {
        e["single_letter"] = reduced.size() == 1;
        ok = ok && reduced.size() == 1;
      }
      words[nl.name] = std::move(e);
    }
  }
  const bool stable = !k3_words.empty() && std::all_of(k3_words.begin(), k3_words.end(),
                                                       [&](const std::string& s) { return s == k3_words.front(); });
  r["membranes"] = std::move(membranes);
  r["words"] = std::move(words);
  r["stable"] = stable;
  set_status(r, ok && all_valid && stable);
  return r;
}

inline Json guarded(const std::function<Json()>& body, const std::string& check, const std::string& module,
                    const std::string& operation, bool timings) {
  const auto start = std::chrono::steady_clock::now();
  Json r;
  try {
    r = body();
  } catch (const Error& e) {
    r = record(check, module, operation);
    r["status"] = "fail";
    r["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
  } catch (const std::exception& e) {
    r = record(check, module, operation);
    r["status"] = "fail";
    r["error"] = {{"kind", "internal"}, {"message", e.what()}};
  }
  if (timings) {
    r["seconds"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
  return r;
}

}  // namespace detail

/// Runs the selected checks in their fixed order. The report is a pure
/// function of the config unless timings are requested.
inline Report run_suite(const SuiteConfig& c) {
  Report report;
  Json& j = report.json;
  j["schema"] = "linklab.report";
  j["version"] = kReportSchemaVersion;
  j["artifact_version"] = LINKLAB_VERSION;
  j["config"] = to_json(c);
  Json checks = Json::array();

  Link link;
  try {
    link = build_link(c);
  } catch (const Error& e) {
    Json r = detail::record("build", "catalog", "build_family");
    r["status"] = "fail";
    r["error"] = {{"kind", to_string(e.kind())}, {"message", e.what()}};
    checks.push_back(std::move(r));
    j["checks"] = std::move(checks);
    j["verdict"] = "fail";
    report.pass = false;
    return report;
  }
  j["link"] = to_json(link);

  const bool experimental = link.j > 0;
  const std::string exp_reason = "j > 0 family: experimental, split certificates and dimensions only";

  struct Task {
    std::string name, module, operation;
    std::function<Json()> body;
  };
  std::vector<Task> tasks;
  if (experimental) tasks.push_back({"dimensions", "catalog", "build_family", [&] { return detail::check_dimensions(link); }});
  auto add = [&](const std::string& name, const std::string& module, const std::string& op,
                 std::function<Json()> body, bool run, const std::string& reason) {
    if (!c.selected(name)) return;
    if (run) {
      tasks.push_back({name, module, op, std::move(body)});
    } else {
      tasks.push_back({name, module, op, [=] { return detail::skipped(name, module, op, reason); }});
    }
  };
  add("disjoint", "core-geometry", "min_distance", [&] { return detail::check_disjoint(link, c); }, true, "");
  add("split", "invariants", "split_certificate", [&] { return detail::check_split(link, c); }, true, "");
  add("cap", "catalog", "cap_upper_half", [&] { return detail::check_cap(link, c); }, !experimental, exp_reason);
  add("transversal", "invariants", "transversal_intersections", [&] { return detail::check_transversal(link, c); },
      !experimental, exp_reason);
  add("lift", "core-geometry", "stereographic_lift", [&] { return detail::check_lift(link, c); }, !experimental,
      exp_reason);
  add("lk", "invariants", "linking_number_mc", [&] { return detail::check_lk(link, c); }, !experimental, exp_reason);
  add("word", "homotopy-words", "crossing_word", [&] { return detail::check_word(link, c); },
      !experimental && link.i == 1, experimental ? exp_reason : "word check is defined for i = 1 only");

  std::vector<Json> records(tasks.size());
  auto run_task = [&](std::size_t k) {
    records[k] = detail::guarded(tasks[k].body, tasks[k].name, tasks[k].module, tasks[k].operation, c.timings);
  };
  if (c.parallel) {
    std::vector<std::future<void>> futures;
    for (std::size_t k = 0; k < tasks.size(); ++k) futures.push_back(std::async(std::launch::async, run_task, k));
    for (auto& f : futures) f.get();
  } else {
    for (std::size_t k = 0; k < tasks.size(); ++k) run_task(k);
  }

  bool pass = true;
  for (auto& r : records) {
    if (r["status"] == "fail") pass = false;
    checks.push_back(std::move(r));
  }
  j["checks"] = std::move(checks);
  j["verdict"] = pass ? "pass" : "fail";
  report.pass = pass;
  return report;
}

}  // namespace linklab
