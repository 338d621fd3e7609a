// linklab command-line tool: build, verify, lk, word, mesh.
//
// Exit codes: 0 pass, 1 fail, 2 usage error.

#include "linklab/linklab.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace {

using linklab::ErrorKind;
using linklab::Json;

constexpr int kPass = 0;
constexpr int kFail = 1;
constexpr int kUsage = 2;

struct FamilyArgs {
  std::string family = "L";
  int i = 1;
  int j = 0;
  int n = 3;
  double eps = 0.0;
  std::uint64_t seed = 1;
  std::int64_t samples = 0;
  std::string out;
};

void add_family_flags(CLI::App* cmd, FamilyArgs& a) {
  cmd->add_option("--family", a.family, "L (paper family) or U (unlink control)")->check(CLI::IsMember({"L", "U"}));
  cmd->add_option("--i", a.i, "index i");
  cmd->add_option("--j", a.j, "index j (j > 0: experimental family)");
  cmd->add_option("--n", a.n, "ambient dimension");
  cmd->add_option("--eps", a.eps, "near-round coefficients (1+eps, 1+2eps, 1, 1+3eps)");
}

linklab::SuiteConfig config_from(const FamilyArgs& a) {
  linklab::SuiteConfig c;
  c.family = a.family;
  c.i = a.i;
  c.j = a.j;
  c.n = a.n;
  c.eps = a.eps;
  c.seed = a.seed;
  c.samples = a.samples;
  return c;
}

void emit(const std::string& text, const std::string& out) {
  if (out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out, std::ios::binary);
  if (!file) throw linklab::Error(ErrorKind::domain, "cannot write " + out);
  file << text;
}

int error_exit(const linklab::Error& e) {
  std::cerr << "linklab: " << e.what() << "\n";
  switch (e.kind()) {
    case ErrorKind::domain:
    case ErrorKind::unsupported:
    case ErrorKind::parse:
      return kUsage;
    default:
      return kFail;
  }
}

std::optional<linklab::EmbeddedSphere> named_sphere(const linklab::Link& link, const std::string& name) {
  if (name == "K1") return link.K1();
  if (name == "K2") return link.K2();
  if (name == "K3") return link.K3();
  const auto loops = linklab::generator_loops(link.n);
  if (name == "alpha") return loops.alpha;
  if (name == "beta") return loops.beta;
  return std::nullopt;
}

int run_build(const FamilyArgs& a) {
  const linklab::Link link = linklab::build_link(config_from(a));
  emit(linklab::to_json(link).dump(2) + "\n", a.out);
  return kPass;
}

int run_verify(const FamilyArgs& a, const std::string& config_path, const std::string& checks, bool parallel,
               bool timings, CLI::App* cmd) {
  linklab::SuiteConfig c;
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw linklab::Error(ErrorKind::parse, "cannot read config " + config_path);
    c = linklab::parse_config(in);
  }
  // Command-line flags override the config file.
  auto given = [&](const char* flag) { return cmd->count(flag) > 0; };
  if (given("--family")) c.family = a.family;
  if (given("--i")) c.i = a.i;
  if (given("--j")) c.j = a.j;
  if (given("--n")) c.n = a.n;
  if (given("--eps")) c.eps = a.eps;
  if (given("--seed")) c.seed = a.seed;
  if (given("--samples")) c.samples = a.samples;
  if (given("--checks")) linklab::apply_config_key(c, "checks", checks);
  if (parallel) c.parallel = true;
  if (timings) c.timings = true;
  const linklab::Report report = linklab::run_suite(c);
  emit(report.dump(), a.out);
  std::cerr << "verdict: " << (report.pass ? "pass" : "fail") << "\n";
  return report.pass ? kPass : kFail;
}

int run_lk(const FamilyArgs& a, const std::string& pair, int starts) {
  const linklab::Link link = linklab::build_link(config_from(a));
  const auto colon = pair.find(':');
  if (colon == std::string::npos) throw linklab::Error(ErrorKind::parse, "--pair must look like A:B, e.g. K3cap:K2");
  const std::string first = pair.substr(0, colon);
  const std::string second = pair.substr(colon + 1);
  const auto b = named_sphere(link, second);
  if (!b || second == "alpha" || second == "beta") {
    throw linklab::Error(ErrorKind::parse, "second sphere must be K1, K2 or K3");
  }
  linklab::SuiteConfig cfg = config_from(a);
  const std::int64_t samples = cfg.effective_samples();
  const linklab::Vec v = linklab::Vec::Ones(link.n).normalized();
  linklab::PreimageOptions popt;
  popt.starts = starts;
  popt.seed = a.seed;

  linklab::LinkingEstimate mc;
  long degree = 0;
  if (first == "K3cap") {
    const auto cap = linklab::cap_upper_half(link);
    mc = linklab::linking_number_mc(cap.capped, *b, samples, a.seed);
    degree = linklab::preimage_degree(cap.capped, *b, v, popt).degree;
  } else if (const auto s = named_sphere(link, first)) {
    mc = linklab::linking_number_mc(*s, *b, samples, a.seed);
    degree = linklab::preimage_degree(*s, *b, v, popt).degree;
  } else {
    throw linklab::Error(ErrorKind::parse, "unknown first sphere '" + first + "'");
  }
  Json out;
  out["pair"] = pair;
  out["lk_mc"] = mc.value;
  out["std_error"] = mc.std_error;
  out["lk_rounded"] = mc.rounded;
  out["samples"] = mc.samples;
  out["seed"] = mc.seed;
  out["lk_preimage"] = degree;
  out["agree"] = degree == mc.rounded;
  emit(out.dump(2) + "\n", a.out);
  return degree == mc.rounded ? kPass : kFail;
}

int run_word(const FamilyArgs& a, const std::string& loop_name, double fraction) {
  const linklab::Link link = linklab::build_link(config_from(a));
  const auto loop = named_sphere(link, loop_name);
  if (!loop || loop->sphere_dim() != 1) {
    throw linklab::Error(ErrorKind::parse, "--loop must be a 1-sphere: K3, alpha or beta (i = 1)");
  }
  const linklab::MembraneSystem sys = linklab::membrane_system_for(link, fraction);
  linklab::MembraneOptions mopt;
  mopt.seed = a.seed;
  const auto validity = linklab::validate_membrane_system(sys, link, mopt);
  Json out;
  out["loop"] = loop_name;
  Json checks;
  for (const auto& c : validity.checks) checks[c.name] = {{"value", c.value}, {"passed", c.passed}};
  out["membranes"] = {{"valid", validity.valid}, {"checks", checks}};
  if (!validity.valid) {
    emit(out.dump(2) + "\n", a.out);
    std::cerr << "linklab: membrane system rejected, no word computed\n";
    return kFail;
  }
  const auto result = linklab::crossing_word(linklab::loop_of(*loop), sys);
  const linklab::Word reduced = linklab::reduce_word(result.word);
  const auto cc = linklab::commutator_class_check(reduced);
  out["word"] = result.word.str();
  out["reduced"] = reduced.str();
  out["exponent_sums"] = {reduced.exponent_sum('a'), reduced.exponent_sum('b')};
  out["commutator"] = cc.is_commutator;
  out["symmetry"] = cc.symmetry;
  emit(out.dump(2) + "\n", a.out);
  return kPass;
}

int run_mesh(const FamilyArgs& a, int resolution) {
  const linklab::Link link = linklab::build_link(config_from(a));
  const std::string dir = a.out.empty() ? "meshes" : a.out;
  for (const auto& path : linklab::export_meshes(link, resolution, dir)) std::cout << path << "\n";
  return kPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Convex Brunnian link families: construction and numerical verification"};
  app.set_version_flag("--version", std::string(LINKLAB_VERSION));
  app.require_subcommand(1);

  FamilyArgs args;
  std::string config_path;
  std::string checks;
  bool parallel = false;
  bool timings = false;
  std::string pair = "K3cap:K2";
  int starts = 256;
  std::string loop = "K3";
  double fraction = 0.2;
  int resolution = 64;

  auto* build = app.add_subcommand("build", "print the link as JSON");
  add_family_flags(build, args);
  build->add_option("--out", args.out, "output file (default stdout)");

  auto* verify = app.add_subcommand("verify", "run the verification suite and print the report");
  add_family_flags(verify, args);
  verify->add_option("--config", config_path, "key = value config file");
  verify->add_option("--seed", args.seed, "seed");
  verify->add_option("--samples", args.samples, "Monte Carlo samples (0: automatic)");
  verify->add_option("--checks", checks, "comma-separated checks: disjoint,split,cap,transversal,lift,lk,word");
  verify->add_option("--out", args.out, "report file (default stdout)");
  verify->add_flag("--parallel", parallel, "run checks concurrently");
  verify->add_flag("--timings", timings, "include wall-clock seconds (breaks byte-identical reports)");

  auto* lk = app.add_subcommand("lk", "linking number of one pair by both methods");
  add_family_flags(lk, args);
  lk->add_option("--pair", pair, "A:B with A in {K1,K2,K3,K3cap,alpha,beta}, B in {K1,K2,K3}");
  lk->add_option("--seed", args.seed, "seed");
  lk->add_option("--samples", args.samples, "Monte Carlo samples (0: automatic)");
  lk->add_option("--starts", starts, "Newton starts per patch for the preimage count");
  lk->add_option("--out", args.out, "output file (default stdout)");

  auto* word = app.add_subcommand("word", "crossing word of a loop (i = 1)");
  add_family_flags(word, args);
  word->add_option("--loop", loop, "K3, alpha or beta");
  word->add_option("--height-fraction", fraction, "bump plateau between K1 and K2, in (0, 1)");
  word->add_option("--seed", args.seed, "seed for the validity checks");
  word->add_option("--out", args.out, "output file (default stdout)");

  auto* mesh = app.add_subcommand("mesh", "export OBJ meshes (n = 3)");
  add_family_flags(mesh, args);
  mesh->add_option("--resolution", resolution, "samples per circle");
  mesh->add_option("--out", args.out, "output directory (default ./meshes)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*build) return run_build(args);
    if (*verify) return run_verify(args, config_path, checks, parallel, timings, verify);
    if (*lk) return run_lk(args, pair, starts);
    if (*word) return run_word(args, loop, fraction);
    if (*mesh) return run_mesh(args, resolution);
  } catch (const linklab::Error& e) {
    return error_exit(e);
  } catch (const std::exception& e) {
    std::cerr << "linklab: " << e.what() << "\n";
    return kFail;
  }
  return kUsage;
}
