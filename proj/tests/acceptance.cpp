// Acceptance suite: one PASS/FAIL line per criterion, details above it.
// Exits nonzero if any criterion fails.

#include "linklab/linklab.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <map>
#include <string>
#include <utility>
#include <vector>

using namespace linklab;

namespace {

struct Family {
  int i;
  int n;
};

std::vector<Family> families() {
  std::vector<Family> out;
  for (int n = 3; n <= 6; ++n) {
    for (int i = 1; i <= n - 2; ++i) out.push_back({i, n});
  }
  return out;
}

const Json& check(const Report& r, const std::string& name) {
  for (const auto& c : r.json["checks"]) {
    if (c["check"] == name) return c;
  }
  static const Json missing = {{"status", "missing"}};
  return missing;
}

bool passed(const Report& r, const std::string& name) { return check(r, name)["status"] == "pass"; }

struct Criterion {
  bool ok = true;
  std::vector<std::string> notes;

  void expect(bool condition, const std::string& what) {
    if (!condition) {
      ok = false;
      notes.push_back(what);
    }
  }
};

std::string tag(int i, int n, double eps = 0.0) {
  char buf[64];
  if (eps > 0.0) {
    std::snprintf(buf, sizeof buf, "L(%d,%d) eps=%g", i, n, eps);
  } else {
    std::snprintf(buf, sizeof buf, "L(%d,%d)", i, n);
  }
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Criterion 1 for one report: MC within 0.1 of +-1 with small error, and the
// preimage count agreeing exactly.
void hopf(const Report& r, const std::string& who, Criterion& c) {
  const Json& lk = check(r, "lk");
  if (lk["status"] != "pass") {
    c.expect(false, who + ": lk check " + lk.dump());
    return;
  }
  const double value = lk["lk_mc"].get<double>();
  const double se = lk["std_error"].get<double>();
  const long pre = lk["lk_preimage"].get<long>();
  std::printf("  %s seed %llu: lk_mc %+.4f se %.4f preimage %+ld\n", who.c_str(),
              static_cast<unsigned long long>(r.json["config"]["seed"].get<std::uint64_t>()), value, se, pre);
  c.expect(std::abs(std::abs(value) - 1.0) < 0.1, who + ": |lk_mc| not within 0.1 of 1");
  c.expect(se < 0.05, who + ": std_error >= 0.05");
  c.expect(std::abs(pre) == 1 && std::lround(value) == pre, who + ": preimage count disagrees");
}

void intersections(const Report& r, const std::string& who, Criterion& c) {
  const Json& t = check(r, "transversal");
  for (const char* key : {"K3cap_B2", "K2_B3half"}) {
    if (!t.contains(key)) {
      c.expect(false, who + ": transversal check " + t.dump());
      return;
    }
    const Json& rec = t[key];
    const bool one = rec["points"].size() == 1;
    c.expect(one && rec["ok"].get<bool>(), who + ": " + key + " " + rec.dump());
    if (one) {
      std::printf("  %s %s: margin %.4f residual %.2e\n", who.c_str(), key,
                  rec["points"][0]["margin"].get<double>(), rec["points"][0]["residual"].get<double>());
    }
  }
}

void split(const Report& r, const std::string& who, double threshold, Criterion& c) {
  const Json& s = check(r, "split");
  c.expect(s["status"] == "pass", who + ": split check " + s.dump());
  if (!s.contains("certificates")) return;
  for (const auto& cert : s["certificates"]) {
    c.expect(cert["distance"].get<double>() > threshold,
             who + ": " + cert["ball"].get<std::string>() + "-" + cert["sphere"].get<std::string>() +
                 " distance below threshold");
  }
}

void lift(const Report& r, const std::string& who, Criterion& c) {
  const Json& l = check(r, "lift");
  if (!l.contains("parity")) {
    c.expect(false, who + ": lift check " + l.dump());
    return;
  }
  const double disp = l["K2_max_displacement"].get<double>();
  const double sigma = l["K3cap_in_sigma_residual"].get<double>();
  const int g3 = l["parity"]["G3"]["parity"].get<int>();
  const int g3cap = l["parity"]["G3cap"]["parity"].get<int>();
  std::printf("  %s lift: displacement %.2e sigma residual %.2e parity G3 %d p(K3') %d\n", who.c_str(), disp, sigma, g3,
              g3cap);
  c.expect(disp < 1e-10, who + ": K2 moved by the lift");
  c.expect(sigma < 1e-8, who + ": p(K3') leaves Sigma");
  c.expect(g3 == 1 && g3cap == 1, who + ": separation parity is not 1");
}

double b1_k2_distance(const Report& r) {
  for (const auto& cert : check(r, "split")["certificates"]) {
    if (cert["ball"] == "B1") return cert["distance"].get<double>();
  }
  return -1.0;
}

void report_line(int k, const std::string& title, const Criterion& c, bool& all) {
  for (const auto& note : c.notes) std::printf("  ! %s\n", note.c_str());
  std::printf("%s criterion %d: %s\n", c.ok ? "PASS" : "FAIL", k, title.c_str());
  std::fflush(stdout);
  all = all && c.ok;
}

}  // namespace

int main() {
  bool all = true;
  const std::vector<Family> fams = families();
  const std::uint64_t seeds[] = {1, 2, 3};

  // Full suite once per family (seed 1); lk alone for the other seeds.
  std::map<std::pair<int, int>, Report> full;
  std::map<std::pair<int, int>, std::vector<Report>> lk_runs;
  for (const auto& f : fams) {
    const auto start = std::chrono::steady_clock::now();
    SuiteConfig c;
    c.i = f.i;
    c.n = f.n;
    c.seed = seeds[0];
    full[{f.i, f.n}] = run_suite(c);
    for (std::size_t s = 1; s < 3; ++s) {
      SuiteConfig l = c;
      l.seed = seeds[s];
      l.checks = {"lk"};
      lk_runs[{f.i, f.n}].push_back(run_suite(l));
    }
    std::printf("# %s: %.1f s\n", tag(f.i, f.n).c_str(), elapsed(start));
    std::fflush(stdout);
  }

  Criterion c1;
  for (const auto& f : fams) {
    hopf(full[{f.i, f.n}], tag(f.i, f.n), c1);
    for (const auto& r : lk_runs[{f.i, f.n}]) hopf(r, tag(f.i, f.n), c1);
  }
  report_line(1, "|lk(K3', K2)| = 1 by Monte Carlo and preimage count, 10 families x 3 seeds", c1, all);

  Criterion c2;
  for (const auto& f : fams) intersections(full[{f.i, f.n}], tag(f.i, f.n), c2);
  report_line(2, "K3' meets B2 at the origin and K2 meets B3' at the top, transversally", c2, all);

  Criterion c3;
  for (const auto& f : fams) split(full[{f.i, f.n}], tag(f.i, f.n), 0.3, c3);
  const double d13 = b1_k2_distance(full[{1, 3}]);
  std::printf("  L(1,3) B1-K2 distance %.12f\n", d13);
  c3.expect(std::abs(d13 - 1.0) < 1e-6, "L(1,3): B1-K2 distance is not 1");
  report_line(3, "split certificates for every pair, B1-K2 = 1 for L(1,3), distances > 0.3", c3, all);

  Criterion c4;
  for (const auto& f : fams) lift(full[{f.i, f.n}], tag(f.i, f.n), c4);
  report_line(4, "lift fixes K2, p(K3') lies in Sigma, separation parity 1 for G3 and p(K3')", c4, all);

  Criterion c5;
  for (int n = 3; n <= 5; ++n) {
    const Json& w = check(full[{1, n}], "word");
    const std::string who = tag(1, n);
    c5.expect(w["status"] == "pass", who + ": word check " + w.dump());
    if (!w.contains("words") || !w["words"].contains("K3")) continue;
    std::printf("  %s K3 word %s, alpha %s, beta %s, stable %s\n", who.c_str(),
                w["words"]["K3"]["reduced"].get<std::string>().c_str(),
                w["words"]["alpha"]["reduced"].get<std::string>().c_str(),
                w["words"]["beta"]["reduced"].get<std::string>().c_str(), w["stable"].get<bool>() ? "yes" : "no");
    c5.expect(w["membranes"].size() == 3, who + ": expected 3 bump heights");
    c5.expect(w["words"]["K3"]["reduced"].get<std::string>().size() == 4, who + ": K3 word is not of length 4");
    c5.expect(w["words"]["K3"]["commutator"].get<bool>(), who + ": K3 word is not a commutator");
    c5.expect(w["stable"].get<bool>(), who + ": K3 word changes with the bump height");
    for (const char* loop : {"K3", "alpha", "beta"}) {
      c5.expect(w["words"][loop]["sums_match"].get<bool>(), who + ": exponent sums of " + loop + " differ from lk");
    }
    c5.expect(w["words"]["alpha"]["single_letter"].get<bool>() && w["words"]["beta"]["single_letter"].get<bool>(),
              who + ": generator loops are not single letters");
  }
  report_line(5, "K3 spells a commutator for n = 3, 4, 5, stable over 3 heights; alpha, beta single letters", c5,
              all);

  Criterion c6;
  const double eps = 0.01;
  for (const auto& f : fams) {
    const auto start = std::chrono::steady_clock::now();
    const std::string who = tag(f.i, f.n, eps);
    SuiteConfig c;
    c.i = f.i;
    c.n = f.n;
    c.eps = eps;
    c.checks = {"disjoint", "split", "cap", "transversal", "lift", "lk"};
    for (std::uint64_t seed : seeds) {
      c.seed = seed;
      if (seed != seeds[0]) c.checks = {"lk"};
      const Report r = run_suite(c);
      hopf(r, who, c6);
      if (seed != seeds[0]) continue;
      intersections(r, who, c6);
      split(r, who, 0.0, c6);
      lift(r, who, c6);
      const Coefficients k = near_round_coefficients(eps);
      const double d = b1_k2_distance(r);
      c6.expect(std::abs(d - (k.c2 - k.c1)) < 1e-6, who + ": B1-K2 distance is not c2 - c1");
    }
    std::printf("# %s: %.1f s\n", who.c_str(), elapsed(start));
  }
  report_line(6, "criteria 1-4 hold for near-round coefficients, eps = 0.01, doubled samples", c6, all);

  Criterion c7;
  for (const auto& f : std::vector<Family>{{1, 3}, {1, 4}, {2, 5}}) {
    SuiteConfig c;
    c.family = "U";
    c.i = f.i;
    c.n = f.n;
    c.samples = 200000;
    const Report r = run_suite(c);
    const std::string who = "unlink(" + std::to_string(f.i) + "," + std::to_string(f.n) + ")";
    const Json& lk = check(r, "lk");
    if (lk.contains("lk_mc")) {
      std::printf("  %s: lk_mc %+.4f preimage %ld\n", who.c_str(), lk["lk_mc"].get<double>(),
                  lk["lk_preimage"].get<long>());
      c7.expect(std::abs(lk["lk_mc"].get<double>()) < 0.1 && lk["lk_preimage"].get<long>() == 0,
                who + ": linking number is not 0");
    } else {
      c7.expect(false, who + ": lk check " + lk.dump());
    }
    c7.expect(passed(r, "split"), who + ": split certificates withheld");
    if (f.i == 1) {
      const Json& w = check(r, "word");
      const bool empty = w.contains("words") && w["words"]["K3"]["reduced"] == "";
      c7.expect(empty, who + ": K3 word is not trivial");
    }
    c7.expect(!r.pass, who + ": suite verdict should be fail");
  }
  report_line(7, "unlink control: lk 0, trivial word, split certificates, failing verdict", c7, all);

  Criterion c8;
  for (int n = 4; n <= 6; ++n) {
    for (int j = 1; j <= n - 3; ++j) {
      for (int i = 1; i <= n - 2 - j; ++i) {
        SuiteConfig c;
        c.i = i;
        c.j = j;
        c.n = n;
        const Report r = run_suite(c);
        const std::string who = "L(" + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(n) + ")";
        c8.expect(passed(r, "dimensions"), who + ": dimensions");
        c8.expect(passed(r, "split"), who + ": split certificates");
        c8.expect(passed(r, "disjoint"), who + ": components not disjoint");
        std::printf("  %s: %s\n", who.c_str(), r.pass ? "dimensions and split certificates pass" : "fail");
      }
    }
  }
  report_line(8, "j >= 1, n <= 6: split certificates and component dimensions (experimental)", c8, all);

  Criterion c9;
  {
    SuiteConfig c;
    const std::string first = full[{1, 3}].dump();
    const std::string second = run_suite(c).dump();
    std::printf("  report size %zu bytes\n", first.size());
    c9.expect(first == second, "L(1,3): reports differ between runs");
  }
  report_line(9, "two full-suite runs with one config give byte-identical reports", c9, all);

  return all ? 0 : 1;
}
