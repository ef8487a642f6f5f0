// One line per acceptance criterion; exit status 1 if any fails.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>

#include "json.hpp"
#include "valkit/checks.hpp"
#include "valkit/errors.hpp"
#include "valkit/scenario.hpp"

using namespace valkit;

namespace {

struct Line {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

GroupElem q(const Rational& x) { return GroupElem(x); }
GroupElem q(const std::string& s) { return GroupElem::parse(s); }

nlohmann::json golden(const std::string& name) {
  std::ifstream in(std::string(VALKIT_SOURCE_DIR) + "/tests/golden/" + name);
  return nlohmann::json::parse(in);
}

Line artin_schreier_values() {
  Line l;
  const auto start = std::chrono::steady_clock::now();
  const auto oracle = golden("artin_schreier_oracle.json");
  for (unsigned long p : {2UL, 3UL}) {
    ScenarioConfig c = default_config("artin-schreier");
    c.p = p;
    c.terms = 8;
    const auto sc = build_scenario(c);
    const auto table = sc->stream().table();
    l.require(table.size() == 9, "expected rows n = 0..8");
    const Rational va = c.va;
    for (const auto& row : table) {
      const long n = row.index.n;
      const Rational pn = pow(Rational(static_cast<long>(p)), n);
      l.require(row.alpha == q(-va / pn), "alpha_" + std::to_string(n) + " p=" + std::to_string(p));
      l.require(row.beta == q(-va * static_cast<long>(p) / pn), "beta_" + std::to_string(n) + " p=" + std::to_string(p));
      const auto& ref = oracle[p == 2 ? "p2" : "p3"][static_cast<std::size_t>(n)];
      l.require(row.nuQ == q(ref["nu_Q"].get<std::string>()), "nu(Q_n) differs from the oracle file");
    }
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  l.require(secs < 5.0, "took " + std::to_string(secs) + " s");
  if (l.ok) l.detail = "p = 2, 3; n = 0..8 exact; " + std::to_string(secs).substr(0, 5) + " s";
  return l;
}

Line artin_schreier_verdict() {
  Line l;
  for (unsigned long p : {2UL, 3UL}) {
    ScenarioConfig c = default_config("artin-schreier");
    c.p = p;
    const auto r = run(c).report;
    l.require(r["omega_verdict"]["outcome"] == "OmegaZero", "segment verdict");
    l.require(r["classification"]["case"] == "ii", "case");
    l.require(r["classification"]["outcome"] == "OmegaZero", "classification verdict");
    l.require(r["delta"]["trivial"] == true, "Delta not trivial");
    l.require(r["classification"]["wlim_branch"] == 2, "wlim branch");
    l.require(r["b1"]["one_in_b1"] == true, "1 not in B_1");
    l.require(r["agreement"] == true, "criteria disagree");
  }
  if (l.ok) l.detail = "OmegaZero three ways, case (ii), Delta = 0, branch 2";
  return l;
}

ScenarioConfig kummer(unsigned long p, const Rational& vp, const GroupElem& c, const GroupElem& d) {
  ScenarioConfig cfg = default_config("kummer-schedule");
  cfg.p = p;
  cfg.vp = vp;
  cfg.schedule = ScheduleSpec{"closed_form", c, d, Rational(static_cast<long>(p)), {}, 0};
  return cfg;
}

Line kummer_threshold() {
  Line l;
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    const Rational threshold(1, static_cast<long>(p) - 1);
    for (const Rational& gap : {Rational(0), Rational(1, 1000), Rational(1, 3)}) {
      const auto r = run(kummer(p, 1, q("-1"), q(Rational(threshold - gap))));
      const Outcome want = gap == 0 ? Outcome::OmegaZero : Outcome::OmegaNonzero;
      l.require(r.status == RunStatus::Decisive && r.outcome == want,
                "p=" + std::to_string(p) + " gap " + to_string(gap));
      l.require(r.report["agreement"] == true, "criteria disagree at p=" + std::to_string(p));
    }
  }
  if (l.ok) l.detail = "p = 2, 3, 5: threshold gives OmegaZero, below gives OmegaNonzero";
  return l;
}

Line finite_cases() {
  Line l;
  const auto u = run(default_config("unramified")).report;
  l.require(u["verdict"] == "OmegaZero", "unramified verdict");
  l.require(u["classification"]["case"] == "i", "unramified case");
  l.require(u["classification"]["min_alpha"] == "0/1", "min alpha");
  const auto& row = u["table"][0];
  l.require(row["alpha"] == "0/1" && row["beta_tilde"] == "0/1", "alpha_l = beta~_i = 0");

  const auto h = run(default_config("hensel-immediate")).report;
  l.require(h["verdict"] == "OmegaZero", "hensel verdict");
  l.require(h["classification"]["case"] == "ii", "hensel case");
  l.require(h["segments"]["alpha"]["kind"] == "whole" && h["segments"]["beta"]["kind"] == "whole", "alpha = beta = whole");
  const auto oracle = golden("hensel_oracle.json");
  for (std::size_t n = 0; n < h["table"].size(); ++n) {
    l.require(q(h["table"][n]["nu_Q"].get<std::string>()) == q(oracle["rows"][n]["nu_Q"].get<std::string>()),
              "hensel nu(Q_n) differs from the oracle file");
    l.require(q(h["table"][n]["beta"].get<std::string>()) == q(oracle["rows"][n]["beta"].get<std::string>()),
              "hensel beta_n differs from the oracle file");
  }
  if (l.ok) l.detail = "x^2+x+1 case (i) at 0; x^2+x+2 case (ii) with the whole group";
  return l;
}

Line property_suites() {
  Line l;
  std::size_t total = 0;
  for (const auto& s : run_property_suites(20240601, 200)) {
    total += s.instances;
    l.require(s.ok() && s.instances >= 200, s.name + (s.messages.empty() ? "" : ": " + s.messages.front()));
  }
  if (l.ok) l.detail = "10 suites, " + std::to_string(total) + " instances, 0 failures";
  return l;
}

std::vector<ScenarioConfig> random_schedules(std::size_t count) {
  std::mt19937_64 rng(99);
  auto uni = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  std::vector<ScenarioConfig> out;
  for (std::size_t j = 0; j < count; ++j) {
    const unsigned long p = std::vector<unsigned long>{2, 3, 5, 7}[static_cast<std::size_t>(uni(0, 3))];
    Rational vp(uni(1, 5), uni(1, 3));
    vp.canonicalize();
    Rational threshold = vp / static_cast<long>(p - 1);
    Rational gap = uni(0, 2) == 0 ? Rational(0) : Rational(uni(1, 9), uni(1, 8));
    gap.canonicalize();
    Rational c(-uni(1, 6), uni(1, 3));
    c.canonicalize();
    auto cfg = kummer(p, vp, q(c), q(Rational(threshold - gap)));
    cfg.terms = static_cast<std::size_t>(uni(4, 12));
    out.push_back(cfg);
  }
  return out;
}

Line agreement() {
  Line l;
  std::vector<ScenarioConfig> all;
  for (const auto& id : builtin_scenarios()) all.push_back(default_config(id));
  const auto rnd = random_schedules(20);
  all.insert(all.end(), rnd.begin(), rnd.end());
  std::size_t decisive = 0;
  for (const auto& c : all) {
    const auto r = run(c);
    l.require(r.status == RunStatus::Decisive || r.status == RunStatus::Inconclusive,
              c.scenario + " ended " + std::string(to_string(r.status)));
    l.require(r.report.value("agreement", true), c.scenario + " has a contradictory decisive pair");
    decisive += r.status == RunStatus::Decisive;
  }
  if (l.ok) l.detail = std::to_string(all.size()) + " scenarios, " + std::to_string(decisive) + " decisive, no contradiction";
  return l;
}

Line determinism() {
  Line l;
  std::vector<ScenarioConfig> all;
  for (const auto& id : builtin_scenarios()) all.push_back(default_config(id));
  const auto rnd = random_schedules(5);
  all.insert(all.end(), rnd.begin(), rnd.end());
  for (auto c : all) {
    c.format = "structured";
    const std::string a = render_structured(run(c, 1).report);
    l.require(a == render_structured(run(c, 1).report), c.scenario + " differs between runs");
    for (unsigned t : {2U, 4U, 8U}) l.require(a == render_structured(run(c, t).report), c.scenario + " differs across threads");
  }
  if (l.ok) l.detail = std::to_string(all.size()) + " scenarios, threads 1/2/4/8";
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
      {"1 Artin-Schreier alpha_n and beta_n", artin_schreier_values},
      {"2 Artin-Schreier verdicts", artin_schreier_verdict},
      {"3 Kummer threshold", kummer_threshold},
      {"4 unramified and immediate Hensel", finite_cases},
      {"5 property suites", property_suites},
      {"6 criterion agreement", agreement},
      {"7 determinism", determinism},
  };
  bool all = true;
  for (const auto& [name, check] : criteria) {
    Line l;
    try {
      l = check();
    } catch (const std::exception& e) {
      l.ok = false;
      l.detail = std::string("exception: ") + e.what();
    }
    std::cout << (l.ok ? "PASS " : "FAIL ") << name << " (" << l.detail << ")\n";
    all = all && l.ok;
  }
  return all ? 0 : 1;
}
