#include "valkit/scenario.hpp"

#include <set>
#include <sstream>

#include "valkit/errors.hpp"

namespace valkit {

using ojson = nlohmann::ordered_json;

namespace {

Error config_error(const std::string& what) { return Error(ErrorCode::ConfigError, what); }

ScheduleSpec kummer_default(unsigned long p, const Rational& vp) {
  ScheduleSpec s;
  s.kind = "closed_form";
  s.c = GroupElem(Rational(-1));
  Rational d = vp / (static_cast<long>(p) - 1);
  d.canonicalize();
  s.d = GroupElem(d);
  s.base = static_cast<long>(p);
  return s;
}

// -------------------------------------------------------------- JSON input

Rational rational_field(const nlohmann::json& v, const std::string& field) {
  try {
    if (v.is_number_integer()) return Rational(v.get<long>());
    if (v.is_string()) return parse_rational(v.get<std::string>());
  } catch (const Error& e) {
    throw config_error("field \"" + field + "\": " + e.what());
  }
  throw config_error("field \"" + field + "\" must be an exact rational written as a string or an integer");
}

GroupElem group_field(const nlohmann::json& v, const std::string& field) {
  if (v.is_string()) {
    try {
      return GroupElem::parse(v.get<std::string>());
    } catch (const Error& e) {
      throw config_error("field \"" + field + "\": " + e.what());
    }
  }
  return GroupElem(rational_field(v, field));
}

long integer_field(const nlohmann::json& v, const std::string& field) {
  if (!v.is_number_integer()) throw config_error("field \"" + field + "\" must be an integer");
  return v.get<long>();
}

std::size_t count_field(const nlohmann::json& v, const std::string& field) {
  const long n = integer_field(v, field);
  if (n <= 0) throw config_error("field \"" + field + "\" must be positive");
  return static_cast<std::size_t>(n);
}

std::string string_field(const nlohmann::json& v, const std::string& field) {
  if (!v.is_string()) throw config_error("field \"" + field + "\" must be a string");
  return v.get<std::string>();
}

std::vector<std::string> coeff_list(const nlohmann::json& v, const std::string& field) {
  if (!v.is_array() || v.empty()) throw config_error("field \"" + field + "\" must be a non-empty array");
  std::vector<std::string> out;
  for (const auto& c : v) {
    if (c.is_number_integer()) out.push_back(std::to_string(c.get<long>()));
    else out.push_back(string_field(c, field + "[]"));
  }
  return out;
}

void check_keys(const nlohmann::json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw config_error(where + " must be an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) throw config_error("unknown key \"" + key + "\" in " + where);
}

ScheduleSpec parse_schedule(const nlohmann::json& v) {
  check_keys(v, {"kind", "c", "d", "base", "values", "first"}, "schedule");
  ScheduleSpec s;
  s.kind = v.contains("kind") ? string_field(v["kind"], "schedule.kind") : "closed_form";
  if (v.contains("first")) s.first = integer_field(v["first"], "schedule.first");
  if (s.kind == "list") {
    if (!v.contains("values") || !v["values"].is_array() || v["values"].empty())
      throw config_error("field \"schedule.values\" must be a non-empty array");
    for (const auto& x : v["values"]) s.values.push_back(group_field(x, "schedule.values[]"));
    return s;
  }
  if (s.kind != "closed_form" && s.kind != "arithmetic")
    throw config_error("field \"schedule.kind\" must be closed_form, arithmetic or list");
  if (!v.contains("c") || !v.contains("d")) throw config_error("schedule needs fields \"c\" and \"d\"");
  s.c = group_field(v["c"], "schedule.c");
  s.d = group_field(v["d"], "schedule.d");
  if (s.kind == "closed_form") {
    if (!v.contains("base")) throw config_error("closed_form schedule needs field \"base\"");
    s.base = rational_field(v["base"], "schedule.base");
  }
  return s;
}

std::size_t line_of(const std::string& text, std::size_t byte) {
  std::size_t line = 1;
  for (std::size_t k = 0; k < byte && k < text.size(); ++k) line += text[k] == '\n';
  return line;
}

// ------------------------------------------------------------- JSON output

std::string frac(const GroupElem& x) { return x.to_fraction_string(); }

ojson group_list(const std::vector<GroupElem>& xs) {
  ojson out = ojson::array();
  for (const auto& x : xs) out.push_back(frac(x));
  return out;
}

ojson law_json(const ValueSequence& seq) {
  ojson j;
  std::visit(
      [&j](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ValueSequence::FiniteList>) {
          j["kind"] = "list";
          j["values"] = group_list(f.values);
        } else if constexpr (std::is_same_v<T, ValueSequence::ClosedForm>) {
          j["kind"] = "closed_form";
          j["prefix"] = group_list(f.prefix);
          j["c"] = frac(f.c);
          j["d"] = frac(f.d);
          j["base"] = to_fraction_string(f.base);
        } else if constexpr (std::is_same_v<T, ValueSequence::Arithmetic>) {
          j["kind"] = "arithmetic";
          j["prefix"] = group_list(f.prefix);
          j["c"] = frac(f.c);
          j["d"] = frac(f.d);
        } else if constexpr (std::is_same_v<T, ValueSequence::Stabilized>) {
          j["kind"] = "stabilized";
          j["prefix"] = group_list(f.prefix);
          j["tail"] = frac(f.tail);
        } else {
          j["kind"] = "probed";
        }
      },
      seq.kind());
  j["first"] = seq.first_index();
  return j;
}

ojson segment_json(const Segment& s) {
  ojson j;
  switch (s.kind()) {
    case Segment::Kind::Empty: j["kind"] = "empty"; break;
    case Segment::Kind::WholeGroup: j["kind"] = "whole"; break;
    case Segment::Kind::MinClosed:
      j["kind"] = "min";
      j["min"] = frac(s.minimum());
      break;
    case Segment::Kind::GeneratedBy:
      if (s.boundary()) {
        j["kind"] = "cut";
        j["anchor"] = frac(s.boundary()->anchor);
        j["subgroup"] = s.boundary()->subgroup;
        j["closed"] = s.boundary()->closed;
      } else {
        j["kind"] = "undecided";
      }
      break;
  }
  j["text"] = s.describe();
  return j;
}

std::string key_label(const KeyIndex& i) { return std::to_string(i.stage) + "." + std::to_string(i.n); }

ojson stage_json(const KeySequence& ks, std::size_t s) {
  ojson j;
  j["degree"] = ks.stage_degree(s);
  if (const auto* e = std::get_if<ExplicitStage>(&ks.stages()[s])) {
    j["kind"] = "explicit";
    j["label"] = e->label;
    j["Q"] = e->Q.to_string();
  } else {
    const auto& fam = ks.family(s);
    j["kind"] = fam.kind();
    j["family"] = fam.describe();
    j["first"] = fam.first_index();
  }
  return j;
}

}  // namespace

// ------------------------------------------------------------------ configs

ValueSequence ScheduleSpec::sequence() const {
  if (kind == "list") return ValueSequence::finite(values, first);
  if (kind == "arithmetic") return ValueSequence::arithmetic(c, d, first);
  return ValueSequence::closed_form(c, d, base, first);
}

const std::vector<std::string>& builtin_scenarios() {
  static const std::vector<std::string> ids = {"artin-schreier", "kummer-schedule", "hensel-immediate", "unramified",
                                               "custom"};
  return ids;
}

ScenarioConfig default_config(const std::string& id) {
  ScenarioConfig c;
  c.scenario = id;
  if (id == "artin-schreier") {
    c.backend = Backend::Hahn;
  } else if (id == "kummer-schedule") {
    c.backend = Backend::PAdic;
    c.p = 3;
    c.schedule = kummer_default(c.p, c.vp);
  } else if (id == "hensel-immediate") {
    c.backend = Backend::PAdic;
    c.g = {"2", "1", "1"};
  } else if (id == "unramified") {
    c.backend = Backend::PAdic;
    c.g = {"1", "1", "1"};
  } else if (id == "custom") {
    // (x^2+x+1)^2 + 2x(x^2+x+1) + 4: unramified of degree 4 over the 2-adic rationals
    c.backend = Backend::PAdic;
    c.g = {"5", "4", "5", "4", "1"};
    c.stages = {{"x", {"0", "1"}}, {"phi", {"1", "1", "1"}}};
  } else {
    throw config_error("unknown scenario \"" + id + "\"");
  }
  return c;
}

void validate(const ScenarioConfig& c) {
  if (c.format != "text" && c.format != "structured")
    throw config_error("field \"format\" must be text or structured");
  if (c.window == 0 || c.budget < c.window) throw config_error("budget must be at least the window");
  if (c.terms == 0) throw config_error("field \"terms\" must be positive");
  try {
    (void)FieldSpec(c.backend, c.p);
  } catch (const Error& e) {
    throw config_error(std::string("field \"p\": ") + e.what());
  }
  if (c.scenario == "artin-schreier") {
    if (c.backend != Backend::Hahn) throw config_error("artin-schreier runs over the hahn backend");
    if (c.va >= 0) throw config_error("field \"va\" must be negative");
  } else if (c.scenario == "kummer-schedule") {
    if (c.backend != Backend::PAdic) throw config_error("kummer-schedule runs over the padic backend");
    if (c.vp <= 0) throw config_error("field \"vp\" must be positive");
    if (!c.schedule) throw config_error("kummer-schedule needs a schedule");
    try {
      ScheduleFamily check(c.schedule->sequence());
    } catch (const Error& e) {
      throw config_error(std::string("field \"schedule\": ") + e.what());
    }
  } else if (c.scenario == "hensel-immediate" || c.scenario == "unramified" || c.scenario == "custom") {
    if (c.g.size() < 2) throw config_error("field \"g\" needs a polynomial of positive degree");
    if (c.scenario == "custom" && c.stages.empty() && !c.hensel_plateau)
      throw config_error("custom scenarios need stages or a plateau");
    if (c.model != "norm" && c.model != "quadratic_root")
      throw config_error("field \"model\" must be norm or quadratic_root");
  } else {
    throw config_error("unknown scenario \"" + c.scenario + "\"");
  }
}

ScenarioConfig parse_config(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw config_error("line " + std::to_string(line_of(text, e.byte)) + ": " + e.what());
  }
  check_keys(j,
             {"scenario", "backend", "p", "va", "vp", "schedule", "g", "residue", "model", "stages", "plateau", "terms",
              "window", "budget", "format"},
             "configuration");
  if (!j.contains("scenario")) throw config_error("missing field \"scenario\"");
  ScenarioConfig c = default_config(string_field(j["scenario"], "scenario"));
  if (j.contains("backend")) {
    try {
      c.backend = parse_backend(string_field(j["backend"], "backend"));
    } catch (const Error& e) {
      throw config_error(std::string("field \"backend\": ") + e.what());
    }
  }
  if (j.contains("p")) {
    const long p = integer_field(j["p"], "p");
    if (p < 2) throw config_error("field \"p\" must be a prime");
    c.p = static_cast<unsigned long>(p);
  }
  if (j.contains("va")) c.va = rational_field(j["va"], "va");
  if (j.contains("vp")) c.vp = rational_field(j["vp"], "vp");
  if (j.contains("schedule")) c.schedule = parse_schedule(j["schedule"]);
  else if (c.scenario == "kummer-schedule") c.schedule = kummer_default(c.p, c.vp);
  if (j.contains("g")) c.g = coeff_list(j["g"], "g");
  if (j.contains("residue")) c.residue = integer_field(j["residue"], "residue");
  if (j.contains("model")) c.model = string_field(j["model"], "model");
  if (j.contains("stages")) {
    if (!j["stages"].is_array()) throw config_error("field \"stages\" must be an array");
    c.stages.clear();
    for (const auto& st : j["stages"]) {
      check_keys(st, {"label", "Q"}, "stages[]");
      if (!st.contains("Q")) throw config_error("stage without field \"Q\"");
      c.stages.push_back({st.contains("label") ? string_field(st["label"], "stages[].label") : "",
                          coeff_list(st["Q"], "stages[].Q")});
    }
  }
  if (j.contains("plateau")) {
    check_keys(j["plateau"], {"kind"}, "plateau");
    if (string_field(j["plateau"].value("kind", nlohmann::json("")), "plateau.kind") != "hensel")
      throw config_error("field \"plateau.kind\" must be hensel");
    c.hensel_plateau = true;
  }
  if (j.contains("terms")) c.terms = count_field(j["terms"], "terms");
  if (j.contains("window")) c.window = count_field(j["window"], "window");
  if (j.contains("budget")) c.budget = count_field(j["budget"], "budget");
  if (j.contains("format")) c.format = string_field(j["format"], "format");
  validate(c);
  return c;
}

ojson emit_config(const ScenarioConfig& c) {
  ojson j;
  j["scenario"] = c.scenario;
  j["backend"] = std::string(to_string(c.backend));
  j["p"] = c.p;
  if (c.scenario == "artin-schreier") j["va"] = to_string(c.va);
  if (c.scenario == "kummer-schedule") {
    j["vp"] = to_string(c.vp);
    ojson s;
    s["kind"] = c.schedule->kind;
    if (c.schedule->kind == "list") {
      s["values"] = ojson::array();
      for (const auto& v : c.schedule->values) s["values"].push_back(v.to_string());
    } else {
      s["c"] = c.schedule->c.to_string();
      s["d"] = c.schedule->d.to_string();
      if (c.schedule->kind == "closed_form") s["base"] = to_string(c.schedule->base);
    }
    s["first"] = c.schedule->first;
    j["schedule"] = s;
  }
  if (!c.g.empty() && c.scenario != "artin-schreier" && c.scenario != "kummer-schedule") j["g"] = c.g;
  if (c.scenario == "hensel-immediate" || (c.scenario == "custom" && (c.hensel_plateau || c.model == "quadratic_root")))
    j["residue"] = c.residue;
  if (c.scenario == "custom") {
    j["model"] = c.model;
    j["stages"] = ojson::array();
    for (const auto& st : c.stages) j["stages"].push_back(ojson{{"label", st.label}, {"Q", st.Q}});
    if (c.hensel_plateau) j["plateau"] = ojson{{"kind", "hensel"}};
  }
  j["terms"] = c.terms;
  j["window"] = c.window;
  j["budget"] = c.budget;
  j["format"] = c.format;
  return j;
}

// ---------------------------------------------------------------- scenarios

std::unique_ptr<Scenario> build_scenario(const ScenarioConfig& config) {
  validate(config);
  auto sc = std::make_unique<Scenario>();
  sc->config = config;
  sc->spec = FieldSpec(config.backend, config.p);
  const FieldSpec& k = sc->spec;
  const std::string& id = config.scenario;

  if (id == "artin-schreier") {
    const FieldElem a = k.parse("t^(" + to_string(config.va) + ")");
    auto fam = std::make_shared<ArtinSchreierFamily>(config.p, std::get<HahnElem>(a.repr()));
    const Poly g = fam->minimal_polynomial();
    sc->nu = std::make_unique<NuOracle>(NuOracle::stabilization(
        g, [fam](long m) { return *fam->term(m).approximant; }, 0, config.window, config.budget,
        "stabilization of v(f(a_m)) along the key roots"));
    sc->ks = std::make_unique<KeySequence>(k, std::vector<KeyStage>{PlateauStage{1, fam}}, g, config.p);
  } else if (id == "kummer-schedule") {
    auto fam = std::make_shared<ScheduleFamily>(config.schedule->sequence());
    // x^p - (1 + p) stands in for g; only values are used
    const Poly g = Poly::monomial(k, k.one(), config.p) - Poly::constant(k, k.from_int(1 + static_cast<long>(config.p)));
    sc->ks = std::make_unique<KeySequence>(k, std::vector<KeyStage>{PlateauStage{1, fam}}, g, config.p);
  } else {
    Poly g = Poly::parse(k, config.g);
    if (!g.is_monic()) throw config_error("field \"g\" must be monic");
    std::vector<KeyStage> stages;
    std::shared_ptr<HenselFamily> fam;
    if (id == "unramified") {
      stages.push_back(ExplicitStage{"1", Poly::x(k), std::nullopt, std::nullopt});
    } else if (id == "custom") {
      for (const auto& st : config.stages) {
        Poly Q = Poly::parse(k, st.Q);
        stages.push_back(ExplicitStage{st.label.empty() ? Q.to_string() : st.label, std::move(Q), std::nullopt,
                                       std::nullopt});
      }
    }
    if (id == "hensel-immediate" || config.hensel_plateau) {
      try {
        fam = std::make_shared<HenselFamily>(g, config.residue);
      } catch (const Error& e) {
        throw config_error(e.what());
      }
      stages.push_back(PlateauStage{1, fam});
    }
    const bool quadratic = id == "hensel-immediate" ? g.degree() == 2 : config.model == "quadratic_root";
    try {
      if (quadratic) {
        sc->nu = std::make_unique<NuOracle>(quadratic_root_model(g, config.residue));
      } else if (id == "hensel-immediate") {
        sc->nu = std::make_unique<NuOracle>(NuOracle::stabilization(
            g, [fam](long m) { return *fam->term(m).approximant; }, 0, config.window, config.budget,
            "stabilization of v(f(a_m)) along the Newton iterates"));
      } else {
        sc->nu = std::make_unique<NuOracle>(norm_model(g));
      }
      sc->ks = std::make_unique<KeySequence>(k, std::move(stages), std::move(g), config.p);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::ConfigError) throw;
      throw config_error(e.what());
    }
  }
  if (sc->nu) sc->ctx = std::make_unique<KeyContext>(*sc->ks, *sc->nu, config.budget);
  return sc;
}

InvariantStream Scenario::stream(unsigned threads) const {
  StreamOptions opts;
  opts.terms = config.terms;
  opts.budget = config.budget;
  opts.threads = threads;
  opts.vp = GroupElem(config.vp);
  return ctx ? invariant_stream(*ctx, opts) : invariant_stream(*ks, opts);
}

// --------------------------------------------------------------------- runs

std::string_view to_string(RunStatus s) {
  switch (s) {
    case RunStatus::Decisive: return "decisive";
    case RunStatus::Inconclusive: return "inconclusive";
    case RunStatus::InvariantViolation: return "invariant_violation";
    case RunStatus::Failed: return "failed";
  }
  return "?";
}

int exit_code(RunStatus s) {
  switch (s) {
    case RunStatus::Decisive: return 0;
    case RunStatus::Inconclusive: return 2;
    case RunStatus::InvariantViolation: return 3;
    case RunStatus::Failed: return 4;
  }
  return 4;
}

RunResult run(const ScenarioConfig& config, unsigned threads) {
  const auto sc = build_scenario(config);
  RunResult res;
  ojson& rep = res.report;
  rep["version"] = "valkit-report/1";
  rep["scenario"] = emit_config(config);
  rep["field"] = std::string(to_string(config.backend)) + " p=" + std::to_string(config.p);
  rep["g"] = sc->ks->value_only() ? "value-only schedule" : sc->ks->g().to_string();
  rep["keys"] = ojson::array();
  for (std::size_t s = 0; s < sc->ks->stages().size(); ++s) rep["keys"].push_back(stage_json(*sc->ks, s));
  rep["oracle"] = sc->nu ? sc->nu->description() : "value schedule";

  auto fail = [&](const Error& e) {
    switch (e.code()) {
      case ErrorCode::Inconclusive:
      case ErrorCode::StabilizationBudgetExceeded: res.status = RunStatus::Inconclusive; break;
      case ErrorCode::InvariantViolation:
      case ErrorCode::LawMismatch: res.status = RunStatus::InvariantViolation; break;
      default: res.status = RunStatus::Failed; break;
    }
    rep["error"] = ojson{{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    rep["verdict"] = "Inconclusive";
    rep["status"] = std::string(to_string(res.status));
  };

  try {
    const InvariantStream stream = sc->stream(threads);
    rep["nu_g_prime"] = frac(stream.nu_gprime);
    rep["table"] = ojson::array();
    for (const auto& r : stream.table()) {
      ojson row;
      row["i"] = r.label;
      row["index"] = key_label(r.index);
      row["nu_Q"] = frac(r.nuQ);
      row["nu_Q_prime"] = frac(r.nuQprime);
      row["alpha"] = frac(r.alpha);
      row["beta"] = frac(r.beta);
      row["beta_tilde"] = frac(r.beta_tilde);
      row["nu_i_g"] = frac(r.nu_g);
      row["nu_i_g_prime"] = frac(r.nu_gprime);
      rep["table"].push_back(row);
    }
    rep["laws"] = ojson::array();
    for (const auto& st : stream.stages)
      for (const auto& law : st.laws) {
        ojson l;
        l["stage"] = st.stage;
        l["field"] = law.field;
        l["law"] = law.law ? law_json(*law.law) : ojson(nullptr);
        l["regime_start"] = law.regime_start;
        l["verified_terms"] = law.verified_terms;
        l["declared"] = law.declared;
        rep["laws"].push_back(l);
      }

    std::optional<SegmentOrder> order;
    try {
      const auto ab = alpha_beta_segments(stream);
      order = segment_compare(ab.alpha, ab.beta);
      rep["segments"] = ojson{{"alpha", segment_json(ab.alpha)},
                              {"beta", segment_json(ab.beta)},
                              {"order", std::string(to_string(*order))}};
      try {
        const auto delta = largest_delta(ab.alpha, stream.rank);
        rep["delta"] = ojson{{"suffix_len", delta.suffix_len}, {"trivial", delta.is_trivial()}, {"whole", delta.is_whole()}};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Inconclusive && e.code() != ErrorCode::PreconditionViolated) throw;
        rep["delta"] = nullptr;
      }
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inconclusive) throw;
      rep["segments"] = ojson{{"error", e.what()}};
      rep["delta"] = nullptr;
    }

    const bool inclusion = ideal_inclusion_check(stream);
    rep["ideal_inclusion"] = inclusion;

    const Verdict ov = omega_verdict(stream);
    rep["omega_verdict"] = ojson{{"outcome", std::string(to_string(ov.outcome))}, {"witness", ov.witness}};

    const Classification cl = classify(stream, sc->ctx.get());
    ojson cj;
    cj["case"] = cl.case_name;
    cj["outcome"] = std::string(to_string(cl.verdict.outcome));
    cj["detail"] = cl.verdict.witness;
    if (cl.case_name == "i") {
      cj["has_max"] = cl.has_max;
      cj["i"] = cl.i ? ojson(sc->ks->label(*cl.i)) : ojson(nullptr);
      cj["ell"] = cl.ell ? ojson(sc->ks->label(*cl.ell)) : ojson(nullptr);
      cj["min_alpha"] = cl.min_alpha ? ojson(frac(*cl.min_alpha)) : ojson(nullptr);
      cj["beta_tilde_bound"] = cl.beta_tilde_bound;
      cj["min_attained"] = cl.min_attained;
    } else if (cl.case_name == "ii") {
      cj["delta_suffix_len"] = cl.delta ? ojson(cl.delta->suffix_len) : ojson(nullptr);
      if (cl.plateau) {
        cj["plateau_degree"] = cl.plateau->degree;
        cj["plateau_unique"] = cl.plateau->unique;
        cj["certificate"] = sc->ks->label(cl.plateau->certificate);
      }
      cj["i0"] = cl.i0;
      cj["generated_by_beta_tilde"] = cl.generated_by_beta_tilde;
      cj["wlim_branch"] = cl.wlim_branch;
    }
    if (!cl.note.empty()) cj["note"] = cl.note;
    rep["classification"] = cj;

    std::optional<Outcome> b1_outcome;
    try {
      const BSet b = b1_criterion(stream);
      ojson bj;
      bj["applicable"] = true;
      bj["members"] = b.members;
      bj["one_in_b1"] = b.one_in_b1;
      rep["b1"] = bj;
      b1_outcome = b.one_in_b1 ? Outcome::OmegaZero : Outcome::OmegaNonzero;
    } catch (const Error& e) {
      if (e.code() == ErrorCode::HypothesisViolated) {
        rep["b1"] = ojson{{"applicable", false}, {"reason", e.what()}};
      } else if (e.code() == ErrorCode::Inconclusive) {
        rep["b1"] = ojson{{"applicable", true}, {"inconclusive", e.what()}};
      } else {
        throw;
      }
    }

    std::vector<Outcome> decisive;
    for (Outcome o : {ov.outcome, cl.verdict.outcome})
      if (o != Outcome::Inconclusive) decisive.push_back(o);
    if (b1_outcome) decisive.push_back(*b1_outcome);
    bool agree = true;
    for (Outcome o : decisive) agree = agree && o == decisive.front();
    rep["agreement"] = agree;

    if (!inclusion || !agree) {
      res.status = RunStatus::InvariantViolation;
    } else if (decisive.empty()) {
      res.status = RunStatus::Inconclusive;
    } else {
      res.status = RunStatus::Decisive;
      res.outcome = decisive.front();
    }
    rep["verdict"] = std::string(to_string(res.status == RunStatus::Decisive ? res.outcome : Outcome::Inconclusive));
    rep["status"] = std::string(to_string(res.status));
  } catch (const Error& e) {
    fail(e);
  }
  return res;
}

std::string render_structured(const ojson& report) { return report.dump(2) + "\n"; }

std::string render_text(const ojson& r) {
  std::ostringstream os;
  const auto& sc = r["scenario"];
  os << "scenario  " << sc["scenario"].get<std::string>() << " (" << r["field"].get<std::string>() << ")\n";
  os << "g         " << r["g"].get<std::string>() << "\n";
  for (const auto& k : r["keys"]) {
    os << "keys      degree " << k["degree"].get<long>() << ": ";
    if (k["kind"] == "explicit") os << k["label"].get<std::string>() << " = " << k["Q"].get<std::string>() << "\n";
    else os << k["family"].get<std::string>() << "\n";
  }
  os << "oracle    " << r["oracle"].get<std::string>() << "\n";
  if (r.contains("table")) {
    os << "nu(g')    " << GroupElem::parse(r["nu_g_prime"].get<std::string>()).to_string() << "\n\n";
    const char* cols[] = {"i", "nu_Q", "nu_Q_prime", "alpha", "beta", "beta_tilde", "nu_i_g", "nu_i_g_prime"};
    std::vector<std::vector<std::string>> cells;
    cells.emplace_back(std::begin(cols), std::end(cols));
    for (const auto& row : r["table"]) {
      std::vector<std::string> line;
      for (const char* c : cols) {
        const auto text = row[c].get<std::string>();
        line.push_back(std::string(c) == "i" ? text : GroupElem::parse(text).to_string());
      }
      cells.push_back(std::move(line));
    }
    std::vector<std::size_t> width(std::size(cols), 0);
    for (const auto& line : cells)
      for (std::size_t k = 0; k < line.size(); ++k) width[k] = std::max(width[k], line[k].size());
    for (const auto& line : cells) {
      for (std::size_t k = 0; k < line.size(); ++k)
        os << std::string(width[k] - line[k].size() + (k ? 2 : 0), ' ') << line[k];
      os << "\n";
    }
    os << "\n";
  }
  if (r.contains("segments") && r["segments"].contains("alpha")) {
    os << "alpha     " << r["segments"]["alpha"]["text"].get<std::string>() << "\n";
    os << "beta      " << r["segments"]["beta"]["text"].get<std::string>() << "\n";
    if (!r["delta"].is_null()) os << "Delta     suffix length " << r["delta"]["suffix_len"].get<std::size_t>() << "\n";
  }
  if (r.contains("ideal_inclusion"))
    os << "beta in alpha  " << (r["ideal_inclusion"].get<bool>() ? "yes" : "NO") << "\n";
  if (r.contains("omega_verdict"))
    os << "segments  " << r["omega_verdict"]["outcome"].get<std::string>() << ": "
       << r["omega_verdict"]["witness"].get<std::string>() << "\n";
  if (r.contains("classification")) {
    const auto& c = r["classification"];
    os << "classify  " << c["outcome"].get<std::string>();
    if (!c["case"].get<std::string>().empty()) os << " via case (" << c["case"].get<std::string>() << ")";
    os << ": " << c["detail"].get<std::string>();
    if (c.contains("wlim_branch") && c["wlim_branch"].get<int>() > 0) os << " [wlim branch " << c["wlim_branch"].get<int>() << "]";
    os << "\n";
  }
  if (r.contains("b1")) {
    const auto& b = r["b1"];
    if (!b["applicable"].get<bool>()) os << "B_1       not applicable: " << b["reason"].get<std::string>() << "\n";
    else if (b.contains("inconclusive")) os << "B_1       " << b["inconclusive"].get<std::string>() << "\n";
    else os << "B_1       1 in B_1: " << (b["one_in_b1"].get<bool>() ? "yes" : "no") << "\n";
  }
  if (r.contains("agreement")) os << "criteria agree  " << (r["agreement"].get<bool>() ? "yes" : "NO") << "\n";
  if (r.contains("error")) os << "error     " << r["error"]["message"].get<std::string>() << "\n";
  os << "verdict   " << r["verdict"].get<std::string>() << " (" << r["status"].get<std::string>() << ")\n";
  return os.str();
}

}  // namespace valkit
