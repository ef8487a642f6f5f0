#pragma once

// Scenario configuration, construction and reports.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "valkit/kahler.hpp"

namespace valkit {

/// nu(x - a_n) for value-only scenarios.
struct ScheduleSpec {
  std::string kind = "closed_form";  // closed_form | arithmetic | list
  GroupElem c = GroupElem(Rational(-1));
  GroupElem d;
  Rational base = 2;
  std::vector<GroupElem> values;
  long first = 0;

  ValueSequence sequence() const;
  friend bool operator==(const ScheduleSpec&, const ScheduleSpec&) = default;
};

struct StageSpec {
  std::string label;
  std::vector<std::string> Q;  // coefficients, lowest degree first
  friend bool operator==(const StageSpec&, const StageSpec&) = default;
};

struct ScenarioConfig {
  std::string scenario = "artin-schreier";
  Backend backend = Backend::Hahn;
  unsigned long p = 2;
  Rational va = -1;       // artin-schreier: v(a)
  Rational vp = 1;        // kummer-schedule: v(p)
  std::optional<ScheduleSpec> schedule;
  std::vector<std::string> g;  // hensel-immediate, unramified, custom
  long residue = 0;            // hensel-immediate; custom plateau and quadratic model
  std::string model = "norm";  // custom: norm | quadratic_root
  std::vector<StageSpec> stages;
  bool hensel_plateau = false;  // custom: close with a Newton plateau
  std::size_t terms = 8;
  std::size_t window = NuOracle::kDefaultWindow;
  std::size_t budget = NuOracle::kDefaultBudget;
  std::string format = "text";

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

const std::vector<std::string>& builtin_scenarios();
/// Defaults of a built-in scenario; ConfigError for unknown ids.
ScenarioConfig default_config(const std::string& id);
/// Strict JSON parsing; ConfigError with line or field diagnostics.
ScenarioConfig parse_config(const std::string& text);
nlohmann::ordered_json emit_config(const ScenarioConfig& config);
/// Rejects inconsistent values (ConfigError).
void validate(const ScenarioConfig& config);

/// Everything a run needs. Not movable: the context refers to its siblings.
struct Scenario {
  ScenarioConfig config;
  FieldSpec spec;
  std::unique_ptr<NuOracle> nu;  // null for value-only scenarios
  std::unique_ptr<KeySequence> ks;
  std::unique_ptr<KeyContext> ctx;

  InvariantStream stream(unsigned threads = 1) const;
};

std::unique_ptr<Scenario> build_scenario(const ScenarioConfig& config);

enum class RunStatus { Decisive, Inconclusive, InvariantViolation, Failed };
std::string_view to_string(RunStatus s);
int exit_code(RunStatus s);

struct RunResult {
  RunStatus status = RunStatus::Failed;
  Outcome outcome = Outcome::Inconclusive;
  nlohmann::ordered_json report;
};

/// Builds the scenario, computes the stream and all criteria. Computation
/// errors are embedded in the report; ConfigError propagates.
RunResult run(const ScenarioConfig& config, unsigned threads = 1);

std::string render_structured(const nlohmann::ordered_json& report);
std::string render_text(const nlohmann::ordered_json& report);

}  // namespace valkit
