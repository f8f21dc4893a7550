#pragma once

// End-to-end run: initial suite, mining, adversarial search, inference,
// evaluation.

#include <cstdint>
#include <map>
#include <span>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "advspec/automaton.hpp"
#include "advspec/eval.hpp"
#include "advspec/fsa.hpp"
#include "advspec/ltl.hpp"
#include "advspec/search.hpp"
#include "advspec/subjects.hpp"

namespace advspec {

/// Runtime failure inside a pipeline phase; the message starts with the
/// phase tag.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& phase, const std::string& what)
      : std::runtime_error("[" + phase + "] " + what), phase_(phase) {}
  const std::string& phase() const { return phase_; }

 private:
  std::string phase_;
};

struct PipelineConfig {
  std::string subject = "BoundedStack";
  std::size_t initial_tests = 50;
  std::size_t initial_min_length = 2;
  std::size_t initial_max_length = 10;
  std::uint64_t suite_seed = 1;
  double subset = 1.0;
  SearchConfig search = default_search();
  MinerConstraints constraints;
  EvalConfig eval;
  bool remine = false;

  /// Generation-bounded search with a wall-clock cap.
  static SearchConfig default_search() {
    SearchConfig c;
    c.max_generations = 300;
    c.time_budget_seconds = 120.0;
    return c;
  }
  /// Both search limits zero means the search phase is skipped.
  bool search_enabled() const {
    return search.max_generations > 0 || search.time_budget_seconds > 0.0;
  }
  void validate() const;
};

/// Random single-instance constructor-first tests, lengths uniform in range;
/// only the first ceil(subset * count) are kept.
std::vector<TestCase> initial_suite(const Subject& subject, const PipelineConfig& config);

struct InferenceResult {
  Automaton first_step;
  Automaton automaton;
  AcceptorStats acceptor;
  MergeStats merge;
};

InferenceResult infer(std::span<const Trace> traces, const MinedPropertySet& properties,
                      const PuritySet& purity, MinerConstraints constraints);

struct PipelineResult {
  std::vector<Trace> initial_traces;
  MinedPropertySet mined;
  std::optional<SearchResult> search;
  MinedPropertySet inference_properties;
  std::vector<Trace> inference_traces;
  InferenceResult inference;
  std::optional<EvalReport> eval;
  std::map<std::string, double> seconds;

  nlohmann::json to_json() const;
};

/// Runs all phases up to and including the search.
PipelineResult run_front_half(const PipelineConfig& config);
/// Builds, merges and scores from a front-half result, with the given
/// constraints. Lets ablation arms share one search.
void run_back_half(PipelineResult& result, const PipelineConfig& config,
                   MinerConstraints constraints);

PipelineResult run_pipeline(const PipelineConfig& config);

}  // namespace advspec
