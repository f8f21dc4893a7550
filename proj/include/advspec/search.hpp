#pragma once

// Many-objective search for counterexamples of mined properties.

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "advspec/core.hpp"
#include "advspec/ltl.hpp"
#include "advspec/subjects.hpp"

namespace advspec {

enum class GoalKind { Method, Counterexample };

struct SearchGoal {
  GoalKind kind = GoalKind::Method;
  // Method goals: a bare label matches every return value of the action.
  EventLabel method;
  // Counterexample goals.
  TemporalProperty property;

  static SearchGoal for_method(EventLabel label);
  static SearchGoal for_property(TemporalProperty property);

  std::string str() const;
  bool matches(const EventLabel& event) const;

  auto operator<=>(const SearchGoal&) const = default;
  bool operator==(const SearchGoal&) const = default;
};

enum class GoalState { Untargeted, Targeted, Covered, Abandoned };
std::string_view state_name(GoalState s);
bool legal_transition(GoalState from, GoalState to);

inline constexpr double kFalsifies = 0.0;
inline constexpr double kSupports = 0.33;
inline constexpr double kMentions = 0.66;
inline constexpr double kIrrelevant = 1.0;

/// Bucketed fitness for AF, NF, AP, AIF and AIP. AF and AIF are evaluated as
/// AP and AIP on the reversed trace (AF(x, x) directly). Throws
/// std::invalid_argument for NIF.
double always_property_fitness(const Trace& trace, const TemporalProperty& property,
                               const PuritySet& purity);

/// Distance-based fitness for NIF: impure events separating the nearest
/// (A, B) pair over the trace length; 1 if A is absent.
double nif_fitness(const Trace& trace, const TemporalProperty& property, const PuritySet& purity);

double trace_fitness(const Trace& trace, const SearchGoal& goal, const PuritySet& purity);

/// Best (minimum) fitness over the traces; 1 when there are none.
double test_fitness(std::span<const Trace> traces, const SearchGoal& goal,
                    const PuritySet& purity);

struct GoalDependencyGraph {
  std::vector<SearchGoal> goals;
  std::vector<std::vector<int>> prerequisites;  // indices into goals
  std::vector<std::string> dropped_edges;       // cycle-closing edges skipped

  int index_of(const SearchGoal& g) const;
  bool acyclic() const;
};

/// Method goals for every property label (plus `extra_methods`), one
/// counterexample goal per property, and their dependency edges.
GoalDependencyGraph build_goal_dependencies(const MinedPropertySet& properties,
                                            std::span<const EventLabel> extra_methods = {});

/// Preference sorting then non-dominated sorting over the targeted goals.
/// fitness[t][g]; returns fronts of test indices, each ordered by
/// (length, index).
std::vector<std::vector<int>> rank(const std::vector<std::vector<double>>& fitness,
                                   std::span<const std::size_t> lengths,
                                   std::span<const int> targeted);

/// Shortest covering test per goal.
class Archive {
 public:
  /// Stores `test` if it covers the goal and beats the current entry by
  /// length. Returns true if stored.
  bool update(int goal, const TestCase& test, std::span<const Trace> traces, double fitness);
  const TestCase* test(int goal) const;
  const std::vector<Trace>* traces(int goal) const;
  std::size_t size() const { return entries_.size(); }

 private:
  struct Entry {
    TestCase test;
    std::vector<Trace> traces;
  };
  std::map<int, Entry> entries_;
};

struct SearchConfig {
  std::size_t population_size = 50;
  double crossover_rate = 0.75;
  std::size_t tournament_size = 10;
  std::size_t abandon_age = 100;
  std::size_t reset_stagnation = 100;
  std::size_t max_generations = 0;   // 0: no generation limit
  double time_budget_seconds = 0.0;  // 0: no time limit
  std::uint64_t rng_seed = 1;
  std::size_t max_test_length = 40;
  int max_instances = 3;
  std::size_t initial_min_length = 2;
  std::size_t initial_max_length = 10;
  unsigned threads = 1;

  void validate() const;
};

struct GoalTransition {
  std::size_t generation;
  int goal;
  GoalState from;
  GoalState to;
};

struct SearchReport {
  std::vector<SearchGoal> goals;
  std::vector<GoalState> final_states;
  std::vector<std::size_t> final_ages;
  std::vector<std::size_t> covered_per_generation;
  std::vector<std::size_t> resets;
  std::vector<GoalTransition> transitions;
  std::size_t generations = 0;
  std::size_t evaluations = 0;
  bool stopped_by_time = false;

  nlohmann::json to_json() const;
};

struct SearchResult {
  MinedPropertySet survivors;
  std::vector<Trace> counterexample_traces;
  std::map<TemporalProperty, TestCase> counterexamples;
  SearchReport report;
};

SearchResult evolve(const Subject& subject, const MinedPropertySet& properties,
                    const SearchConfig& config);

/// Single-point crossover; instance ids are shared between parents.
std::pair<TestCase, TestCase> crossover(const TestCase& a, const TestCase& b, std::mt19937_64& rng);

/// Per-invocation mutation with probability 1/length, followed by optional
/// insertion and instance append; the result is normalized.
TestCase mutate(const Subject& subject, const TestCase& test, const SearchConfig& config,
                std::mt19937_64& rng);

}  // namespace advspec
