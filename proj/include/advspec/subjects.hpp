#pragma once

// In-process stateful components, test execution and trace sanitization.

#include <cstdint>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "advspec/automaton.hpp"
#include "advspec/core.hpp"

namespace advspec {

/// Raised by a subject method. Data, not a failure.
class SubjectException : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SubjectInstance {
 public:
  virtual ~SubjectInstance() = default;
  /// Boolean returns are reported; other results are dropped.
  virtual std::optional<bool> invoke(const std::string& action, std::int64_t arg) = 0;
  /// Resources still held.
  virtual int leaked() const { return 0; }
};

class Subject {
 public:
  static constexpr const char* kConstructor = "<init>";

  virtual ~Subject() = default;
  virtual std::string name() const = 0;
  virtual const std::vector<ActionDescriptor>& alphabet() const = 0;
  virtual std::optional<Automaton> ground_truth() const { return std::nullopt; }
  virtual std::unique_ptr<SubjectInstance> construct(std::int64_t arg) const = 0;

  const ActionDescriptor* find_action(std::string_view action) const;
  PuritySet purity() const { return PuritySet::from_alphabet(alphabet()); }
  /// Every label the subject can emit, sorted.
  std::vector<EventLabel> labels() const;
};

struct Invocation {
  int instance = 0;
  std::string action;
  std::int64_t arg_seed = 0;

  auto operator<=>(const Invocation&) const = default;
  bool operator==(const Invocation&) const = default;
};

struct TestCase {
  std::vector<Invocation> invocations;

  std::size_t size() const { return invocations.size(); }
  bool empty() const { return invocations.empty(); }
  int instance_count() const;

  auto operator<=>(const TestCase&) const = default;
  bool operator==(const TestCase&) const = default;
};

std::string format_test(const TestCase& test);
nlohmann::json test_to_json(const TestCase& test);

enum class Outcome { Normal, Raised, Skipped };

struct ExecutionResult {
  std::vector<Trace> traces;  // one per constructed instance, by instance id
  std::vector<Outcome> outcomes;
  int leaked = 0;
};

/// Runs the plan. Arguments are drawn from pools by (arg_seed + seed).
/// Unknown actions raise ConfigError.
ExecutionResult execute(const Subject& subject, const TestCase& test, std::uint64_t seed = 0);

/// Drops every trace of a leaking test and empty traces; closes partial
/// traces with END.
std::vector<Trace> sanitize(const ExecutionResult& result);
std::vector<Trace> sanitize(std::span<const ExecutionResult> results);

/// Drops calls before an instance's constructor and repeated constructors,
/// renumbers instances densely by first use and truncates to max_length.
TestCase normalize_test(const Subject& subject, const TestCase& test, std::size_t max_length);

/// Random constructor-first plan on `instances` instances.
TestCase random_test(const Subject& subject, std::mt19937_64& rng, std::size_t length,
                     int instances = 1);

const Subject& find_subject(std::string_view name);
std::vector<std::string> subject_names();
nlohmann::json subject_metadata(const Subject& subject);

/// Subject with an empty alphabet; construction fails validation. For tests.
std::unique_ptr<Subject> make_empty_subject();

}  // namespace advspec
