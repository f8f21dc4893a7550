#pragma once

// Shared vocabulary: events, traces, actions, temporal properties, purity.

#include <compare>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace advspec {

/// Bad user input or an inconsistent setup (unknown subject, unknown action,
/// invalid configuration values). The CLI maps this to exit code 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed text in a trace, property or event representation.
class ParseError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

/// One abstract method invocation. Rendered as `action`, `action:TRUE`,
/// `action:FALSE`, or the sentinel `END`.
struct EventLabel {
  std::string action;
  std::optional<bool> returned;
  bool is_end = false;

  static EventLabel end();
  static EventLabel of(std::string action);
  static EventLabel of(std::string action, bool returned);

  std::string str() const;

  auto operator<=>(const EventLabel&) const = default;
  bool operator==(const EventLabel&) const = default;
};

EventLabel parse_event(std::string_view text);
std::ostream& operator<<(std::ostream& os, const EventLabel& label);

struct ActionDescriptor {
  std::string action;
  // Unset means "undeclared"; resolved by the name heuristic.
  std::optional<bool> is_pure;
  bool is_constructor = false;
  bool returns_boolean = false;
  int arg_arity = 0;
};

/// Getter-style names (`isEmpty`, `hasMoreTokens`, `is`) are assumed pure.
bool heuristic_purity(std::string_view action);

/// Event labels produced by an action (`a:TRUE` and `a:FALSE` for boolean
/// returns, otherwise the bare name).
std::vector<EventLabel> labels_of(const ActionDescriptor& action);

/// Side-effect-free events. Membership is per action name, so the set is
/// closed under return abstraction. END is never pure.
class PuritySet {
 public:
  PuritySet() = default;

  void add_action(std::string_view action);
  bool contains(const EventLabel& label) const;
  bool contains_action(std::string_view action) const;
  const std::set<std::string, std::less<>>& actions() const { return actions_; }

  /// Declared purity, falling back to the heuristic for undeclared actions.
  static PuritySet from_alphabet(std::span<const ActionDescriptor> alphabet);
  /// Heuristic purity over the actions of the given labels.
  static PuritySet from_heuristic(std::span<const EventLabel> labels);

 private:
  std::set<std::string, std::less<>> actions_;
};

struct Trace {
  std::vector<EventLabel> events;

  Trace() = default;
  explicit Trace(std::vector<EventLabel> ev) : events(std::move(ev)) {}

  bool complete() const { return !events.empty() && events.back().is_end; }
  std::size_t size() const { return events.size(); }
  bool empty() const { return events.empty(); }

  auto operator<=>(const Trace&) const = default;
  bool operator==(const Trace&) const = default;
};

/// Checks the END placement invariant; throws ParseError.
void validate_trace(const Trace& trace);

/// Events of the trace with any END sentinel removed.
std::vector<EventLabel> body(const Trace& trace);

Trace parse_trace(std::string_view line);
std::string format_trace(const Trace& trace);

/// One trace per line, `#` comments and blank lines ignored.
std::vector<Trace> read_traces(std::istream& in);
std::vector<Trace> read_trace_file(const std::string& path);
void write_traces(std::ostream& out, std::span<const Trace> traces);
void write_trace_file(const std::string& path, std::span<const Trace> traces);

/// Sorted set of labels occurring in the traces, END excluded.
std::vector<EventLabel> alphabet_of(std::span<const Trace> traces);

enum class PropertyKind { AF, NF, AP, AIF, NIF, AIP };

inline constexpr PropertyKind kAllKinds[] = {PropertyKind::AF,  PropertyKind::NF,
                                             PropertyKind::AP,  PropertyKind::AIF,
                                             PropertyKind::NIF, PropertyKind::AIP};

std::string_view kind_name(PropertyKind kind);
PropertyKind parse_kind(std::string_view text);

struct TemporalProperty {
  PropertyKind kind = PropertyKind::AF;
  EventLabel a;
  EventLabel b;

  std::string str() const;

  auto operator<=>(const TemporalProperty&) const = default;
  bool operator==(const TemporalProperty&) const = default;
};

std::ostream& operator<<(std::ostream& os, const TemporalProperty& property);

}  // namespace advspec
