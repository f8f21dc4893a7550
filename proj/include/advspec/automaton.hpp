#pragma once

// Nondeterministic finite automata over event labels.

#include <cstdint>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "advspec/core.hpp"

namespace advspec {

class Automaton {
 public:
  using StateId = std::uint32_t;

  struct Edge {
    EventLabel label;
    StateId to;

    auto operator<=>(const Edge&) const = default;
    bool operator==(const Edge&) const = default;
  };

  using Transition = std::tuple<StateId, EventLabel, StateId>;

  /// Starts with a single non-accepting initial state 0.
  Automaton();

  StateId add_state(bool accepting = false);
  /// Duplicate (source, label, destination) triples are ignored.
  void add_transition(StateId from, const EventLabel& label, StateId to);
  void set_accepting(StateId s, bool accepting = true);
  void set_initial(StateId s);

  std::size_t num_states() const { return out_.size(); }
  std::size_t num_transitions() const;
  StateId initial() const { return initial_; }
  bool is_accepting(StateId s) const { return accepting_.at(s); }
  const std::vector<Edge>& out(StateId s) const { return out_.at(s); }

  /// Sorted by (source, label, destination).
  std::vector<Transition> transitions() const;
  /// Labels on any transition, END included if present, sorted.
  std::vector<EventLabel> alphabet() const;

  /// Subset simulation over the whole event sequence.
  bool accepts(const Trace& trace) const;
  bool accepts(std::span<const EventLabel> events) const;

  /// States reachable from the initial state.
  std::vector<bool> reachable() const;
  /// States from which an accepting state is reachable.
  std::vector<bool> coreachable() const;

  nlohmann::json to_json() const;
  static Automaton from_json(const nlohmann::json& j);
  std::string to_dot(const std::string& name = "fsa") const;

  bool operator==(const Automaton&) const = default;

 private:
  void check_state(StateId s) const;

  StateId initial_ = 0;
  std::vector<std::vector<Edge>> out_;
  std::vector<bool> accepting_;
};

Automaton read_automaton_file(const std::string& path);
void write_automaton_file(const std::string& path, const Automaton& automaton);

}  // namespace advspec
