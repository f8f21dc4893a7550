#include "advspec/automaton.hpp"

#include <algorithm>
#include <deque>
#include <fstream>
#include <set>
#include <sstream>

namespace advspec {

Automaton::Automaton() {
  out_.emplace_back();
  accepting_.push_back(false);
}

void Automaton::check_state(StateId s) const {
  if (s >= out_.size()) throw std::out_of_range("state " + std::to_string(s) + " out of range");
}

Automaton::StateId Automaton::add_state(bool accepting) {
  out_.emplace_back();
  accepting_.push_back(accepting);
  return static_cast<StateId>(out_.size() - 1);
}

void Automaton::add_transition(StateId from, const EventLabel& label, StateId to) {
  check_state(from);
  check_state(to);
  auto& edges = out_[from];
  Edge e{label, to};
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it != edges.end() && *it == e) return;
  edges.insert(it, std::move(e));
}

void Automaton::set_accepting(StateId s, bool accepting) {
  check_state(s);
  accepting_[s] = accepting;
}

void Automaton::set_initial(StateId s) {
  check_state(s);
  initial_ = s;
}

std::size_t Automaton::num_transitions() const {
  std::size_t n = 0;
  for (const auto& edges : out_) n += edges.size();
  return n;
}

std::vector<Automaton::Transition> Automaton::transitions() const {
  std::vector<Transition> out;
  for (StateId s = 0; s < out_.size(); ++s) {
    for (const auto& e : out_[s]) out.emplace_back(s, e.label, e.to);
  }
  return out;
}

std::vector<EventLabel> Automaton::alphabet() const {
  std::set<EventLabel> labels;
  for (const auto& edges : out_) {
    for (const auto& e : edges) labels.insert(e.label);
  }
  return {labels.begin(), labels.end()};
}

bool Automaton::accepts(const Trace& trace) const { return accepts(trace.events); }

bool Automaton::accepts(std::span<const EventLabel> events) const {
  std::vector<char> cur(out_.size(), 0), next(out_.size(), 0);
  cur[initial_] = 1;
  for (const auto& ev : events) {
    std::fill(next.begin(), next.end(), 0);
    bool any = false;
    for (StateId s = 0; s < out_.size(); ++s) {
      if (!cur[s]) continue;
      for (const auto& e : out_[s]) {
        if (e.label == ev) {
          next[e.to] = 1;
          any = true;
        }
      }
    }
    if (!any) return false;
    cur.swap(next);
  }
  for (StateId s = 0; s < out_.size(); ++s) {
    if (cur[s] && accepting_[s]) return true;
  }
  return false;
}

std::vector<bool> Automaton::reachable() const {
  std::vector<bool> seen(out_.size(), false);
  std::deque<StateId> queue{initial_};
  seen[initial_] = true;
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (const auto& e : out_[s]) {
      if (!seen[e.to]) {
        seen[e.to] = true;
        queue.push_back(e.to);
      }
    }
  }
  return seen;
}

std::vector<bool> Automaton::coreachable() const {
  std::vector<std::vector<StateId>> rev(out_.size());
  for (StateId s = 0; s < out_.size(); ++s) {
    for (const auto& e : out_[s]) rev[e.to].push_back(s);
  }
  std::vector<bool> seen(out_.size(), false);
  std::deque<StateId> queue;
  for (StateId s = 0; s < out_.size(); ++s) {
    if (accepting_[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    auto s = queue.front();
    queue.pop_front();
    for (auto p : rev[s]) {
      if (!seen[p]) {
        seen[p] = true;
        queue.push_back(p);
      }
    }
  }
  return seen;
}

nlohmann::json Automaton::to_json() const {
  nlohmann::json j;
  j["states"] = out_.size();
  j["initial"] = initial_;
  auto acc = nlohmann::json::array();
  for (StateId s = 0; s < out_.size(); ++s) {
    if (accepting_[s]) acc.push_back(s);
  }
  j["accepting"] = acc;
  auto tr = nlohmann::json::array();
  for (const auto& [src, label, dst] : transitions()) {
    tr.push_back(nlohmann::json::array({src, label.str(), dst}));
  }
  j["transitions"] = tr;
  return j;
}

Automaton Automaton::from_json(const nlohmann::json& j) {
  try {
    Automaton a;
    auto n = j.at("states").get<std::size_t>();
    if (n == 0) throw ConfigError("automaton must have at least one state");
    for (std::size_t i = 1; i < n; ++i) a.add_state();
    a.set_initial(j.at("initial").get<StateId>());
    for (const auto& s : j.at("accepting")) a.set_accepting(s.get<StateId>());
    for (const auto& t : j.at("transitions")) {
      if (!t.is_array() || t.size() != 3) throw ConfigError("transition must be [src, label, dst]");
      a.add_transition(t[0].get<StateId>(), parse_event(t[1].get<std::string>()),
                       t[2].get<StateId>());
    }
    return a;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid automaton JSON: ") + e.what());
  } catch (const std::out_of_range& e) {
    throw ParseError(std::string("invalid automaton JSON: ") + e.what());
  }
}

std::string Automaton::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  os << "  rankdir=LR;\n";
  os << "  __start [shape=point];\n";
  for (StateId s = 0; s < out_.size(); ++s) {
    os << "  " << s << " [shape=" << (accepting_[s] ? "doublecircle" : "circle") << "];\n";
  }
  os << "  __start -> " << initial_ << ";\n";
  for (const auto& [src, label, dst] : transitions()) {
    os << "  " << src << " -> " << dst << " [label=\"" << label.str() << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

Automaton read_automaton_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open automaton file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("'" + path + "': " + e.what());
  }
  return Automaton::from_json(j);
}

void write_automaton_file(const std::string& path, const Automaton& automaton) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write automaton file '" + path + "'");
  out << automaton.to_json().dump(2) << '\n';
}

}  // namespace advspec
