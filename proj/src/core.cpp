#include "advspec/core.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace advspec {

namespace {

constexpr std::string_view kEnd = "END";

bool is_name_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '$' || c == '<' ||
         c == '>' || c == '.' || c == '-';
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_ws(std::string_view s) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    std::size_t j = i;
    while (j < s.size() && !std::isspace(static_cast<unsigned char>(s[j]))) ++j;
    if (j > i) out.push_back(s.substr(i, j - i));
    i = j;
  }
  return out;
}

}  // namespace

EventLabel EventLabel::end() { return EventLabel{std::string(kEnd), std::nullopt, true}; }

EventLabel EventLabel::of(std::string action) {
  return EventLabel{std::move(action), std::nullopt, false};
}

EventLabel EventLabel::of(std::string action, bool returned) {
  return EventLabel{std::move(action), returned, false};
}

std::string EventLabel::str() const {
  if (is_end) return std::string(kEnd);
  if (!returned) return action;
  return action + (*returned ? ":TRUE" : ":FALSE");
}

EventLabel parse_event(std::string_view text) {
  if (text.empty()) throw ParseError("empty event label");
  if (text == kEnd) return EventLabel::end();
  auto colon = text.find(':');
  std::string_view name = text.substr(0, colon);
  if (name.empty()) throw ParseError("event label '" + std::string(text) + "' has an empty name");
  for (char c : name) {
    if (!is_name_char(c)) {
      throw ParseError("invalid character in event name '" + std::string(name) + "'");
    }
  }
  if (colon == std::string_view::npos) return EventLabel::of(std::string(name));
  std::string_view abs = text.substr(colon + 1);
  if (abs == "TRUE") return EventLabel::of(std::string(name), true);
  if (abs == "FALSE") return EventLabel::of(std::string(name), false);
  throw ParseError("invalid return abstraction '" + std::string(abs) + "' in event '" +
                   std::string(text) + "'");
}

std::ostream& operator<<(std::ostream& os, const EventLabel& label) { return os << label.str(); }

bool heuristic_purity(std::string_view action) {
  for (std::string_view prefix : {std::string_view("is"), std::string_view("has")}) {
    if (action.substr(0, prefix.size()) != prefix) continue;
    if (action.size() == prefix.size()) return true;
    if (std::isupper(static_cast<unsigned char>(action[prefix.size()]))) return true;
  }
  return false;
}

std::vector<EventLabel> labels_of(const ActionDescriptor& action) {
  if (action.returns_boolean) {
    return {EventLabel::of(action.action, false), EventLabel::of(action.action, true)};
  }
  return {EventLabel::of(action.action)};
}

void PuritySet::add_action(std::string_view action) {
  if (action == kEnd) throw ConfigError("END cannot be pure");
  actions_.emplace(action);
}

bool PuritySet::contains(const EventLabel& label) const {
  return !label.is_end && actions_.contains(label.action);
}

bool PuritySet::contains_action(std::string_view action) const {
  return actions_.find(action) != actions_.end();
}

PuritySet PuritySet::from_alphabet(std::span<const ActionDescriptor> alphabet) {
  PuritySet set;
  for (const auto& a : alphabet) {
    bool pure = a.is_pure.value_or(heuristic_purity(a.action));
    if (pure && !a.is_constructor) set.add_action(a.action);
  }
  return set;
}

PuritySet PuritySet::from_heuristic(std::span<const EventLabel> labels) {
  PuritySet set;
  for (const auto& l : labels) {
    if (!l.is_end && heuristic_purity(l.action)) set.add_action(l.action);
  }
  return set;
}

void validate_trace(const Trace& trace) {
  for (std::size_t i = 0; i + 1 < trace.events.size(); ++i) {
    if (trace.events[i].is_end) {
      throw ParseError("END may only appear as the final event (found at position " +
                       std::to_string(i) + ")");
    }
  }
}

std::vector<EventLabel> body(const Trace& trace) {
  std::vector<EventLabel> out;
  out.reserve(trace.events.size());
  for (const auto& e : trace.events) {
    if (!e.is_end) out.push_back(e);
  }
  return out;
}

Trace parse_trace(std::string_view line) {
  Trace t;
  for (auto tok : split_ws(line)) t.events.push_back(parse_event(tok));
  validate_trace(t);
  return t;
}

std::string format_trace(const Trace& trace) {
  std::string out;
  for (std::size_t i = 0; i < trace.events.size(); ++i) {
    if (i) out += ' ';
    out += trace.events[i].str();
  }
  return out;
}

std::vector<Trace> read_traces(std::istream& in) {
  std::vector<Trace> traces;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto s = trim(line);
    if (s.empty() || s.front() == '#') continue;
    try {
      traces.push_back(parse_trace(s));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return traces;
}

std::vector<Trace> read_trace_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace file '" + path + "'");
  return read_traces(in);
}

void write_traces(std::ostream& out, std::span<const Trace> traces) {
  for (const auto& t : traces) out << format_trace(t) << '\n';
}

void write_trace_file(const std::string& path, std::span<const Trace> traces) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write trace file '" + path + "'");
  write_traces(out, traces);
}

std::vector<EventLabel> alphabet_of(std::span<const Trace> traces) {
  std::set<EventLabel> labels;
  for (const auto& t : traces) {
    for (const auto& e : t.events) {
      if (!e.is_end) labels.insert(e);
    }
  }
  return {labels.begin(), labels.end()};
}

std::string_view kind_name(PropertyKind kind) {
  switch (kind) {
    case PropertyKind::AF: return "AF";
    case PropertyKind::NF: return "NF";
    case PropertyKind::AP: return "AP";
    case PropertyKind::AIF: return "AIF";
    case PropertyKind::NIF: return "NIF";
    case PropertyKind::AIP: return "AIP";
  }
  return "?";
}

PropertyKind parse_kind(std::string_view text) {
  for (auto k : kAllKinds) {
    if (kind_name(k) == text) return k;
  }
  throw ParseError("unknown property kind '" + std::string(text) + "'");
}

std::string TemporalProperty::str() const {
  std::string out(kind_name(kind));
  out += ' ';
  out += a.str();
  out += ' ';
  out += b.str();
  return out;
}

std::ostream& operator<<(std::ostream& os, const TemporalProperty& property) {
  return os << property.str();
}

}  // namespace advspec
