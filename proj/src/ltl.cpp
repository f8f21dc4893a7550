#include "advspec/ltl.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <stdexcept>

namespace advspec {

namespace {

void reject_end(const TemporalProperty& p) {
  if (p.a.is_end || p.b.is_end) {
    throw std::invalid_argument("property references END: " + p.str());
  }
}

// Scans forward from i+1. Pure events are skipped; returns true when b is
// reached through pure events only.
bool pure_run_reaches(const std::vector<EventLabel>& ev, std::size_t i, const EventLabel& b,
                      const PuritySet& purity) {
  for (std::size_t j = i + 1; j < ev.size(); ++j) {
    if (ev[j] == b) return true;
    if (!purity.contains(ev[j])) return false;
  }
  return false;
}

bool pure_run_reaches_back(const std::vector<EventLabel>& ev, std::size_t i, const EventLabel& b,
                           const PuritySet& purity) {
  for (std::size_t j = i; j-- > 0;) {
    if (ev[j] == b) return true;
    if (!purity.contains(ev[j])) return false;
  }
  return false;
}

}  // namespace

PropertyVerdict check(const TemporalProperty& property, const Trace& trace,
                      const PuritySet& purity) {
  reject_end(property);
  const auto ev = body(trace);
  const auto& a = property.a;
  const auto& b = property.b;

  PropertyVerdict v;
  v.trigger_seen = std::find(ev.begin(), ev.end(), a) != ev.end();

  switch (property.kind) {
    case PropertyKind::AF: {
      for (std::size_t i = 0; i < ev.size() && !v.falsified; ++i) {
        if (ev[i] != a) continue;
        v.falsified = std::find(ev.begin() + static_cast<std::ptrdiff_t>(i) + 1, ev.end(), b) ==
                      ev.end();
      }
      break;
    }
    case PropertyKind::NF: {
      for (std::size_t i = 0; i < ev.size() && !v.falsified; ++i) {
        if (ev[i] != a) continue;
        v.falsified = std::find(ev.begin() + static_cast<std::ptrdiff_t>(i) + 1, ev.end(), b) !=
                      ev.end();
      }
      break;
    }
    case PropertyKind::AP: {
      for (const auto& e : ev) {
        if (e == b) break;
        if (e == a) {
          v.falsified = true;
          break;
        }
      }
      break;
    }
    case PropertyKind::AIF: {
      for (std::size_t i = 0; i < ev.size() && !v.falsified; ++i) {
        if (ev[i] == a) v.falsified = !pure_run_reaches(ev, i, b, purity);
      }
      break;
    }
    case PropertyKind::NIF: {
      for (std::size_t i = 0; i < ev.size() && !v.falsified; ++i) {
        if (ev[i] == a) v.falsified = pure_run_reaches(ev, i, b, purity);
      }
      break;
    }
    case PropertyKind::AIP: {
      for (std::size_t i = 0; i < ev.size() && !v.falsified; ++i) {
        if (ev[i] == a) v.falsified = !pure_run_reaches_back(ev, i, b, purity);
      }
      break;
    }
  }
  v.supported = v.trigger_seen && !v.falsified;
  return v;
}

PropertyMonitor::State PropertyMonitor::step(PropertyKind kind, State s, bool is_a, bool is_b,
                                             bool pure, bool is_end) {
  if (s == kBad) return kBad;
  if (is_end) return falsified_at_end(kind, s) ? kBad : s;
  switch (kind) {
    case PropertyKind::AF:
      if (is_a) return 1;
      if (is_b) return 0;
      return s;
    case PropertyKind::NF:
      if (s == 1 && is_b) return kBad;
      if (is_a) return 1;
      return s;
    case PropertyKind::AP:
      if (s == 0) {
        if (is_b) return 1;
        if (is_a) return kBad;
      }
      return s;
    case PropertyKind::AIF:
      if (s == 1) {
        if (is_b) return is_a ? 1 : 0;
        if (!pure) return kBad;
        return 1;
      }
      return is_a ? 1 : 0;
    case PropertyKind::NIF:
      if (s == 1 && is_b) return kBad;
      if (is_a) return 1;
      if (s == 1 && pure) return 1;
      return 0;
    case PropertyKind::AIP:
      if (is_a && s != 1) return kBad;
      if (is_b) return 1;
      if (pure) return s;
      return 0;
  }
  return s;
}

bool PropertyMonitor::falsified_at_end(PropertyKind kind, State s) {
  if (s == kBad) return true;
  return (kind == PropertyKind::AF || kind == PropertyKind::AIF) && s == 1;
}

PropertyMonitor::PropertyMonitor(TemporalProperty property, const PuritySet& purity)
    : property_(std::move(property)), purity_(&purity) {
  reject_end(property_);
}

PropertyMonitor::State PropertyMonitor::step(State s, const EventLabel& e) const {
  return step(property_.kind, s, e == property_.a, e == property_.b, purity_->contains(e),
              e.is_end);
}

bool refuted_under_purity(const TemporalProperty& property, const Trace& trace,
                          const PuritySet& purity) {
  PropertyMonitor mon(property, purity);
  const auto ev = body(trace);
  // Bitmask over monitor states {0, 1, bad}.
  unsigned states = 1u << PropertyMonitor::kInitial;
  std::vector<const EventLabel*> block;

  auto close_block = [&] {
    if (block.empty()) return;
    bool grew = true;
    while (grew) {
      grew = false;
      for (unsigned s = 0; s < 3; ++s) {
        if (!(states & (1u << s))) continue;
        for (const auto* e : block) {
          unsigned t = 1u << mon.step(static_cast<PropertyMonitor::State>(s), *e);
          if (!(states & t)) {
            states |= t;
            grew = true;
          }
        }
      }
    }
    block.clear();
  };

  for (const auto& e : ev) {
    if (purity.contains(e)) {
      if (std::find_if(block.begin(), block.end(), [&](const EventLabel* x) { return *x == e; }) ==
          block.end()) {
        block.push_back(&e);
      }
      continue;
    }
    close_block();
    unsigned next = 0;
    for (unsigned s = 0; s < 3; ++s) {
      if (states & (1u << s)) next |= 1u << mon.step(static_cast<PropertyMonitor::State>(s), e);
    }
    states = next;
    if (states & (1u << PropertyMonitor::kBad)) return true;
  }
  close_block();
  for (unsigned s = 0; s < 3; ++s) {
    if ((states & (1u << s)) &&
        PropertyMonitor::falsified_at_end(property.kind, static_cast<PropertyMonitor::State>(s))) {
      return true;
    }
  }
  return false;
}

std::vector<TemporalProperty> enumerate_candidates(std::span<const EventLabel> alphabet) {
  std::set<EventLabel> sorted;
  for (const auto& l : alphabet) {
    if (!l.is_end) sorted.insert(l);
  }
  std::vector<TemporalProperty> out;
  out.reserve(6 * sorted.size() * sorted.size());
  for (auto k : kAllKinds) {
    for (const auto& a : sorted) {
      for (const auto& b : sorted) out.push_back(TemporalProperty{k, a, b});
    }
  }
  return out;
}

std::vector<TemporalProperty> MinedPropertySet::properties() const {
  std::vector<TemporalProperty> out;
  out.reserve(support.size());
  for (const auto& [p, n] : support) out.push_back(p);
  return out;
}

std::vector<TemporalProperty> MinedPropertySet::of_kind(PropertyKind kind) const {
  std::vector<TemporalProperty> out;
  for (const auto& [p, n] : support) {
    if (p.kind == kind) out.push_back(p);
  }
  return out;
}

MinedPropertySet mine(std::span<const Trace> traces, const PuritySet& purity,
                      const MineOptions& options) {
  if (traces.empty()) throw ConfigError("cannot mine properties from an empty trace corpus");
  std::vector<TemporalProperty> candidates = options.candidates;
  if (candidates.empty()) {
    auto alphabet = alphabet_of(traces);
    candidates = enumerate_candidates(alphabet);
  }

  MinedPropertySet out;
  for (const auto& p : candidates) {
    std::size_t support = 0;
    bool falsified = false;
    for (const auto& t : traces) {
      auto v = check(p, t, purity);
      if (v.falsified || (options.purity_closure && refuted_under_purity(p, t, purity))) {
        falsified = true;
        break;
      }
      if (v.supported) ++support;
    }
    if (!falsified && support > 0) out.support.emplace(p, support);
  }
  return out;
}

MinedPropertySet retain_consistent(const MinedPropertySet& set, std::span<const Trace> traces,
                                   const PuritySet& purity, bool purity_closure) {
  MinedPropertySet out;
  for (const auto& [p, n] : set.support) {
    std::size_t support = 0;
    bool falsified = false;
    for (const auto& t : traces) {
      auto v = check(p, t, purity);
      if (v.falsified || (purity_closure && refuted_under_purity(p, t, purity))) {
        falsified = true;
        break;
      }
      if (v.supported) ++support;
    }
    if (!falsified) out.support.emplace(p, support);
  }
  return out;
}

TemporalProperty parse_property(std::string_view line) {
  std::vector<std::string_view> tok;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t j = i;
    while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
    if (j > i) tok.push_back(line.substr(i, j - i));
    i = j;
  }
  if (tok.size() != 3) {
    throw ParseError("expected 'KIND a b', got '" + std::string(line) + "'");
  }
  TemporalProperty p{parse_kind(tok[0]), parse_event(tok[1]), parse_event(tok[2])};
  if (p.a.is_end || p.b.is_end) throw ParseError("property may not reference END: " + p.str());
  return p;
}

MinedPropertySet read_properties(std::istream& in) {
  MinedPropertySet out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string_view s = line;
    auto hash = s.find('#');
    std::size_t support = 1;
    if (hash != std::string_view::npos) {
      auto comment = s.substr(hash + 1);
      constexpr std::string_view key = " support=";
      if (comment.substr(0, key.size()) == key) {
        auto num = comment.substr(key.size());
        std::from_chars(num.data(), num.data() + num.size(), support);
      }
      s = s.substr(0, hash);
    }
    if (s.find_first_not_of(" \t\r") == std::string_view::npos) continue;
    try {
      out.support[parse_property(s)] = support;
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return out;
}

MinedPropertySet read_property_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open property file '" + path + "'");
  return read_properties(in);
}

void write_properties(std::ostream& out, const MinedPropertySet& set) {
  for (const auto& [p, n] : set.support) out << p.str() << " # support=" << n << '\n';
}

void write_property_file(const std::string& path, const MinedPropertySet& set) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write property file '" + path + "'");
  write_properties(out, set);
}

}  // namespace advspec
