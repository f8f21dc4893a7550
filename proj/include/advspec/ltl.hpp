#pragma once

// Purity-aware temporal-property templates over finite traces, and the
// confidence-1.0 miner.

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "advspec/core.hpp"

namespace advspec {

struct PropertyVerdict {
  bool falsified = false;
  bool supported = false;
  bool trigger_seen = false;
};

/// Evaluates one property on one trace. END is ignored for matching and only
/// terminates the scan. Throws std::invalid_argument if the property
/// references END.
PropertyVerdict check(const TemporalProperty& property, const Trace& trace,
                      const PuritySet& purity);

/// Three-state deterministic monitor for a property kind. Falsification is
/// absorbing (kBad). Used for product constructions and pure-block closure.
class PropertyMonitor {
 public:
  using State = std::uint8_t;
  static constexpr State kInitial = 0;
  static constexpr State kBad = 2;

  /// Transition on an event already classified against the property.
  static State step(PropertyKind kind, State s, bool is_a, bool is_b, bool pure, bool is_end);

  /// True if stopping in `s` (end of trace) falsifies the property.
  static bool falsified_at_end(PropertyKind kind, State s);

  PropertyMonitor(TemporalProperty property, const PuritySet& purity);

  State step(State s, const EventLabel& e) const;
  const TemporalProperty& property() const { return property_; }

 private:
  TemporalProperty property_;
  const PuritySet* purity_;
};

/// True if the trace, or any variant obtained by rewriting each maximal block
/// of consecutive pure events into an arbitrary word over that block's labels
/// (including the empty word), falsifies the property. This is the set of
/// behaviours a purity-aware acceptor necessarily admits once pure events
/// become self-loops.
bool refuted_under_purity(const TemporalProperty& property, const Trace& trace,
                          const PuritySet& purity);

/// All 6 * n^2 template instances over the alphabet in sorted order.
std::vector<TemporalProperty> enumerate_candidates(std::span<const EventLabel> alphabet);

struct MinedPropertySet {
  std::map<TemporalProperty, std::size_t> support;

  bool contains(const TemporalProperty& p) const { return support.contains(p); }
  std::size_t size() const { return support.size(); }
  bool empty() const { return support.empty(); }
  std::vector<TemporalProperty> properties() const;
  std::vector<TemporalProperty> of_kind(PropertyKind kind) const;

  bool operator==(const MinedPropertySet&) const = default;
};

struct MineOptions {
  // Reject candidates refuted by the pure-block closure of a trace, not only
  // by the trace itself.
  bool purity_closure = true;
  // Restrict mining to these candidates; empty means enumerate from the corpus.
  std::vector<TemporalProperty> candidates;
};

/// Keeps candidates with no falsifying trace and at least one supporting
/// trace. Support counts traces. Throws ConfigError on an empty corpus.
MinedPropertySet mine(std::span<const Trace> traces, const PuritySet& purity,
                      const MineOptions& options = {});

/// Members of `set` that no trace falsifies (under the pure-block closure when
/// requested), with support recounted over `traces`.
MinedPropertySet retain_consistent(const MinedPropertySet& set, std::span<const Trace> traces,
                                   const PuritySet& purity, bool purity_closure = true);

/// `KIND a b` per line; a trailing `# support=N` comment carries the count.
TemporalProperty parse_property(std::string_view line);
MinedPropertySet read_properties(std::istream& in);
MinedPropertySet read_property_file(const std::string& path);
void write_properties(std::ostream& out, const MinedPropertySet& set);
void write_property_file(const std::string& path, const MinedPropertySet& set);

}  // namespace advspec
