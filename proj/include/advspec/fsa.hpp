#pragma once

// Two-step automaton inference: a property-compatible acceptor, then
// enabledness-based state merging with property-violation vetoes.

#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "advspec/automaton.hpp"
#include "advspec/bits.hpp"
#include "advspec/core.hpp"
#include "advspec/ltl.hpp"

namespace advspec {

struct MinerConstraints {
  // A: pure events only as self-loops.
  bool pure_self_loops = true;
  // B: branch instead of adding a transition that breaks an NF/NIF property.
  bool compatible_branching = true;
};

struct AcceptorStats {
  std::size_t traces = 0;
  std::size_t skipped_traces = 0;
  std::size_t branches = 0;
  std::vector<std::string> log;
};

/// First-step working structure: a tree of states plus self-loops, with the
/// sentinel END edges kept as a per-node flag.
class AcceptorTree {
 public:
  using NodeId = int;

  struct Step {
    NodeId from;
    EventLabel label;
    NodeId to;
  };

  struct BranchPoint {
    NodeId ancestor;
    std::vector<EventLabel> suffix;
  };

  AcceptorTree(const MinedPropertySet& properties, const PuritySet& purity,
               MinerConstraints constraints = {});

  NodeId root() const { return 0; }
  std::size_t size() const { return nodes_.size(); }

  /// Adds one trace. Returns false if the trace had to be skipped.
  bool add_trace(const Trace& trace);

  // Direct construction, for fixtures. No compatibility checking.
  NodeId add_child(NodeId n, const EventLabel& label);
  void add_loop(NodeId n, const EventLabel& label);
  void mark_end(NodeId n);

  std::optional<NodeId> parent(NodeId n) const;
  std::set<EventLabel> loops(NodeId n) const;
  /// Labels of transitions into n: its tree edge, its self-loops and, when
  /// pure events are edges, labels reaching n through pure edges.
  std::set<EventLabel> incoming(NodeId n) const;
  /// Labels on the trail from the root to n, self-loops included.
  std::set<EventLabel> prefix(NodeId n) const;

  /// True iff adding `event` at n (as a self-loop when it is pure and
  /// constraint A holds, otherwise as an edge) would admit a path breaking
  /// some NF or NIF property.
  bool has_incompatible_transition(NodeId n, const EventLabel& event) const;

  /// Walks the trace's own path backwards to the nearest ancestor from which
  /// the steps taken since leaving it, followed by `event`, can be laid down
  /// as a fresh compatible chain.
  std::optional<BranchPoint> find_branch_ancestor(std::span<const Step> path,
                                                  const EventLabel& event) const;

  Automaton to_automaton() const;
  const AcceptorStats& stats() const { return stats_; }

 private:
  struct Node {
    NodeId parent = -1;
    int in_label = -1;
    std::vector<std::pair<int, NodeId>> children;
    DynBits loops;
    std::vector<int> loop_order;
    bool ends = false;
  };

  bool is_pure(int label) const { return pure_.test(static_cast<std::size_t>(label)); }
  bool as_loop(int label) const { return constraints_.pure_self_loops && is_pure(label); }
  int intern(const EventLabel& l);
  DynBits prefix_bits(NodeId n) const;
  DynBits incoming_bits(NodeId n) const;
  DynBits outgoing_bits(NodeId n) const;
  DynBits subtree_bits(NodeId n) const;
  bool edge_conflicts(const DynBits& prefix, const DynBits& incoming, int label) const;
  bool loop_conflicts(const DynBits& prefix, const DynBits& incoming, const DynBits& outgoing,
                      const DynBits& subtree, int label) const;
  bool incompatible_at(NodeId n, int label) const;
  bool chain_compatible(NodeId ancestor, std::span<const int> suffix) const;
  NodeId raw_child(NodeId n, int label);
  void raw_loop(NodeId n, int label);

  const PuritySet* purity_;
  MinerConstraints constraints_;
  LabelTable labels_;
  DynBits pure_;
  OrderingIndex order_;
  std::vector<Node> nodes_;
  AcceptorStats stats_;
};

/// First step. Throws ConfigError on an empty trace set.
Automaton build_acceptor(std::span<const Trace> traces, const MinedPropertySet& properties,
                         const PuritySet& purity, MinerConstraints constraints = {},
                         AcceptorStats* stats = nullptr);

/// Events disabled at state s: NF(x, e) for x on some path to s, NIF(x, e) for
/// x entering s through pure events only, or e pure with NIF(e, y) for y
/// leaving s through pure events only. END is never disabled.
std::set<EventLabel> disabled_events(const Automaton& automaton, Automaton::StateId s,
                                     const MinedPropertySet& properties, const PuritySet& purity);

/// True iff some accepting run's word falsifies the property. Exact product
/// reachability with the property monitor.
bool automaton_violates(const Automaton& automaton, const TemporalProperty& property,
                        const PuritySet& purity);

std::vector<TemporalProperty> violated_properties(const Automaton& automaton,
                                                  const MinedPropertySet& properties,
                                                  const PuritySet& purity);

struct MergeStats {
  std::size_t rounds = 0;
  std::size_t merges = 0;
  std::size_t vetoes = 0;
  std::size_t states_before = 0;
  std::size_t states_after = 0;
};

/// Second step. Merges states with equal disabled sets, rejecting any merge
/// that makes a property violated that was not violated before. Runs to a
/// fixpoint; unreachable states are dropped and ids are compacted in order.
Automaton merge(const Automaton& automaton, const MinedPropertySet& properties,
                const PuritySet& purity, MergeStats* stats = nullptr);

}  // namespace advspec
