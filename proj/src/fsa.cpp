#include "advspec/fsa.hpp"

#include <algorithm>
#include <deque>
#include <map>

namespace advspec {

// ---------------------------------------------------------------------------
// First step

AcceptorTree::AcceptorTree(const MinedPropertySet& properties, const PuritySet& purity,
                           MinerConstraints constraints)
    : purity_(&purity), constraints_(constraints) {
  order_.build(properties, labels_);
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (purity_->contains(labels_.at(static_cast<int>(i)))) pure_.set(i);
  }
  nodes_.emplace_back();
}

int AcceptorTree::intern(const EventLabel& l) {
  int i = labels_.intern(l);
  if (purity_->contains(l)) pure_.set(static_cast<std::size_t>(i));
  return i;
}

AcceptorTree::NodeId AcceptorTree::raw_child(NodeId n, int label) {
  Node child;
  child.parent = n;
  child.in_label = label;
  nodes_.push_back(std::move(child));
  auto id = static_cast<NodeId>(nodes_.size() - 1);
  nodes_[static_cast<std::size_t>(n)].children.emplace_back(label, id);
  return id;
}

void AcceptorTree::raw_loop(NodeId n, int label) {
  auto& node = nodes_[static_cast<std::size_t>(n)];
  if (node.loops.test(static_cast<std::size_t>(label))) return;
  node.loops.set(static_cast<std::size_t>(label));
  node.loop_order.push_back(label);
}

AcceptorTree::NodeId AcceptorTree::add_child(NodeId n, const EventLabel& label) {
  return raw_child(n, intern(label));
}

void AcceptorTree::add_loop(NodeId n, const EventLabel& label) { raw_loop(n, intern(label)); }

void AcceptorTree::mark_end(NodeId n) { nodes_.at(static_cast<std::size_t>(n)).ends = true; }

std::optional<AcceptorTree::NodeId> AcceptorTree::parent(NodeId n) const {
  auto p = nodes_.at(static_cast<std::size_t>(n)).parent;
  if (p < 0) return std::nullopt;
  return p;
}

namespace {

std::set<EventLabel> to_labels(const DynBits& bits, const LabelTable& labels) {
  std::set<EventLabel> out;
  bits.for_each([&](std::size_t i) { out.insert(labels.at(static_cast<int>(i))); });
  return out;
}

}  // namespace

std::set<EventLabel> AcceptorTree::loops(NodeId n) const {
  return to_labels(nodes_.at(static_cast<std::size_t>(n)).loops, labels_);
}

std::set<EventLabel> AcceptorTree::incoming(NodeId n) const {
  return to_labels(incoming_bits(n), labels_);
}

std::set<EventLabel> AcceptorTree::prefix(NodeId n) const {
  return to_labels(prefix_bits(n), labels_);
}

DynBits AcceptorTree::prefix_bits(NodeId n) const {
  DynBits bits;
  for (NodeId m = n; m >= 0; m = nodes_[static_cast<std::size_t>(m)].parent) {
    const auto& node = nodes_[static_cast<std::size_t>(m)];
    bits.merge(node.loops);
    if (node.in_label >= 0) bits.set(static_cast<std::size_t>(node.in_label));
  }
  return bits;
}

DynBits AcceptorTree::incoming_bits(NodeId n) const {
  DynBits bits = nodes_.at(static_cast<std::size_t>(n)).loops;
  for (NodeId m = n; m > 0;) {
    const auto& node = nodes_[static_cast<std::size_t>(m)];
    if (node.in_label < 0) break;
    bits.set(static_cast<std::size_t>(node.in_label));
    if (as_loop(node.in_label) || !is_pure(node.in_label)) break;
    m = node.parent;
    bits.merge(nodes_[static_cast<std::size_t>(m)].loops);
  }
  return bits;
}

DynBits AcceptorTree::outgoing_bits(NodeId n) const {
  DynBits bits;
  std::vector<NodeId> stack{n};
  while (!stack.empty()) {
    auto m = stack.back();
    stack.pop_back();
    const auto& node = nodes_[static_cast<std::size_t>(m)];
    bits.merge(node.loops);
    for (auto [l, c] : node.children) {
      bits.set(static_cast<std::size_t>(l));
      if (is_pure(l)) stack.push_back(c);
    }
  }
  return bits;
}

DynBits AcceptorTree::subtree_bits(NodeId n) const {
  DynBits bits;
  std::vector<NodeId> stack{n};
  while (!stack.empty()) {
    auto m = stack.back();
    stack.pop_back();
    const auto& node = nodes_[static_cast<std::size_t>(m)];
    bits.merge(node.loops);
    for (auto [l, c] : node.children) {
      bits.set(static_cast<std::size_t>(l));
      stack.push_back(c);
    }
  }
  return bits;
}

bool AcceptorTree::edge_conflicts(const DynBits& prefix, const DynBits& incoming,
                                  int label) const {
  return prefix.intersects(OrderingIndex::row(order_.nf_into, label)) ||
         incoming.intersects(OrderingIndex::row(order_.nif_into, label));
}

bool AcceptorTree::loop_conflicts(const DynBits& prefix, const DynBits& incoming,
                                  const DynBits& outgoing, const DynBits& subtree,
                                  int label) const {
  auto with = [label](DynBits b) {
    b.set(static_cast<std::size_t>(label));
    return b;
  };
  return with(prefix).intersects(OrderingIndex::row(order_.nf_into, label)) ||
         with(incoming).intersects(OrderingIndex::row(order_.nif_into, label)) ||
         with(outgoing).intersects(OrderingIndex::row(order_.nif_from, label)) ||
         with(subtree).intersects(OrderingIndex::row(order_.nf_from, label));
}

bool AcceptorTree::incompatible_at(NodeId n, int label) const {
  const auto& node = nodes_[static_cast<std::size_t>(n)];
  if (as_loop(label)) {
    if (node.loops.test(static_cast<std::size_t>(label))) return false;
    return loop_conflicts(prefix_bits(n), incoming_bits(n), outgoing_bits(n), subtree_bits(n),
                          label);
  }
  return edge_conflicts(prefix_bits(n), incoming_bits(n), label);
}

bool AcceptorTree::has_incompatible_transition(NodeId n, const EventLabel& event) const {
  if (event.is_end) return false;
  int l = labels_.find(event);
  if (l < 0) return false;
  return incompatible_at(n, l);
}

bool AcceptorTree::chain_compatible(NodeId ancestor, std::span<const int> suffix) const {
  if (suffix.empty() || as_loop(suffix.front())) return false;
  DynBits prefix = prefix_bits(ancestor);
  DynBits incoming = incoming_bits(ancestor);
  DynBits outgoing, subtree;
  for (int l : suffix) {
    auto bit = static_cast<std::size_t>(l);
    if (as_loop(l)) {
      if (outgoing.test(bit)) continue;
      if (loop_conflicts(prefix, incoming, outgoing, subtree, l)) return false;
      prefix.set(bit);
      incoming.set(bit);
      outgoing.set(bit);
      subtree.set(bit);
    } else {
      if (edge_conflicts(prefix, incoming, l)) return false;
      prefix.set(bit);
      if (!is_pure(l)) incoming = DynBits{};
      incoming.set(bit);
      outgoing = DynBits{};
      subtree = DynBits{};
    }
  }
  return true;
}

std::optional<AcceptorTree::BranchPoint> AcceptorTree::find_branch_ancestor(
    std::span<const Step> path, const EventLabel& event) const {
  std::vector<int> suffix;
  auto lookup = [&](const EventLabel& l) { return labels_.find(l); };
  int ev = lookup(event);
  for (std::size_t i = path.size(); i-- > 0;) {
    int l = lookup(path[i].label);
    suffix.insert(suffix.begin(), l);
    if (path[i].from == path[i].to) continue;
    std::vector<int> chain = suffix;
    chain.push_back(ev);
    bool known = std::all_of(chain.begin(), chain.end(), [](int x) { return x >= 0; });
    if (known && chain_compatible(path[i].from, chain)) {
      BranchPoint bp{path[i].from, {}};
      for (std::size_t j = i; j < path.size(); ++j) bp.suffix.push_back(path[j].label);
      bp.suffix.push_back(event);
      return bp;
    }
  }
  return std::nullopt;
}

bool AcceptorTree::add_trace(const Trace& trace) {
  ++stats_.traces;
  std::vector<Step> path;
  NodeId cur = root();
  for (const auto& e : trace.events) {
    if (e.is_end) {
      nodes_[static_cast<std::size_t>(cur)].ends = true;
      continue;
    }
    int l = intern(e);
    bool branching = constraints_.compatible_branching;
    if (as_loop(l)) {
      if (!branching || !incompatible_at(cur, l)) {
        raw_loop(cur, l);
        path.push_back({cur, e, cur});
        continue;
      }
    } else {
      NodeId next = -1;
      for (auto [cl, c] : nodes_[static_cast<std::size_t>(cur)].children) {
        if (cl == l) {
          next = c;
          break;
        }
      }
      if (next < 0 && (!branching || !incompatible_at(cur, l))) next = raw_child(cur, l);
      if (next >= 0) {
        path.push_back({cur, e, next});
        cur = next;
        continue;
      }
    }

    auto bp = find_branch_ancestor(path, e);
    if (!bp) {
      ++stats_.skipped_traces;
      stats_.log.push_back("skipped trace (no compatible branch point): " + format_trace(trace));
      return false;
    }
    ++stats_.branches;
    // Drop the trace's steps after the branch point and lay down a fresh chain.
    std::size_t keep = path.size() - (bp->suffix.size() - 1);
    path.resize(keep);
    NodeId node = bp->ancestor;
    for (const auto& lbl : bp->suffix) {
      int li = intern(lbl);
      if (as_loop(li)) {
        raw_loop(node, li);
        path.push_back({node, lbl, node});
      } else {
        NodeId c = raw_child(node, li);
        path.push_back({node, lbl, c});
        node = c;
      }
    }
    cur = node;
  }
  return true;
}

Automaton AcceptorTree::to_automaton() const {
  Automaton a;
  for (std::size_t i = 1; i < nodes_.size(); ++i) a.add_state();
  auto sink = a.add_state(true);
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    auto s = static_cast<Automaton::StateId>(i);
    const auto& node = nodes_[i];
    for (int l : node.loop_order) a.add_transition(s, labels_.at(l), s);
    for (auto [l, c] : node.children) {
      a.add_transition(s, labels_.at(l), static_cast<Automaton::StateId>(c));
    }
    if (node.ends) a.add_transition(s, EventLabel::end(), sink);
  }
  return a;
}

Automaton build_acceptor(std::span<const Trace> traces, const MinedPropertySet& properties,
                         const PuritySet& purity, MinerConstraints constraints,
                         AcceptorStats* stats) {
  if (traces.empty()) throw ConfigError("cannot build an acceptor from an empty trace set");
  AcceptorTree tree(properties, purity, constraints);
  for (const auto& t : traces) tree.add_trace(t);
  if (stats) *stats = tree.stats();
  return tree.to_automaton();
}

// ---------------------------------------------------------------------------
// Graph view used by signatures, violation checks and merging

namespace {

struct Graph {
  std::vector<std::vector<std::pair<int, int>>> out;  // (label, dst), sorted unique
  std::vector<bool> accepting;
  std::vector<bool> alive;
  int initial = 0;

  std::size_t size() const { return out.size(); }

  Graph merged(int s, int r) const {
    Graph g = *this;
    for (std::size_t u = 0; u < g.size(); ++u) {
      bool touched = false;
      for (auto& [l, v] : g.out[u]) {
        if (v == s) {
          v = r;
          touched = true;
        }
      }
      if (touched) normalize(g.out[u]);
    }
    auto& rs = g.out[static_cast<std::size_t>(r)];
    rs.insert(rs.end(), g.out[static_cast<std::size_t>(s)].begin(),
              g.out[static_cast<std::size_t>(s)].end());
    normalize(rs);
    g.out[static_cast<std::size_t>(s)].clear();
    g.alive[static_cast<std::size_t>(s)] = false;
    if (g.accepting[static_cast<std::size_t>(s)]) g.accepting[static_cast<std::size_t>(r)] = true;
    g.accepting[static_cast<std::size_t>(s)] = false;
    if (g.initial == s) g.initial = r;
    return g;
  }

  static void normalize(std::vector<std::pair<int, int>>& v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }

  std::vector<bool> reachable() const {
    std::vector<bool> seen(size(), false);
    std::vector<int> stack{initial};
    seen[static_cast<std::size_t>(initial)] = true;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      for (auto [l, v] : out[static_cast<std::size_t>(u)]) {
        if (!seen[static_cast<std::size_t>(v)]) {
          seen[static_cast<std::size_t>(v)] = true;
          stack.push_back(v);
        }
      }
    }
    return seen;
  }

  std::vector<bool> coreachable() const {
    std::vector<std::vector<int>> rev(size());
    for (std::size_t u = 0; u < size(); ++u) {
      for (auto [l, v] : out[u]) rev[static_cast<std::size_t>(v)].push_back(static_cast<int>(u));
    }
    std::vector<bool> seen(size(), false);
    std::vector<int> stack;
    for (std::size_t u = 0; u < size(); ++u) {
      if (accepting[u] && alive[u]) {
        seen[u] = true;
        stack.push_back(static_cast<int>(u));
      }
    }
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int u : rev[static_cast<std::size_t>(v)]) {
        if (!seen[static_cast<std::size_t>(u)]) {
          seen[static_cast<std::size_t>(u)] = true;
          stack.push_back(u);
        }
      }
    }
    return seen;
  }
};

struct Context {
  LabelTable labels;
  DynBits pure;
  int end_label = -1;
  OrderingIndex order;

  Context(const Automaton& a, const MinedPropertySet& properties, const PuritySet& purity) {
    for (const auto& l : a.alphabet()) labels.intern(l);
    order.build(properties, labels);
    for (const auto& p : properties.properties()) {
      labels.intern(p.a);
      labels.intern(p.b);
    }
    end_label = labels.intern(EventLabel::end());
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (purity.contains(labels.at(static_cast<int>(i)))) pure.set(i);
    }
  }

  bool is_pure(int l) const { return pure.test(static_cast<std::size_t>(l)); }

  Graph graph(const Automaton& a) const {
    Graph g;
    g.out.resize(a.num_states());
    g.accepting.resize(a.num_states());
    g.alive.assign(a.num_states(), true);
    g.initial = static_cast<int>(a.initial());
    for (std::size_t s = 0; s < a.num_states(); ++s) {
      auto id = static_cast<Automaton::StateId>(s);
      g.accepting[s] = a.is_accepting(id);
      for (const auto& e : a.out(id)) {
        g.out[s].emplace_back(labels.find(e.label), static_cast<int>(e.to));
      }
      Graph::normalize(g.out[s]);
    }
    return g;
  }

  Automaton automaton(const Graph& g) const {
    auto reach = g.reachable();
    std::vector<int> remap(g.size(), -1);
    int n = 0;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (g.alive[s] && reach[s]) remap[s] = n++;
    }
    Automaton a;
    for (int i = 1; i < n; ++i) a.add_state();
    a.set_initial(static_cast<Automaton::StateId>(remap[static_cast<std::size_t>(g.initial)]));
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (remap[s] < 0) continue;
      auto id = static_cast<Automaton::StateId>(remap[s]);
      if (g.accepting[s]) a.set_accepting(id);
      for (auto [l, v] : g.out[s]) {
        a.add_transition(id, labels.at(l),
                         static_cast<Automaton::StateId>(remap[static_cast<std::size_t>(v)]));
      }
    }
    return a;
  }

  std::vector<DynBits> signatures(const Graph& g) const {
    const std::size_t n = g.size();
    std::vector<DynBits> prefix(n), incoming(n), outgoing(n);
    bool changed = true;
    auto reach = g.reachable();
    while (changed) {
      changed = false;
      for (std::size_t u = 0; u < n; ++u) {
        if (!reach[u]) continue;
        for (auto [l, v] : g.out[u]) {
          if (l == end_label) continue;
          auto vi = static_cast<std::size_t>(v);
          DynBits p = prefix[u];
          p.set(static_cast<std::size_t>(l));
          changed |= prefix[vi].merge(p);
          if (!incoming[vi].test(static_cast<std::size_t>(l))) {
            incoming[vi].set(static_cast<std::size_t>(l));
            changed = true;
          }
          if (is_pure(l)) changed |= incoming[vi].merge(incoming[u]);
          if (!outgoing[u].test(static_cast<std::size_t>(l))) {
            outgoing[u].set(static_cast<std::size_t>(l));
            changed = true;
          }
          if (is_pure(l)) changed |= outgoing[u].merge(outgoing[vi]);
        }
      }
    }
    std::vector<DynBits> disabled(n);
    for (std::size_t s = 0; s < n; ++s) {
      for (std::size_t x = 0; x < labels.size(); ++x) {
        int xi = static_cast<int>(x);
        if (xi == end_label) continue;
        if (prefix[s].intersects(OrderingIndex::row(order.nf_into, xi)) ||
            incoming[s].intersects(OrderingIndex::row(order.nif_into, xi)) ||
            (is_pure(xi) && outgoing[s].intersects(OrderingIndex::row(order.nif_from, xi)))) {
          disabled[s].set(x);
        }
      }
    }
    return disabled;
  }
};

// Forward reachable monitor-state sets, one 3-bit mask per (state, property).
class ReachSets {
 public:
  ReachSets(const Context& ctx, std::span<const TemporalProperty> props) : nprops_(props.size()) {
    nlabels_ = ctx.labels.size();
    image_.resize(nprops_ * nlabels_ * 8);
    for (std::size_t p = 0; p < nprops_; ++p) {
      const auto& prop = props[p];
      for (std::size_t l = 0; l < nlabels_; ++l) {
        const auto& lbl = ctx.labels.at(static_cast<int>(l));
        bool is_a = lbl == prop.a, is_b = lbl == prop.b;
        bool pure = ctx.is_pure(static_cast<int>(l));
        bool end = lbl.is_end;
        for (unsigned mask = 0; mask < 8; ++mask) {
          std::uint8_t img = 0;
          for (unsigned m = 0; m < 3; ++m) {
            if (!(mask & (1u << m))) continue;
            auto t = PropertyMonitor::step(prop.kind, static_cast<PropertyMonitor::State>(m),
                                           is_a, is_b, pure, end);
            img = static_cast<std::uint8_t>(img | (1u << t));
          }
          image_[(p * nlabels_ + l) * 8 + mask] = img;
        }
      }
    }
  }

  std::size_t nprops() const { return nprops_; }

  std::vector<std::uint8_t> initial(const Graph& g) const {
    std::vector<std::uint8_t> r(g.size() * nprops_, 0);
    for (std::size_t p = 0; p < nprops_; ++p) {
      r[static_cast<std::size_t>(g.initial) * nprops_ + p] = 1;
    }
    return r;
  }

  // Propagates to a fixpoint from the given dirty states. When `stop_on_bad`,
  // returns false as soon as a bad monitor state appears at a co-reachable
  // state.
  bool propagate(const Graph& g, std::vector<std::uint8_t>& r, std::deque<int> work,
                 const std::vector<bool>& coreach, bool stop_on_bad) const {
    std::vector<char> queued(g.size(), 0);
    for (int u : work) queued[static_cast<std::size_t>(u)] = 1;
    constexpr std::uint8_t bad = 1u << PropertyMonitor::kBad;
    if (stop_on_bad) {
      for (int u : work) {
        if (!coreach[static_cast<std::size_t>(u)]) continue;
        for (std::size_t p = 0; p < nprops_; ++p) {
          if (r[static_cast<std::size_t>(u) * nprops_ + p] & bad) return false;
        }
      }
    }
    while (!work.empty()) {
      int u = work.front();
      work.pop_front();
      auto ui = static_cast<std::size_t>(u);
      queued[ui] = 0;
      for (auto [l, v] : g.out[ui]) {
        auto vi = static_cast<std::size_t>(v);
        bool grew = false;
        for (std::size_t p = 0; p < nprops_; ++p) {
          auto mask = r[ui * nprops_ + p];
          if (!mask) continue;
          auto img = image_[(p * nlabels_ + static_cast<std::size_t>(l)) * 8 + mask];
          auto& dst = r[vi * nprops_ + p];
          auto merged = static_cast<std::uint8_t>(dst | img);
          if (merged != dst) {
            if (stop_on_bad && (merged & bad) && coreach[vi]) return false;
            dst = merged;
            grew = true;
          }
        }
        if (grew && !queued[vi]) {
          queued[vi] = 1;
          work.push_back(v);
        }
      }
    }
    return true;
  }

  std::vector<bool> violated(const Graph& g, const std::vector<std::uint8_t>& r) const {
    auto coreach = g.coreachable();
    std::vector<bool> out(nprops_, false);
    constexpr std::uint8_t bad = 1u << PropertyMonitor::kBad;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!coreach[s]) continue;
      for (std::size_t p = 0; p < nprops_; ++p) {
        if (r[s * nprops_ + p] & bad) out[p] = true;
      }
    }
    return out;
  }

 private:
  std::size_t nprops_;
  std::size_t nlabels_;
  std::vector<std::uint8_t> image_;
};

std::vector<bool> violation_vector(const Context& ctx, const Graph& g,
                                   std::span<const TemporalProperty> props) {
  ReachSets rs(ctx, props);
  auto r = rs.initial(g);
  rs.propagate(g, r, {g.initial}, g.coreachable(), false);
  return rs.violated(g, r);
}

}  // namespace

std::set<EventLabel> disabled_events(const Automaton& automaton, Automaton::StateId s,
                                     const MinedPropertySet& properties, const PuritySet& purity) {
  Context ctx(automaton, properties, purity);
  auto g = ctx.graph(automaton);
  auto sig = ctx.signatures(g);
  return to_labels(sig.at(s), ctx.labels);
}

bool automaton_violates(const Automaton& automaton, const TemporalProperty& property,
                        const PuritySet& purity) {
  MinedPropertySet one;
  one.support.emplace(property, 1);
  Context ctx(automaton, one, purity);
  auto g = ctx.graph(automaton);
  std::vector<TemporalProperty> props{property};
  return violation_vector(ctx, g, props)[0];
}

std::vector<TemporalProperty> violated_properties(const Automaton& automaton,
                                                  const MinedPropertySet& properties,
                                                  const PuritySet& purity) {
  Context ctx(automaton, properties, purity);
  auto g = ctx.graph(automaton);
  auto props = properties.properties();
  auto v = violation_vector(ctx, g, props);
  std::vector<TemporalProperty> out;
  for (std::size_t i = 0; i < props.size(); ++i) {
    if (v[i]) out.push_back(props[i]);
  }
  return out;
}

Automaton merge(const Automaton& automaton, const MinedPropertySet& properties,
                const PuritySet& purity, MergeStats* stats) {
  Context ctx(automaton, properties, purity);
  Graph g = ctx.graph(automaton);
  MergeStats st;
  st.states_before = automaton.num_states();

  auto all = properties.properties();
  auto baseline = violation_vector(ctx, g, all);
  std::vector<TemporalProperty> watched;
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (!baseline[i]) watched.push_back(all[i]);
  }
  ReachSets rs(ctx, watched);
  auto reach = rs.initial(g);
  rs.propagate(g, reach, {g.initial}, g.coreachable(), false);

  // Merging keeps every co-reachable state co-reachable, so a bad monitor
  // state sitting on a dead end only matters if dead ends exist.
  auto has_dead_ends = [](const Graph& gr) {
    auto live = gr.reachable();
    auto co = gr.coreachable();
    for (std::size_t s = 0; s < gr.size(); ++s) {
      if (gr.alive[s] && live[s] && !co[s]) return true;
    }
    return false;
  };
  auto any_bad = [&](const Graph& gr, const std::vector<std::uint8_t>& r) {
    auto v = rs.violated(gr, r);
    return std::find(v.begin(), v.end(), true) != v.end();
  };

  for (;;) {
    ++st.rounds;
    auto sig = ctx.signatures(g);
    auto live = g.reachable();
    std::map<std::vector<std::uint64_t>, std::vector<int>> reps;
    bool merged_any = false;
    for (std::size_t s = 0; s < g.size(); ++s) {
      if (!g.alive[s] || !live[s] || g.accepting[s]) continue;
      auto& group = reps[sig[s].key()];
      bool merged = false;
      for (int r : group) {
        if (!g.alive[static_cast<std::size_t>(r)]) continue;
        Graph h = g.merged(static_cast<int>(s), r);
        auto hr = reach;
        auto ri = static_cast<std::size_t>(r);
        for (std::size_t p = 0; p < rs.nprops(); ++p) {
          hr[ri * rs.nprops() + p] |= hr[s * rs.nprops() + p];
          hr[s * rs.nprops() + p] = 0;
        }
        bool ok = rs.propagate(h, hr, {r}, h.coreachable(), true);
        if (ok && has_dead_ends(g)) ok = !any_bad(h, hr);
        if (ok) {
          g = std::move(h);
          reach = std::move(hr);
          merged = true;
          merged_any = true;
          ++st.merges;
          break;
        }
        ++st.vetoes;
      }
      if (!merged) group.push_back(static_cast<int>(s));
    }
    if (!merged_any) break;
  }

  Automaton out = ctx.automaton(g);
  st.states_after = out.num_states();
  if (stats) *stats = st;
  return out;
}

}  // namespace advspec
