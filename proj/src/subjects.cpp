#include "advspec/subjects.hpp"

#include <algorithm>
#include <array>
#include <map>
#include <set>
#include <sstream>

namespace advspec {

const ActionDescriptor* Subject::find_action(std::string_view action) const {
  for (const auto& a : alphabet()) {
    if (a.action == action) return &a;
  }
  return nullptr;
}

std::vector<EventLabel> Subject::labels() const {
  std::set<EventLabel> out;
  for (const auto& a : alphabet()) {
    for (auto& l : labels_of(a)) out.insert(std::move(l));
  }
  return {out.begin(), out.end()};
}

int TestCase::instance_count() const {
  int n = 0;
  for (const auto& inv : invocations) n = std::max(n, inv.instance + 1);
  return n;
}

std::string format_test(const TestCase& test) {
  std::ostringstream os;
  for (std::size_t i = 0; i < test.invocations.size(); ++i) {
    const auto& inv = test.invocations[i];
    if (i) os << "; ";
    os << 'o' << inv.instance << '.' << inv.action << '(' << inv.arg_seed << ')';
  }
  return os.str();
}

nlohmann::json test_to_json(const TestCase& test) {
  auto arr = nlohmann::json::array();
  for (const auto& inv : test.invocations) {
    arr.push_back({{"instance", inv.instance}, {"action", inv.action}, {"arg", inv.arg_seed}});
  }
  return arr;
}

namespace {

void validate_subject(const Subject& subject) {
  const auto& alpha = subject.alphabet();
  if (alpha.empty()) throw ConfigError("subject '" + subject.name() + "' has an empty alphabet");
  std::set<std::string> names;
  bool has_ctor = false;
  for (const auto& a : alpha) {
    if (!names.insert(a.action).second) {
      throw ConfigError("subject '" + subject.name() + "' declares '" + a.action + "' twice");
    }
    has_ctor |= a.is_constructor;
  }
  if (!has_ctor) throw ConfigError("subject '" + subject.name() + "' has no constructor");
}

std::int64_t pick(std::int64_t seed, std::size_t pool) {
  auto m = static_cast<std::int64_t>(pool);
  return ((seed % m) + m) % m;
}

}  // namespace

ExecutionResult execute(const Subject& subject, const TestCase& test, std::uint64_t seed) {
  validate_subject(subject);
  ExecutionResult result;
  const int n = test.instance_count();
  std::vector<std::unique_ptr<SubjectInstance>> objects(static_cast<std::size_t>(n));
  std::vector<Trace> traces(static_cast<std::size_t>(n));
  std::vector<bool> raised(static_cast<std::size_t>(n), false);
  result.outcomes.reserve(test.size());

  for (const auto& inv : test.invocations) {
    const auto* action = subject.find_action(inv.action);
    if (!action) {
      throw ConfigError("unknown action '" + inv.action + "' for subject '" + subject.name() +
                        "'");
    }
    if (inv.instance < 0) throw ConfigError("negative instance id in test");
    auto i = static_cast<std::size_t>(inv.instance);
    std::int64_t arg = inv.arg_seed + static_cast<std::int64_t>(seed);
    if (raised[i] || (action->is_constructor == (objects[i] != nullptr))) {
      result.outcomes.push_back(Outcome::Skipped);
      continue;
    }
    try {
      if (action->is_constructor) {
        objects[i] = subject.construct(arg);
        traces[i].events.push_back(EventLabel::of(action->action));
      } else {
        auto ret = objects[i]->invoke(action->action, arg);
        if (action->returns_boolean && ret) {
          traces[i].events.push_back(EventLabel::of(action->action, *ret));
        } else {
          traces[i].events.push_back(EventLabel::of(action->action));
        }
      }
      result.outcomes.push_back(Outcome::Normal);
    } catch (const SubjectException&) {
      raised[i] = true;
      result.outcomes.push_back(Outcome::Raised);
    }
  }

  for (std::size_t i = 0; i < objects.size(); ++i) {
    if (objects[i]) result.leaked += objects[i]->leaked();
    if (traces[i].empty() && !objects[i]) continue;
    if (!raised[i]) traces[i].events.push_back(EventLabel::end());
    result.traces.push_back(std::move(traces[i]));
  }
  return result;
}

std::vector<Trace> sanitize(const ExecutionResult& result) {
  std::vector<Trace> out;
  if (result.leaked > 0) return out;
  for (const auto& t : result.traces) {
    Trace b(body(t));
    if (b.empty()) continue;
    b.events.push_back(EventLabel::end());
    out.push_back(std::move(b));
  }
  return out;
}

std::vector<Trace> sanitize(std::span<const ExecutionResult> results) {
  std::vector<Trace> out;
  for (const auto& r : results) {
    auto t = sanitize(r);
    out.insert(out.end(), std::make_move_iterator(t.begin()), std::make_move_iterator(t.end()));
  }
  return out;
}

TestCase normalize_test(const Subject& subject, const TestCase& test, std::size_t max_length) {
  TestCase out;
  std::map<int, int> renumber;
  for (const auto& inv : test.invocations) {
    if (out.size() >= max_length) break;
    const auto* action = subject.find_action(inv.action);
    if (!action) continue;
    auto it = renumber.find(inv.instance);
    if (action->is_constructor) {
      if (it != renumber.end()) continue;
      int id = static_cast<int>(renumber.size());
      renumber.emplace(inv.instance, id);
      out.invocations.push_back({id, inv.action, inv.arg_seed});
    } else {
      if (it == renumber.end()) continue;
      out.invocations.push_back({it->second, inv.action, inv.arg_seed});
    }
  }
  return out;
}

TestCase random_test(const Subject& subject, std::mt19937_64& rng, std::size_t length,
                     int instances) {
  validate_subject(subject);
  std::vector<const ActionDescriptor*> ctors, methods;
  for (const auto& a : subject.alphabet()) (a.is_constructor ? ctors : methods).push_back(&a);
  std::uniform_int_distribution<std::int64_t> arg(0, 1023);
  TestCase t;
  instances = std::max(1, instances);
  for (int i = 0; i < instances && t.size() < std::max<std::size_t>(length, 1); ++i) {
    const auto* c = ctors[std::uniform_int_distribution<std::size_t>(0, ctors.size() - 1)(rng)];
    t.invocations.push_back({i, c->action, arg(rng)});
  }
  while (t.size() < length && !methods.empty()) {
    int inst = std::uniform_int_distribution<int>(0, instances - 1)(rng);
    const auto* m =
        methods[std::uniform_int_distribution<std::size_t>(0, methods.size() - 1)(rng)];
    t.invocations.push_back({inst, m->action, arg(rng)});
  }
  return t;
}

// ---------------------------------------------------------------------------
// Built-in subjects

namespace {

ActionDescriptor ctor(int arity) {
  return ActionDescriptor{Subject::kConstructor, false, true, false, arity};
}

ActionDescriptor method(std::string name, bool pure, bool boolean, int arity = 0) {
  return ActionDescriptor{std::move(name), pure, false, boolean, arity};
}

using S = Automaton::StateId;

class BoundedStack final : public Subject {
 public:
  static constexpr std::array<int, 3> kCapacities{1, 2, 3};

  std::string name() const override { return "BoundedStack"; }

  const std::vector<ActionDescriptor>& alphabet() const override {
    static const std::vector<ActionDescriptor> a{
        ctor(1),
        method("push", false, true, 1),
        method("pop", false, false),
        method("top", true, false),
        method("isEmpty", true, true),
        method("isFull", true, true),
        method("makeEmpty", false, false),
    };
    return a;
  }

  std::unique_ptr<SubjectInstance> construct(std::int64_t arg) const override {
    return std::make_unique<Instance>(kCapacities[static_cast<std::size_t>(pick(arg, 3))]);
  }

  std::optional<Automaton> ground_truth() const override {
    Automaton a;
    std::map<std::pair<int, int>, S> st;
    for (int c : kCapacities) {
      for (int s = 0; s <= c; ++s) st[{c, s}] = a.add_state();
    }
    S sink = a.add_state(true);
    for (int c : kCapacities) {
      a.add_transition(a.initial(), EventLabel::of(kConstructor), st[{c, 0}]);
      for (int s = 0; s <= c; ++s) {
        S q = st[{c, s}];
        if (s < c) a.add_transition(q, EventLabel::of("push", true), st[{c, s + 1}]);
        if (s > 0) {
          a.add_transition(q, EventLabel::of("pop"), st[{c, s - 1}]);
          a.add_transition(q, EventLabel::of("top"), q);
        }
        a.add_transition(q, EventLabel::of("isEmpty", s == 0), q);
        a.add_transition(q, EventLabel::of("isFull", s == c), q);
        a.add_transition(q, EventLabel::of("makeEmpty"), st[{c, 0}]);
        a.add_transition(q, EventLabel::end(), sink);
      }
    }
    return a;
  }

 private:
  class Instance final : public SubjectInstance {
   public:
    explicit Instance(int capacity) : capacity_(capacity) {}
    std::optional<bool> invoke(const std::string& action, std::int64_t arg) override {
      if (action == "push") {
        if (static_cast<int>(items_.size()) >= capacity_) throw SubjectException("overflow");
        items_.push_back(arg);
        return true;
      }
      if (action == "pop") {
        if (items_.empty()) throw SubjectException("underflow");
        items_.pop_back();
        return std::nullopt;
      }
      if (action == "top") {
        if (items_.empty()) throw SubjectException("underflow");
        return std::nullopt;
      }
      if (action == "isEmpty") return items_.empty();
      if (action == "isFull") return static_cast<int>(items_.size()) >= capacity_;
      if (action == "makeEmpty") {
        items_.clear();
        return std::nullopt;
      }
      throw ConfigError("BoundedStack has no action '" + action + "'");
    }

   private:
    int capacity_;
    std::vector<std::int64_t> items_;
  };
};

class Tokenizer final : public Subject {
 public:
  static constexpr std::array<std::string_view, 4> kInputs{"", "a", "a b", "a b c"};

  std::string name() const override { return "Tokenizer"; }

  const std::vector<ActionDescriptor>& alphabet() const override {
    static const std::vector<ActionDescriptor> a{
        ctor(1),
        method("hasMoreTokens", true, true),
        method("nextToken", false, false),
    };
    return a;
  }

  std::unique_ptr<SubjectInstance> construct(std::int64_t arg) const override {
    return std::make_unique<Instance>(kInputs[static_cast<std::size_t>(pick(arg, 4))]);
  }

  std::optional<Automaton> ground_truth() const override {
    Automaton a;
    S more = a.add_state();
    S none = a.add_state();
    S sink = a.add_state(true);
    a.add_transition(a.initial(), EventLabel::of(kConstructor), more);
    a.add_transition(a.initial(), EventLabel::of(kConstructor), none);
    a.add_transition(more, EventLabel::of("hasMoreTokens", true), more);
    a.add_transition(more, EventLabel::of("nextToken"), more);
    a.add_transition(more, EventLabel::of("nextToken"), none);
    a.add_transition(more, EventLabel::end(), sink);
    a.add_transition(none, EventLabel::of("hasMoreTokens", false), none);
    a.add_transition(none, EventLabel::end(), sink);
    return a;
  }

 private:
  class Instance final : public SubjectInstance {
   public:
    explicit Instance(std::string_view input) {
      std::istringstream is{std::string(input)};
      std::string tok;
      while (is >> tok) ++remaining_;
    }
    std::optional<bool> invoke(const std::string& action, std::int64_t) override {
      if (action == "hasMoreTokens") return remaining_ > 0;
      if (action == "nextToken") {
        if (remaining_ == 0) throw SubjectException("no such element");
        --remaining_;
        return std::nullopt;
      }
      throw ConfigError("Tokenizer has no action '" + action + "'");
    }

   private:
    int remaining_ = 0;
  };
};

class KeyedStore final : public Subject {
 public:
  static constexpr std::array<std::string_view, 2> kKeys{"k0", "k1"};

  std::string name() const override { return "KeyedStore"; }

  const std::vector<ActionDescriptor>& alphabet() const override {
    static const std::vector<ActionDescriptor> a{
        ctor(0),
        method("put", false, false, 1),
        method("get", true, true, 1),
        method("remove", false, true, 1),
        method("isEmpty", true, true),
        method("clear", false, false),
    };
    return a;
  }

  std::unique_ptr<SubjectInstance> construct(std::int64_t) const override {
    return std::make_unique<Instance>();
  }

  std::optional<Automaton> ground_truth() const override {
    Automaton a;
    std::array<S, 3> size{a.add_state(), a.add_state(), a.add_state()};
    S sink = a.add_state(true);
    a.add_transition(a.initial(), EventLabel::of(kConstructor), size[0]);
    for (int n = 0; n < 3; ++n) {
      S q = size[static_cast<std::size_t>(n)];
      a.add_transition(q, EventLabel::of("isEmpty", n == 0), q);
      a.add_transition(q, EventLabel::of("clear"), size[0]);
      a.add_transition(q, EventLabel::end(), sink);
      if (n < 2) {
        a.add_transition(q, EventLabel::of("get", false), q);
        a.add_transition(q, EventLabel::of("remove", false), q);
        a.add_transition(q, EventLabel::of("put"), size[static_cast<std::size_t>(n + 1)]);
      }
      if (n > 0) {
        a.add_transition(q, EventLabel::of("get", true), q);
        a.add_transition(q, EventLabel::of("remove", true), size[static_cast<std::size_t>(n - 1)]);
        a.add_transition(q, EventLabel::of("put"), q);
      }
    }
    return a;
  }

 private:
  class Instance final : public SubjectInstance {
   public:
    std::optional<bool> invoke(const std::string& action, std::int64_t arg) override {
      std::string key(kKeys[static_cast<std::size_t>(pick(arg, kKeys.size()))]);
      if (action == "put") {
        keys_.insert(key);
        return std::nullopt;
      }
      if (action == "get") return keys_.contains(key);
      if (action == "remove") return keys_.erase(key) > 0;
      if (action == "isEmpty") return keys_.empty();
      if (action == "clear") {
        keys_.clear();
        return std::nullopt;
      }
      throw ConfigError("KeyedStore has no action '" + action + "'");
    }

   private:
    std::set<std::string> keys_;
  };
};

class Connection final : public Subject {
 public:
  std::string name() const override { return "Connection"; }

  const std::vector<ActionDescriptor>& alphabet() const override {
    static const std::vector<ActionDescriptor> a{
        ctor(0),
        method("connect", false, false),
        method("send", false, false, 1),
        method("close", false, false),
        method("isConnected", true, true),
    };
    return a;
  }

  std::unique_ptr<SubjectInstance> construct(std::int64_t) const override {
    return std::make_unique<Instance>();
  }

  std::optional<Automaton> ground_truth() const override {
    Automaton a;
    S fresh = a.add_state();
    S open = a.add_state();
    S closed = a.add_state();
    S sink = a.add_state(true);
    a.add_transition(a.initial(), EventLabel::of(kConstructor), fresh);
    a.add_transition(fresh, EventLabel::of("connect"), open);
    a.add_transition(fresh, EventLabel::of("close"), closed);
    a.add_transition(fresh, EventLabel::of("isConnected", false), fresh);
    a.add_transition(fresh, EventLabel::end(), sink);
    a.add_transition(open, EventLabel::of("send"), open);
    a.add_transition(open, EventLabel::of("isConnected", true), open);
    a.add_transition(open, EventLabel::of("close"), closed);
    a.add_transition(closed, EventLabel::of("close"), closed);
    a.add_transition(closed, EventLabel::of("isConnected", false), closed);
    a.add_transition(closed, EventLabel::end(), sink);
    return a;
  }

 private:
  class Instance final : public SubjectInstance {
   public:
    std::optional<bool> invoke(const std::string& action, std::int64_t) override {
      if (action == "connect") {
        if (state_ != State::Fresh) throw SubjectException("already connected or closed");
        state_ = State::Open;
        return std::nullopt;
      }
      if (action == "send") {
        if (state_ != State::Open) throw SubjectException("not connected");
        return std::nullopt;
      }
      if (action == "close") {
        state_ = State::Closed;
        return std::nullopt;
      }
      if (action == "isConnected") return state_ == State::Open;
      throw ConfigError("Connection has no action '" + action + "'");
    }
    int leaked() const override { return state_ == State::Open ? 1 : 0; }

   private:
    enum class State { Fresh, Open, Closed };
    State state_ = State::Fresh;
  };
};

class EmptySubject final : public Subject {
 public:
  std::string name() const override { return "Empty"; }
  const std::vector<ActionDescriptor>& alphabet() const override {
    static const std::vector<ActionDescriptor> a;
    return a;
  }
  std::unique_ptr<SubjectInstance> construct(std::int64_t) const override {
    throw ConfigError("empty subject cannot be constructed");
  }
};

const std::vector<std::unique_ptr<Subject>>& registry() {
  static const auto subjects = [] {
    std::vector<std::unique_ptr<Subject>> v;
    v.push_back(std::make_unique<BoundedStack>());
    v.push_back(std::make_unique<Tokenizer>());
    v.push_back(std::make_unique<KeyedStore>());
    v.push_back(std::make_unique<Connection>());
    return v;
  }();
  return subjects;
}

}  // namespace

const Subject& find_subject(std::string_view name) {
  for (const auto& s : registry()) {
    if (s->name() == name) return *s;
  }
  throw ConfigError("unknown subject '" + std::string(name) + "'");
}

std::vector<std::string> subject_names() {
  std::vector<std::string> out;
  for (const auto& s : registry()) out.push_back(s->name());
  return out;
}

nlohmann::json subject_metadata(const Subject& subject) {
  nlohmann::json j;
  j["name"] = subject.name();
  auto actions = nlohmann::json::array();
  auto purity = subject.purity();
  for (const auto& a : subject.alphabet()) {
    actions.push_back({{"action", a.action},
                       {"pure", purity.contains_action(a.action)},
                       {"constructor", a.is_constructor},
                       {"boolean", a.returns_boolean},
                       {"arity", a.arg_arity}});
  }
  j["actions"] = actions;
  auto labels = nlohmann::json::array();
  for (const auto& l : subject.labels()) labels.push_back(l.str());
  j["labels"] = labels;
  j["has_ground_truth"] = subject.ground_truth().has_value();
  return j;
}

std::unique_ptr<Subject> make_empty_subject() { return std::make_unique<EmptySubject>(); }

}  // namespace advspec
