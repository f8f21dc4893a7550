#include "advspec/search.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <limits>
#include <set>
#include <stdexcept>
#include <thread>

namespace advspec {

SearchGoal SearchGoal::for_method(EventLabel label) {
  SearchGoal g;
  g.kind = GoalKind::Method;
  g.method = std::move(label);
  return g;
}

SearchGoal SearchGoal::for_property(TemporalProperty property) {
  SearchGoal g;
  g.kind = GoalKind::Counterexample;
  g.property = std::move(property);
  return g;
}

std::string SearchGoal::str() const {
  if (kind == GoalKind::Method) return "Method(" + method.str() + ")";
  return "CounterExample(" + std::string(kind_name(property.kind)) + ", " + property.a.str() +
         ", " + property.b.str() + ")";
}

bool SearchGoal::matches(const EventLabel& event) const {
  if (kind != GoalKind::Method || event.is_end) return false;
  if (!method.returned) return event.action == method.action;
  return event == method;
}

std::string_view state_name(GoalState s) {
  switch (s) {
    case GoalState::Untargeted: return "untargeted";
    case GoalState::Targeted: return "targeted";
    case GoalState::Covered: return "covered";
    case GoalState::Abandoned: return "abandoned";
  }
  return "?";
}

bool legal_transition(GoalState from, GoalState to) {
  switch (from) {
    case GoalState::Untargeted: return to == GoalState::Targeted || to == GoalState::Covered;
    case GoalState::Targeted: return to == GoalState::Covered || to == GoalState::Abandoned;
    default: return false;
  }
}

// ---------------------------------------------------------------------------
// Fitness

namespace {

double bucket(const TemporalProperty& p, const Trace& t, const PuritySet& purity) {
  auto v = check(p, t, purity);
  if (v.falsified) return kFalsifies;
  if (v.supported) return kSupports;
  for (const auto& e : t.events) {
    if (e == p.a || e == p.b) return kMentions;
  }
  return kIrrelevant;
}

Trace reversed_body(const Trace& t) {
  auto ev = body(t);
  std::reverse(ev.begin(), ev.end());
  return Trace(std::move(ev));
}

}  // namespace

double always_property_fitness(const Trace& trace, const TemporalProperty& property,
                               const PuritySet& purity) {
  switch (property.kind) {
    case PropertyKind::NIF:
      throw std::invalid_argument("always_property_fitness does not handle NIF");
    case PropertyKind::AF:
      // AP(x, x) is never falsified, so the duality needs a != b.
      if (property.a == property.b) return bucket(property, trace, purity);
      return bucket({PropertyKind::AP, property.a, property.b}, reversed_body(trace), purity);
    case PropertyKind::AIF:
      return bucket({PropertyKind::AIP, property.a, property.b}, reversed_body(trace), purity);
    default:
      return bucket(property, trace, purity);
  }
}

double nif_fitness(const Trace& trace, const TemporalProperty& property, const PuritySet& purity) {
  const auto ev = body(trace);
  bool seen_a = false;
  std::size_t counter = 0;
  std::size_t distance = std::numeric_limits<std::size_t>::max();
  for (const auto& e : ev) {
    if (seen_a && e == property.b) distance = std::min(distance, counter);
    if (e == property.a) {
      seen_a = true;
      counter = 0;
    } else if (seen_a && !purity.contains(e)) {
      ++counter;
    }
  }
  if (distance == 0) return 0.0;
  if (!seen_a || distance == std::numeric_limits<std::size_t>::max()) return 1.0;
  return std::min(1.0, static_cast<double>(distance) / static_cast<double>(ev.size()));
}

double trace_fitness(const Trace& trace, const SearchGoal& goal, const PuritySet& purity) {
  if (goal.kind == GoalKind::Method) {
    for (const auto& e : trace.events) {
      if (goal.matches(e)) return 0.0;
    }
    return 1.0;
  }
  if (goal.property.kind == PropertyKind::NIF) return nif_fitness(trace, goal.property, purity);
  return always_property_fitness(trace, goal.property, purity);
}

double test_fitness(std::span<const Trace> traces, const SearchGoal& goal,
                    const PuritySet& purity) {
  double best = 1.0;
  for (const auto& t : traces) best = std::min(best, trace_fitness(t, goal, purity));
  return best;
}

// ---------------------------------------------------------------------------
// Goal dependencies

int GoalDependencyGraph::index_of(const SearchGoal& g) const {
  auto it = std::find(goals.begin(), goals.end(), g);
  return it == goals.end() ? -1 : static_cast<int>(it - goals.begin());
}

namespace {

bool requires_transitively(const std::vector<std::vector<int>>& pre, int from, int target) {
  std::vector<char> seen(pre.size(), 0);
  std::vector<int> stack{from};
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    if (u == target) return true;
    if (seen[static_cast<std::size_t>(u)]) continue;
    seen[static_cast<std::size_t>(u)] = 1;
    for (int v : pre[static_cast<std::size_t>(u)]) stack.push_back(v);
  }
  return false;
}

}  // namespace

bool GoalDependencyGraph::acyclic() const {
  std::vector<int> color(goals.size(), 0);
  std::function<bool(int)> visit = [&](int u) {
    color[static_cast<std::size_t>(u)] = 1;
    for (int v : prerequisites[static_cast<std::size_t>(u)]) {
      if (color[static_cast<std::size_t>(v)] == 1) return false;
      if (color[static_cast<std::size_t>(v)] == 0 && !visit(v)) return false;
    }
    color[static_cast<std::size_t>(u)] = 2;
    return true;
  };
  for (std::size_t u = 0; u < goals.size(); ++u) {
    if (color[u] == 0 && !visit(static_cast<int>(u))) return false;
  }
  return true;
}

GoalDependencyGraph build_goal_dependencies(const MinedPropertySet& properties,
                                            std::span<const EventLabel> extra_methods) {
  GoalDependencyGraph g;
  std::map<SearchGoal, int> index;
  auto ensure = [&](const SearchGoal& goal) {
    auto [it, inserted] = index.emplace(goal, static_cast<int>(g.goals.size()));
    if (inserted) {
      g.goals.push_back(goal);
      g.prerequisites.emplace_back();
    }
    return it->second;
  };
  auto require = [&](int goal, int pre) {
    auto& v = g.prerequisites[static_cast<std::size_t>(goal)];
    if (goal == pre || std::find(v.begin(), v.end(), pre) != v.end()) return;
    if (requires_transitively(g.prerequisites, pre, goal)) {
      g.dropped_edges.push_back(g.goals[static_cast<std::size_t>(goal)].str() + " requires " +
                                g.goals[static_cast<std::size_t>(pre)].str());
      return;
    }
    v.push_back(pre);
  };

  for (const auto& m : extra_methods) ensure(SearchGoal::for_method(m));
  for (const auto& p : properties.properties()) {
    int ma = ensure(SearchGoal::for_method(p.a));
    int mb = ensure(SearchGoal::for_method(p.b));
    int ce = ensure(SearchGoal::for_property(p));
    if (p.kind == PropertyKind::AP || p.kind == PropertyKind::AIP) {
      require(mb, ma);
      require(ce, mb);
    } else {
      require(ce, ma);
    }
  }
  return g;
}

// ---------------------------------------------------------------------------
// Ranking

std::vector<std::vector<int>> rank(const std::vector<std::vector<double>>& fitness,
                                   std::span<const std::size_t> lengths,
                                   std::span<const int> targeted) {
  const int n = static_cast<int>(fitness.size());
  auto by_length = [&](int x, int y) {
    auto lx = lengths[static_cast<std::size_t>(x)], ly = lengths[static_cast<std::size_t>(y)];
    return lx != ly ? lx < ly : x < y;
  };
  std::vector<std::vector<int>> fronts;
  if (n == 0) return fronts;

  std::vector<char> placed(static_cast<std::size_t>(n), 0);
  std::vector<int> front0;
  for (int g : targeted) {
    int best = -1;
    for (int t = 0; t < n; ++t) {
      if (best < 0) {
        best = t;
        continue;
      }
      double ft = fitness[static_cast<std::size_t>(t)][static_cast<std::size_t>(g)];
      double fb = fitness[static_cast<std::size_t>(best)][static_cast<std::size_t>(g)];
      if (ft < fb || (ft == fb && by_length(t, best))) best = t;
    }
    if (!placed[static_cast<std::size_t>(best)]) {
      placed[static_cast<std::size_t>(best)] = 1;
      front0.push_back(best);
    }
  }
  if (!front0.empty()) {
    std::sort(front0.begin(), front0.end(), by_length);
    fronts.push_back(std::move(front0));
  }

  std::vector<int> rest;
  for (int t = 0; t < n; ++t) {
    if (!placed[static_cast<std::size_t>(t)]) rest.push_back(t);
  }
  auto dominates = [&](int x, int y) {
    bool strict = false;
    for (int g : targeted) {
      double fx = fitness[static_cast<std::size_t>(x)][static_cast<std::size_t>(g)];
      double fy = fitness[static_cast<std::size_t>(y)][static_cast<std::size_t>(g)];
      if (fx > fy) return false;
      if (fx < fy) strict = true;
    }
    return strict;
  };
  const std::size_t m = rest.size();
  std::vector<std::vector<std::size_t>> dominated(m);
  std::vector<std::size_t> count(m, 0);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) {
      if (dominates(rest[i], rest[j])) {
        dominated[i].push_back(j);
        ++count[j];
      } else if (dominates(rest[j], rest[i])) {
        dominated[j].push_back(i);
        ++count[i];
      }
    }
  }
  std::vector<std::size_t> current;
  for (std::size_t i = 0; i < m; ++i) {
    if (count[i] == 0) current.push_back(i);
  }
  while (!current.empty()) {
    std::vector<int> front;
    std::vector<std::size_t> next;
    for (auto i : current) {
      front.push_back(rest[i]);
      for (auto j : dominated[i]) {
        if (--count[j] == 0) next.push_back(j);
      }
    }
    std::sort(front.begin(), front.end(), by_length);
    fronts.push_back(std::move(front));
    current = std::move(next);
  }
  return fronts;
}

// ---------------------------------------------------------------------------
// Archive

bool Archive::update(int goal, const TestCase& test, std::span<const Trace> traces,
                     double fitness) {
  if (fitness != 0.0) return false;
  auto it = entries_.find(goal);
  if (it != entries_.end() && it->second.test.size() <= test.size()) return false;
  entries_[goal] = Entry{test, std::vector<Trace>(traces.begin(), traces.end())};
  return true;
}

const TestCase* Archive::test(int goal) const {
  auto it = entries_.find(goal);
  return it == entries_.end() ? nullptr : &it->second.test;
}

const std::vector<Trace>* Archive::traces(int goal) const {
  auto it = entries_.find(goal);
  return it == entries_.end() ? nullptr : &it->second.traces;
}

// ---------------------------------------------------------------------------
// Variation operators

void SearchConfig::validate() const {
  if (max_generations == 0 && time_budget_seconds <= 0.0) {
    throw ConfigError("search budget must be positive (generations or seconds)");
  }
  if (time_budget_seconds < 0.0) throw ConfigError("time budget must not be negative");
  if (population_size < 2) throw ConfigError("population size must be at least 2");
  if (crossover_rate < 0.0 || crossover_rate > 1.0) {
    throw ConfigError("crossover rate must lie in [0, 1]");
  }
  if (tournament_size < 1) throw ConfigError("tournament size must be positive");
  if (abandon_age < 1 || reset_stagnation < 1) {
    throw ConfigError("abandon age and reset threshold must be positive");
  }
  if (max_test_length < 2) throw ConfigError("max test length must be at least 2");
  if (max_instances < 1) throw ConfigError("max instances must be positive");
  if (initial_min_length < 1 || initial_max_length < initial_min_length) {
    throw ConfigError("invalid initial test length range");
  }
  if (threads < 1) throw ConfigError("thread count must be positive");
}

std::pair<TestCase, TestCase> crossover(const TestCase& a, const TestCase& b,
                                        std::mt19937_64& rng) {
  auto i = std::uniform_int_distribution<std::size_t>(0, a.size())(rng);
  auto j = std::uniform_int_distribution<std::size_t>(0, b.size())(rng);
  TestCase c1, c2;
  c1.invocations.assign(a.invocations.begin(), a.invocations.begin() + static_cast<std::ptrdiff_t>(i));
  c1.invocations.insert(c1.invocations.end(), b.invocations.begin() + static_cast<std::ptrdiff_t>(j),
                        b.invocations.end());
  c2.invocations.assign(b.invocations.begin(), b.invocations.begin() + static_cast<std::ptrdiff_t>(j));
  c2.invocations.insert(c2.invocations.end(), a.invocations.begin() + static_cast<std::ptrdiff_t>(i),
                        a.invocations.end());
  return {std::move(c1), std::move(c2)};
}

namespace {

struct ActionPools {
  std::vector<const ActionDescriptor*> ctors, methods;
  explicit ActionPools(const Subject& s) {
    for (const auto& a : s.alphabet()) (a.is_constructor ? ctors : methods).push_back(&a);
  }
};

template <class T>
const T& pick_one(const std::vector<T>& v, std::mt19937_64& rng) {
  return v[std::uniform_int_distribution<std::size_t>(0, v.size() - 1)(rng)];
}

std::int64_t random_arg(std::mt19937_64& rng) {
  return std::uniform_int_distribution<std::int64_t>(0, 1023)(rng);
}

Invocation random_call(const ActionPools& pools, int instance, std::mt19937_64& rng) {
  const auto& list = pools.methods.empty() ? pools.ctors : pools.methods;
  return Invocation{instance, pick_one(list, rng)->action, random_arg(rng)};
}

}  // namespace

TestCase mutate(const Subject& subject, const TestCase& test, const SearchConfig& config,
                std::mt19937_64& rng) {
  ActionPools pools(subject);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int instances = std::max(1, test.instance_count());
  TestCase out;
  const double p = test.empty() ? 1.0 : 1.0 / static_cast<double>(test.size());
  for (const auto& inv : test.invocations) {
    if (u(rng) >= p) {
      out.invocations.push_back(inv);
      continue;
    }
    const auto* action = subject.find_action(inv.action);
    bool is_ctor = action && action->is_constructor;
    switch (std::uniform_int_distribution<int>(0, 3)(rng)) {
      case 0:  // delete
        break;
      case 1: {  // replace action
        Invocation r = inv;
        r.arg_seed = random_arg(rng);
        if (!is_ctor) r.action = random_call(pools, inv.instance, rng).action;
        out.invocations.push_back(r);
        break;
      }
      case 2: {  // perturb argument
        Invocation r = inv;
        r.arg_seed += std::uniform_int_distribution<std::int64_t>(1, 3)(rng);
        out.invocations.push_back(r);
        break;
      }
      default:  // insert a call before
        out.invocations.push_back(
            random_call(pools, std::uniform_int_distribution<int>(0, instances - 1)(rng), rng));
        out.invocations.push_back(inv);
        break;
    }
  }
  // Insertion with decreasing probability.
  double q = 0.5;
  while (u(rng) < q) {
    auto pos = std::uniform_int_distribution<std::size_t>(0, out.size())(rng);
    auto call = random_call(pools, std::uniform_int_distribution<int>(0, instances - 1)(rng), rng);
    out.invocations.insert(out.invocations.begin() + static_cast<std::ptrdiff_t>(pos), call);
    q *= 0.5;
  }
  // Append a fresh instance.
  if (instances < config.max_instances && !pools.ctors.empty() && u(rng) < 0.1) {
    out.invocations.push_back({instances, pick_one(pools.ctors, rng)->action, random_arg(rng)});
    auto extra = std::uniform_int_distribution<int>(1, 3)(rng);
    for (int k = 0; k < extra; ++k) out.invocations.push_back(random_call(pools, instances, rng));
  }
  return normalize_test(subject, out, config.max_test_length);
}

// ---------------------------------------------------------------------------
// Evolution

nlohmann::json SearchReport::to_json() const {
  nlohmann::json j;
  j["generations"] = generations;
  j["evaluations"] = evaluations;
  j["stopped_by_time"] = stopped_by_time;
  j["resets"] = resets;
  j["covered_per_generation"] = covered_per_generation;
  auto gs = nlohmann::json::array();
  for (std::size_t i = 0; i < goals.size(); ++i) {
    gs.push_back({{"goal", goals[i].str()},
                  {"state", state_name(final_states[i])},
                  {"age", final_ages[i]}});
  }
  j["goals"] = gs;
  auto tr = nlohmann::json::array();
  for (const auto& t : transitions) {
    tr.push_back({{"generation", t.generation},
                  {"goal", t.goal},
                  {"from", state_name(t.from)},
                  {"to", state_name(t.to)}});
  }
  j["transitions"] = tr;
  return j;
}

namespace {

struct Individual {
  TestCase test;
  std::vector<Trace> traces;
  std::vector<double> fitness;
};

class Evolver {
 public:
  Evolver(const Subject& subject, const MinedPropertySet& properties, const SearchConfig& config)
      : subject_(subject),
        config_(config),
        purity_(subject.purity()),
        rng_(config.rng_seed),
        pools_(subject) {
    std::vector<EventLabel> methods;
    for (const auto& a : subject.alphabet()) methods.push_back(EventLabel::of(a.action));
    deps_ = build_goal_dependencies(properties, methods);
    states_.assign(deps_.goals.size(), GoalState::Untargeted);
    ages_.assign(deps_.goals.size(), 0);
  }

  SearchResult run(const MinedPropertySet& properties) {
    const auto start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
      return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    };
    SearchReport& report = result_.report;

    retarget(0);
    auto population = random_population();
    evaluate(population);
    std::size_t stagnant = 0;
    stagnant = record_coverage(population, 0) ? 0 : 1;
    retarget(0);
    report.covered_per_generation.push_back(covered_count());
    std::vector<int> front_of(population.size(), 0);
    rank_and_select(population, front_of, /*truncate=*/false);

    std::size_t gen = 0;
    for (;;) {
      if (targeted().empty()) break;
      if (config_.max_generations && gen >= config_.max_generations) break;
      if (config_.time_budget_seconds > 0 && elapsed() >= config_.time_budget_seconds) {
        report.stopped_by_time = true;
        break;
      }
      ++gen;

      auto offspring = breed(population, front_of);
      evaluate(offspring);
      bool progress = record_coverage(offspring, gen);
      age_goals(gen);
      retarget(gen);

      population.insert(population.end(), std::make_move_iterator(offspring.begin()),
                        std::make_move_iterator(offspring.end()));
      rank_and_select(population, front_of, /*truncate=*/true);

      stagnant = progress ? 0 : stagnant + 1;
      if (stagnant >= config_.reset_stagnation) {
        report.resets.push_back(gen);
        population = random_population();
        evaluate(population);
        if (record_coverage(population, gen)) stagnant = 0;
        retarget(gen);
        rank_and_select(population, front_of, /*truncate=*/false);
        stagnant = 0;
      }
      report.covered_per_generation.push_back(covered_count());
    }
    report.generations = gen;
    report.goals = deps_.goals;
    report.final_states = states_;
    report.final_ages = ages_;

    std::set<TestCase> emitted;
    for (const auto& p : properties.properties()) {
      int g = deps_.index_of(SearchGoal::for_property(p));
      const TestCase* t = archive_.test(g);
      if (!t) {
        result_.survivors.support.emplace(p, properties.support.at(p));
        continue;
      }
      result_.counterexamples.emplace(p, *t);
      if (emitted.insert(*t).second) {
        const auto* tr = archive_.traces(g);
        result_.counterexample_traces.insert(result_.counterexample_traces.end(), tr->begin(),
                                             tr->end());
      }
    }
    return std::move(result_);
  }

 private:
  std::vector<int> targeted() const {
    std::vector<int> out;
    for (std::size_t g = 0; g < states_.size(); ++g) {
      if (states_[g] == GoalState::Targeted) out.push_back(static_cast<int>(g));
    }
    return out;
  }

  std::size_t covered_count() const {
    return static_cast<std::size_t>(std::count(states_.begin(), states_.end(), GoalState::Covered));
  }

  void transition(std::size_t gen, std::size_t g, GoalState to) {
    result_.report.transitions.push_back({gen, static_cast<int>(g), states_[g], to});
    states_[g] = to;
  }

  void retarget(std::size_t gen) {
    for (std::size_t g = 0; g < states_.size(); ++g) {
      if (states_[g] != GoalState::Untargeted) continue;
      bool ready = true;
      for (int p : deps_.prerequisites[g]) {
        ready &= states_[static_cast<std::size_t>(p)] == GoalState::Covered;
      }
      if (ready) {
        transition(gen, g, GoalState::Targeted);
        ages_[g] = 0;
      }
    }
  }

  void age_goals(std::size_t gen) {
    for (std::size_t g = 0; g < states_.size(); ++g) {
      if (states_[g] != GoalState::Targeted) continue;
      if (++ages_[g] > config_.abandon_age) transition(gen, g, GoalState::Abandoned);
    }
  }

  bool record_coverage(const std::vector<Individual>& tests, std::size_t gen) {
    bool progress = false;
    for (const auto& ind : tests) {
      for (std::size_t g = 0; g < states_.size(); ++g) {
        if (ind.fitness[g] != 0.0) continue;
        archive_.update(static_cast<int>(g), ind.test, ind.traces, 0.0);
        if (states_[g] == GoalState::Untargeted || states_[g] == GoalState::Targeted) {
          transition(gen, g, GoalState::Covered);
          progress = true;
        }
      }
    }
    return progress;
  }

  Individual make_random() {
    auto len = std::uniform_int_distribution<std::size_t>(config_.initial_min_length,
                                                          config_.initial_max_length)(rng_);
    int instances = 1;
    if (config_.max_instances > 1 && std::uniform_real_distribution<double>(0, 1)(rng_) < 0.3) {
      instances = std::uniform_int_distribution<int>(2, config_.max_instances)(rng_);
    }
    Individual ind;
    ind.test = normalize_test(
        subject_, random_test(subject_, rng_, std::max<std::size_t>(len, instances), instances),
        config_.max_test_length);
    return ind;
  }

  std::vector<Individual> random_population() {
    std::vector<Individual> pop;
    for (std::size_t i = 0; i < config_.population_size; ++i) pop.push_back(make_random());
    return pop;
  }

  void evaluate_one(Individual& ind) const {
    auto res = execute(subject_, ind.test, 0);
    ind.traces = sanitize(res);
    ind.fitness.resize(deps_.goals.size());
    for (std::size_t g = 0; g < deps_.goals.size(); ++g) {
      ind.fitness[g] = test_fitness(ind.traces, deps_.goals[g], purity_);
    }
  }

  void evaluate(std::vector<Individual>& pop) {
    result_.report.evaluations += pop.size();
    unsigned nt = std::min<unsigned>(config_.threads, static_cast<unsigned>(pop.size()));
    if (nt <= 1) {
      for (auto& ind : pop) evaluate_one(ind);
      return;
    }
    std::vector<std::thread> workers;
    std::vector<std::exception_ptr> errors(nt);
    for (unsigned w = 0; w < nt; ++w) {
      workers.emplace_back([&, w] {
        try {
          for (std::size_t i = w; i < pop.size(); i += nt) evaluate_one(pop[i]);
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
    for (auto& t : workers) t.join();
    for (auto& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  const Individual& tournament(const std::vector<Individual>& pop,
                               const std::vector<int>& front_of) {
    std::size_t best = std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng_);
    for (std::size_t k = 1; k < config_.tournament_size; ++k) {
      auto c = std::uniform_int_distribution<std::size_t>(0, pop.size() - 1)(rng_);
      auto key = [&](std::size_t i) {
        return std::make_tuple(front_of[i], pop[i].test.size(), i);
      };
      if (key(c) < key(best)) best = c;
    }
    return pop[best];
  }

  std::vector<Individual> breed(const std::vector<Individual>& pop,
                                const std::vector<int>& front_of) {
    std::vector<Individual> out;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    while (out.size() < config_.population_size) {
      const auto& p1 = tournament(pop, front_of);
      const auto& p2 = tournament(pop, front_of);
      TestCase c1 = p1.test, c2 = p2.test;
      if (u(rng_) < config_.crossover_rate) {
        std::tie(c1, c2) = crossover(p1.test, p2.test, rng_);
      }
      for (auto* c : {&c1, &c2}) {
        if (out.size() >= config_.population_size) break;
        Individual ind;
        ind.test = mutate(subject_, *c, config_, rng_);
        if (ind.test.empty()) ind = make_random();
        out.push_back(std::move(ind));
      }
    }
    return out;
  }

  void rank_and_select(std::vector<Individual>& pop, std::vector<int>& front_of, bool truncate) {
    std::vector<std::vector<double>> fit;
    std::vector<std::size_t> lengths;
    fit.reserve(pop.size());
    for (const auto& ind : pop) {
      fit.push_back(ind.fitness);
      lengths.push_back(ind.test.size());
    }
    auto tg = targeted();
    auto fronts = rank(fit, lengths, tg);
    std::vector<Individual> next;
    std::vector<int> next_front;
    const std::size_t cap = truncate ? config_.population_size : pop.size();
    for (std::size_t f = 0; f < fronts.size() && next.size() < cap; ++f) {
      for (int i : fronts[f]) {
        if (next.size() >= cap) break;
        next.push_back(std::move(pop[static_cast<std::size_t>(i)]));
        next_front.push_back(static_cast<int>(f));
      }
    }
    pop = std::move(next);
    front_of = std::move(next_front);
  }

  const Subject& subject_;
  SearchConfig config_;
  PuritySet purity_;
  std::mt19937_64 rng_;
  ActionPools pools_;
  GoalDependencyGraph deps_;
  std::vector<GoalState> states_;
  std::vector<std::size_t> ages_;
  Archive archive_;
  SearchResult result_;
};

}  // namespace

SearchResult evolve(const Subject& subject, const MinedPropertySet& properties,
                    const SearchConfig& config) {
  config.validate();
  if (subject.alphabet().empty()) {
    throw ConfigError("subject '" + subject.name() + "' has an empty alphabet");
  }
  Evolver ev(subject, properties, config);
  return ev.run(properties);
}

}  // namespace advspec
