#include "advspec/pipeline.hpp"

#include <chrono>
#include <algorithm>
#include <cmath>
#include <random>

namespace advspec {

void PipelineConfig::validate() const {
  if (!(subset > 0.0 && subset <= 1.0)) throw ConfigError("subset fraction must lie in (0, 1]");
  if (initial_tests == 0) throw ConfigError("initial test count must be positive");
  if (initial_min_length < 1 || initial_max_length < initial_min_length) {
    throw ConfigError("invalid initial test length range");
  }
  if (search_enabled()) search.validate();
  eval.validate();
}

std::vector<TestCase> initial_suite(const Subject& subject, const PipelineConfig& config) {
  std::mt19937_64 rng(config.suite_seed);
  std::vector<TestCase> suite;
  suite.reserve(config.initial_tests);
  for (std::size_t i = 0; i < config.initial_tests; ++i) {
    auto len = std::uniform_int_distribution<std::size_t>(config.initial_min_length,
                                                          config.initial_max_length)(rng);
    suite.push_back(random_test(subject, rng, len, 1));
  }
  auto keep = static_cast<std::size_t>(
      std::ceil(config.subset * static_cast<double>(config.initial_tests) - 1e-9));
  suite.resize(std::max<std::size_t>(1, keep));
  return suite;
}

InferenceResult infer(std::span<const Trace> traces, const MinedPropertySet& properties,
                      const PuritySet& purity, MinerConstraints constraints) {
  InferenceResult r;
  r.first_step = build_acceptor(traces, properties, purity, constraints, &r.acceptor);
  r.automaton = merge(r.first_step, properties, purity, &r.merge);
  return r;
}

namespace {

template <class F>
auto phase(const std::string& name, PipelineResult& result, F&& f) {
  auto start = std::chrono::steady_clock::now();
  try {
    if constexpr (std::is_void_v<decltype(f())>) {
      f();
      result.seconds[name] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    } else {
      auto v = f();
      result.seconds[name] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      return v;
    }
  } catch (const PipelineError&) {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError("[" + name + "] " + e.what());
  } catch (const std::exception& e) {
    throw PipelineError(name, e.what());
  }
}

}  // namespace

PipelineResult run_front_half(const PipelineConfig& config) {
  config.validate();
  const Subject& subject = find_subject(config.subject);
  const PuritySet purity = subject.purity();
  PipelineResult result;

  result.initial_traces = phase("execute", result, [&] {
    std::vector<ExecutionResult> runs;
    for (const auto& t : initial_suite(subject, config)) runs.push_back(execute(subject, t, 0));
    return sanitize(runs);
  });

  result.mined = phase("mine", result, [&] { return mine(result.initial_traces, purity); });

  result.inference_traces = result.initial_traces;
  result.inference_properties = result.mined;
  if (config.search_enabled()) {
    result.search = phase("search", result, [&] { return evolve(subject, result.mined, config.search); });
    const auto& cex = result.search->counterexample_traces;
    result.inference_traces.insert(result.inference_traces.end(), cex.begin(), cex.end());
    phase("refine", result, [&] {
      if (config.remine) {
        result.inference_properties = mine(result.inference_traces, purity);
      } else {
        result.inference_properties =
            retain_consistent(result.search->survivors, result.inference_traces, purity);
      }
    });
  }
  return result;
}

void run_back_half(PipelineResult& result, const PipelineConfig& config,
                   MinerConstraints constraints) {
  const Subject& subject = find_subject(config.subject);
  const PuritySet purity = subject.purity();
  result.inference = phase("infer", result, [&] {
    return infer(result.inference_traces, result.inference_properties, purity, constraints);
  });
  result.eval.reset();
  if (auto truth = subject.ground_truth()) {
    result.eval =
        phase("eval", result, [&] { return evaluate(result.inference.automaton, *truth, config.eval); });
  }
}

PipelineResult run_pipeline(const PipelineConfig& config) {
  auto result = run_front_half(config);
  run_back_half(result, config, config.constraints);
  return result;
}

nlohmann::json PipelineResult::to_json() const {
  nlohmann::json j;
  j["initial_traces"] = initial_traces.size();
  j["mined_properties"] = mined.size();
  j["inference_properties"] = inference_properties.size();
  j["inference_traces"] = inference_traces.size();
  if (search) {
    j["search"] = {{"generations", search->report.generations},
                   {"evaluations", search->report.evaluations},
                   {"resets", search->report.resets.size()},
                   {"stopped_by_time", search->report.stopped_by_time},
                   {"survivors", search->survivors.size()},
                   {"falsified", search->counterexamples.size()},
                   {"counterexample_traces", search->counterexample_traces.size()}};
  }
  j["acceptor"] = {{"states", inference.first_step.num_states()},
                   {"transitions", inference.first_step.num_transitions()},
                   {"branches", inference.acceptor.branches},
                   {"skipped_traces", inference.acceptor.skipped_traces}};
  j["merge"] = {{"rounds", inference.merge.rounds},
                {"merges", inference.merge.merges},
                {"vetoes", inference.merge.vetoes},
                {"states", inference.automaton.num_states()},
                {"transitions", inference.automaton.num_transitions()}};
  if (eval) j["eval"] = eval->to_json();
  j["seconds"] = seconds;
  return j;
}

}  // namespace advspec
