#include "advspec/eval.hpp"

#include <cstdio>
#include <random>
#include <stdexcept>

namespace advspec {

void EvalConfig::validate() const {
  if (samples_per_side == 0) throw ConfigError("samples per side must be positive");
  if (max_walk_length == 0) throw ConfigError("max walk length must be positive");
  if (max_attempts_per_sample == 0) throw ConfigError("max attempts must be positive");
}

double f_measure(double precision, double recall) {
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

nlohmann::json EvalReport::to_json() const {
  return {{"precision", precision},
          {"recall", recall},
          {"f_measure", f_measure},
          {"inferred_samples", inferred_samples},
          {"truth_samples", truth_samples},
          {"inferred_accepted_by_truth", inferred_accepted},
          {"truth_accepted_by_inferred", truth_accepted},
          {"seed", seed}};
}

std::string EvalReport::summary() const {
  char buf[96];
  std::snprintf(buf, sizeof buf, "P=%.4f R=%.4f F=%.4f", precision, recall, f_measure);
  return buf;
}

std::vector<Trace> sample_traces(const Automaton& model, const EvalConfig& config) {
  config.validate();
  auto co = model.coreachable();
  if (!co[model.initial()]) throw std::runtime_error("model has no accepting path");
  std::mt19937_64 rng(config.rng_seed);
  std::vector<Trace> out;
  out.reserve(config.samples_per_side);
  while (out.size() < config.samples_per_side) {
    bool kept = false;
    for (std::size_t attempt = 0; attempt < config.max_attempts_per_sample && !kept; ++attempt) {
      Trace t;
      auto s = model.initial();
      for (std::size_t step = 0; step < config.max_walk_length; ++step) {
        const auto& edges = model.out(s);
        if (edges.empty()) break;
        const auto& e = edges[std::uniform_int_distribution<std::size_t>(0, edges.size() - 1)(rng)];
        t.events.push_back(e.label);
        s = e.to;
        if (e.label.is_end) break;
      }
      if (t.complete() && model.is_accepting(s)) {
        out.push_back(std::move(t));
        kept = true;
      }
    }
    if (!kept) {
      throw std::runtime_error("no accepting walk within " + std::to_string(config.max_walk_length) +
                               " steps after " + std::to_string(config.max_attempts_per_sample) +
                               " attempts");
    }
  }
  return out;
}

EvalReport evaluate(const Automaton& inferred, const Automaton& truth, const EvalConfig& config) {
  EvalReport r;
  r.seed = config.rng_seed;
  EvalConfig inferred_cfg = config;
  EvalConfig truth_cfg = config;
  // Independent streams for the two sides.
  truth_cfg.rng_seed = config.rng_seed ^ 0x9e3779b97f4a7c15ULL;
  auto from_inferred = sample_traces(inferred, inferred_cfg);
  auto from_truth = sample_traces(truth, truth_cfg);
  r.inferred_samples = from_inferred.size();
  r.truth_samples = from_truth.size();
  for (const auto& t : from_inferred) r.inferred_accepted += truth.accepts(t) ? 1 : 0;
  for (const auto& t : from_truth) r.truth_accepted += inferred.accepts(t) ? 1 : 0;
  r.precision = static_cast<double>(r.inferred_accepted) / static_cast<double>(r.inferred_samples);
  r.recall = static_cast<double>(r.truth_accepted) / static_cast<double>(r.truth_samples);
  r.f_measure = f_measure(r.precision, r.recall);
  return r;
}

}  // namespace advspec
