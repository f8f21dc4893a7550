#pragma once

// Random-walk precision, recall and F-measure between two automata.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "advspec/automaton.hpp"

namespace advspec {

struct EvalConfig {
  std::size_t samples_per_side = 500;
  std::size_t max_walk_length = 50;
  std::uint64_t rng_seed = 1;
  // Walks drawn per kept sample before giving up.
  std::size_t max_attempts_per_sample = 1000;

  void validate() const;
};

struct EvalReport {
  double precision = 0.0;
  double recall = 0.0;
  double f_measure = 0.0;
  std::size_t inferred_samples = 0;
  std::size_t truth_samples = 0;
  std::size_t inferred_accepted = 0;
  std::size_t truth_accepted = 0;
  std::uint64_t seed = 0;

  nlohmann::json to_json() const;
  std::string summary() const;
};

double f_measure(double precision, double recall);

/// Uniform out-edge walks from the initial state; only walks ending in an
/// accepting state via END within the length bound are kept. Throws
/// std::runtime_error if no accepting walk can be drawn.
std::vector<Trace> sample_traces(const Automaton& model, const EvalConfig& config);

EvalReport evaluate(const Automaton& inferred, const Automaton& truth, const EvalConfig& config);

}  // namespace advspec
