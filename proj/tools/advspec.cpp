// advspec command-line driver.
//
// Exit codes: 0 success, 2 configuration or parse error, 1 runtime error.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "advspec/pipeline.hpp"

using namespace advspec;

namespace {

PuritySet purity_for(const std::string& subject, std::span<const Trace> traces) {
  if (!subject.empty()) return find_subject(subject).purity();
  auto labels = alphabet_of(traces);
  return PuritySet::from_heuristic(labels);
}

void emit_json(const nlohmann::json& j, const std::string& path) {
  if (path.empty() || path == "-") {
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write '" + path + "'");
  out << j.dump(2) << "\n";
}

Automaton load_truth(const std::string& spec) {
  // A bundled subject name or an automaton JSON file.
  for (const auto& name : subject_names()) {
    if (name == spec) {
      auto truth = find_subject(name).ground_truth();
      if (!truth) throw ConfigError("subject '" + name + "' has no ground truth");
      return *truth;
    }
  }
  return read_automaton_file(spec);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Purity-aware specification mining, adversarial testing and FSA inference"};
  app.require_subcommand(1);

  // mine
  std::string traces_path, props_path, out_path, subject_name;
  bool no_closure = false;
  auto* mine_cmd = app.add_subcommand("mine", "mine temporal properties from a trace file");
  mine_cmd->add_option("--traces", traces_path, "trace file")->required();
  mine_cmd->add_option("--out", out_path, "property output file")->required();
  mine_cmd->add_option("--subject", subject_name, "take purity from a bundled subject");
  mine_cmd->add_flag("--no-purity-closure", no_closure, "plain per-trace checking");

  // test
  SearchConfig search;
  search.max_generations = 300;
  search.time_budget_seconds = 120.0;
  std::string out_traces, out_survivors, report_path;
  auto* test_cmd = app.add_subcommand("test", "search for counterexamples to mined properties");
  test_cmd->add_option("--subject", subject_name, "subject name")->required();
  test_cmd->add_option("--properties", props_path, "property file")->required();
  test_cmd->add_option("--budget", search.max_generations, "generation budget (0: time only)");
  test_cmd->add_option("--time", search.time_budget_seconds, "wall-clock cap in seconds (0: none)");
  test_cmd->add_option("--seed", search.rng_seed, "search seed");
  test_cmd->add_option("--population", search.population_size, "population size");
  test_cmd->add_option("--threads", search.threads, "fitness evaluation threads");
  test_cmd->add_option("--out-traces", out_traces, "counterexample trace output")->required();
  test_cmd->add_option("--out-survivors", out_survivors, "surviving property output")->required();
  test_cmd->add_option("--report", report_path, "search report JSON output");

  // infer
  bool no_a = false, no_b = false;
  std::string out_fsa, out_first;
  auto* infer_cmd = app.add_subcommand("infer", "infer an automaton from traces and properties");
  infer_cmd->add_option("--traces", traces_path, "trace file")->required();
  infer_cmd->add_option("--properties", props_path, "property file")->required();
  infer_cmd->add_option("--subject", subject_name, "take purity from a bundled subject");
  infer_cmd->add_flag("--no-constraint-a", no_a, "disable pure self-loops");
  infer_cmd->add_flag("--no-constraint-b", no_b, "disable compatible branching");
  infer_cmd->add_option("--out-fsa", out_fsa, "automaton JSON output")->required();
  infer_cmd->add_option("--out-first-step", out_first, "first-step automaton JSON output");

  // eval
  EvalConfig eval;
  std::string fsa_path, truth_spec;
  auto* eval_cmd = app.add_subcommand("eval", "score an automaton against a ground truth");
  eval_cmd->add_option("--fsa", fsa_path, "inferred automaton JSON")->required();
  eval_cmd->add_option("--truth", truth_spec, "ground truth JSON file or bundled subject name")
      ->required();
  eval_cmd->add_option("--samples", eval.samples_per_side, "samples per side");
  eval_cmd->add_option("--max-length", eval.max_walk_length, "maximum walk length");
  eval_cmd->add_option("--seed", eval.rng_seed, "sampling seed");
  eval_cmd->add_option("--json", report_path, "report JSON output");

  // export-dot
  auto* dot_cmd = app.add_subcommand("export-dot", "render an automaton as DOT");
  dot_cmd->add_option("--fsa", fsa_path, "automaton JSON")->required();
  dot_cmd->add_option("--out", out_path, "DOT output (default stdout)");

  // export-truth
  auto* truth_cmd = app.add_subcommand("export-truth", "write a bundled ground-truth automaton");
  truth_cmd->add_option("--subject", subject_name, "subject name")->required();
  truth_cmd->add_option("--out", out_path, "automaton JSON output")->required();

  // subjects
  auto* subjects_cmd = app.add_subcommand("subjects", "list bundled subjects with metadata");
  subjects_cmd->add_option("--out", out_path, "JSON output (default stdout)");

  // pipeline
  PipelineConfig pc;
  std::string out_dir;
  bool pno_a = false, pno_b = false;
  auto* pipe_cmd = app.add_subcommand("pipeline", "run every phase end to end");
  pipe_cmd->add_option("--subject", pc.subject, "subject name")->required();
  pipe_cmd->add_option("--subset", pc.subset, "fraction of the initial suite kept, in (0, 1]");
  pipe_cmd->add_option("--initial-tests", pc.initial_tests, "initial suite size");
  pipe_cmd->add_option("--suite-seed", pc.suite_seed, "initial suite seed");
  pipe_cmd->add_option("--seed", pc.search.rng_seed, "search seed");
  pipe_cmd->add_option("--budget", pc.search.max_generations, "generation budget");
  pipe_cmd->add_option("--time", pc.search.time_budget_seconds, "search wall-clock cap in seconds");
  pipe_cmd->add_option("--threads", pc.search.threads, "fitness evaluation threads");
  pipe_cmd->add_flag("--no-constraint-a", pno_a, "disable pure self-loops");
  pipe_cmd->add_flag("--no-constraint-b", pno_b, "disable compatible branching");
  pipe_cmd->add_flag("--remine", pc.remine, "re-mine over the enlarged trace set");
  pipe_cmd->add_option("--samples", pc.eval.samples_per_side, "evaluation samples per side");
  pipe_cmd->add_option("--eval-seed", pc.eval.rng_seed, "evaluation seed");
  pipe_cmd->add_option("--out-dir", out_dir, "write traces, properties and automata here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*mine_cmd) {
      auto traces = read_trace_file(traces_path);
      MineOptions opts;
      opts.purity_closure = !no_closure;
      auto set = mine(traces, purity_for(subject_name, traces), opts);
      write_property_file(out_path, set);
      std::cerr << "mined " << set.size() << " properties from " << traces.size() << " traces\n";
    } else if (*test_cmd) {
      const Subject& subject = find_subject(subject_name);
      auto props = read_property_file(props_path);
      auto result = evolve(subject, props, search);
      write_trace_file(out_traces, result.counterexample_traces);
      write_property_file(out_survivors, result.survivors);
      if (!report_path.empty()) emit_json(result.report.to_json(), report_path);
      std::cerr << "falsified " << result.counterexamples.size() << " of " << props.size()
                << " properties in " << result.report.generations << " generations\n";
    } else if (*infer_cmd) {
      auto traces = read_trace_file(traces_path);
      auto props = read_property_file(props_path);
      MinerConstraints c{!no_a, !no_b};
      auto r = infer(traces, props, purity_for(subject_name, traces), c);
      write_automaton_file(out_fsa, r.automaton);
      if (!out_first.empty()) write_automaton_file(out_first, r.first_step);
      for (const auto& line : r.acceptor.log) std::cerr << line << "\n";
      std::cerr << "first step " << r.first_step.num_states() << " states, merged "
                << r.automaton.num_states() << " states\n";
    } else if (*eval_cmd) {
      auto inferred = read_automaton_file(fsa_path);
      auto truth = load_truth(truth_spec);
      auto report = evaluate(inferred, truth, eval);
      std::cout << report.summary() << "\n";
      if (!report_path.empty()) emit_json(report.to_json(), report_path);
    } else if (*dot_cmd) {
      auto dot = read_automaton_file(fsa_path).to_dot();
      if (out_path.empty() || out_path == "-") {
        std::cout << dot;
      } else {
        std::ofstream out(out_path);
        if (!out) throw ConfigError("cannot write '" + out_path + "'");
        out << dot;
      }
    } else if (*truth_cmd) {
      auto truth = find_subject(subject_name).ground_truth();
      if (!truth) throw ConfigError("subject '" + subject_name + "' has no ground truth");
      write_automaton_file(out_path, *truth);
    } else if (*subjects_cmd) {
      nlohmann::json j = nlohmann::json::array();
      for (const auto& name : subject_names()) j.push_back(subject_metadata(find_subject(name)));
      emit_json(j, out_path);
    } else if (*pipe_cmd) {
      pc.constraints = MinerConstraints{!pno_a, !pno_b};
      auto result = run_pipeline(pc);
      if (!out_dir.empty()) {
        write_trace_file(out_dir + "/initial.traces", result.initial_traces);
        write_property_file(out_dir + "/mined.props", result.mined);
        write_trace_file(out_dir + "/all.traces", result.inference_traces);
        write_property_file(out_dir + "/survivors.props", result.inference_properties);
        write_automaton_file(out_dir + "/first_step.json", result.inference.first_step);
        write_automaton_file(out_dir + "/fsa.json", result.inference.automaton);
        emit_json(result.to_json(), out_dir + "/report.json");
      }
      std::cout << result.to_json().dump(2) << "\n";
      if (result.eval) std::cout << result.eval->summary() << "\n";
    }
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
