#pragma once

#include <CLI11.hpp>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

#include "combhelper/config.hpp"
#include "combhelper/graph.hpp"
#include "combhelper/labels.hpp"
#include "combhelper/params_io.hpp"
#include "combhelper/pipeline.hpp"
#include "combhelper/report.hpp"
#include "combhelper/solvers.hpp"
#include "combhelper/trainer.hpp"

// Command-line front end. Every node id in a file the tool reads or writes
// is the id used by the graph's edge list.

namespace combhelper::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kRuntime = 2 };

/// A bad flag value, a missing required input or an unusable config file.
class UsageError : public Error {
 public:
  using Error::Error;
};

namespace detail {

/// Fills options the user did not pass from the JSON object `j`, keyed by
/// long option name without dashes.
inline void apply_config(CLI::App& app, const Json& j) {
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    CLI::Option* opt = nullptr;
    for (CLI::Option* o : app.get_options())
      for (const auto& name : o->get_lnames())
        if (name == it.key()) opt = o;
    if (!opt || it.key() == "config" || it.key() == "help")
      throw UsageError("unknown config key '" + it.key() + "' for " + app.get_name());
    if (opt->count() > 0) continue;
    auto as_text = [](const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
    if (it->is_array())
      for (const auto& e : *it) opt->add_result(as_text(e));
    else
      opt->add_result(as_text(*it));
    opt->run_callback();
  }
}

inline void require(const std::string& value, const char* flag) {
  if (value.empty()) throw UsageError(std::string("missing required option --") + flag);
}

inline std::unordered_map<long long, NodeId> id_index(const std::vector<long long>& ids) {
  std::unordered_map<long long, NodeId> index;
  for (NodeId v = 0; v < ids.size(); ++v) index.emplace(ids[v], v);
  return index;
}

/// Whitespace-separated node ids; '#' starts a comment line.
inline NodeSet read_node_list(const std::string& path, const std::vector<long long>& ids) {
  std::ifstream in(path);
  if (!in) throw IoError(path, "cannot open node list");
  const auto index = id_index(ids);
  NodeSet set(ids.size());
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line[0] == '#') continue;
    std::istringstream ss(line);
    for (std::string tok; ss >> tok;) {
      long long id = 0;
      if (!combhelper::detail::parse_ll(tok, id)) throw ParseError(path, lineno, "not a node id: '" + tok + "'");
      auto it = index.find(id);
      if (it == index.end()) throw ParseError(path, lineno, "node " + tok + " is not in the graph");
      set.insert(it->second);
    }
  }
  return set;
}

inline void write_node_list(std::ostream& out, const NodeSet& set, const std::vector<long long>& ids) {
  set.for_each([&](NodeId v) { out << ids[v] << '\n'; });
}

template <class F>
void with_output(const std::string& path, std::ostream& fallback, F&& write) {
  if (path.empty() || path == "-") {
    write(fallback);
    return;
  }
  std::ofstream out(path);
  if (!out) throw IoError(path, "cannot open for writing");
  write(out);
  out.flush();
  if (!out) throw IoError(path, "write failed");
}

inline std::string default_out_dir() {
  const char* env = std::getenv("COMBHELPER_OUT_DIR");
  return env && *env ? env : ".";
}

}  // namespace detail

/// Runs one command line. Usage text and errors go to `err`; command output
/// that has no --out goes to `out`.
inline int dispatch(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Prune combinatorial search spaces with a distilled GCN and run classical MVC/MIS solvers.",
               "combhelper"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for every command");

  auto add_config = [](CLI::App* sub, std::string& path) {
    sub->add_option("--config", path, "JSON file of option values; flags given on the command line win");
  };

  // gen
  std::string gen_config, gen_out;
  std::size_t gen_n = 1000, gen_m = 4;
  std::uint64_t gen_seed = 1;
  auto* gen = app.add_subcommand("gen", "Generate a Barabasi-Albert graph as an edge list");
  add_config(gen, gen_config);
  gen->add_option("--n", gen_n, "Number of nodes")->capture_default_str();
  gen->add_option("--m", gen_m, "Edges per new node (edge density)")->capture_default_str();
  gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
  gen->add_option("--out", gen_out, "Output edge list (required)");

  // label
  std::string lab_config, lab_graph, lab_out, lab_problem = "mvc", lab_oracle = "greedy";
  std::uint64_t lab_seed = 1;
  double lab_limit = 3600.0;
  auto* lab = app.add_subcommand("label", "Label nodes with an oracle solution and split them 50/50");
  add_config(lab, lab_config);
  lab->add_option("--graph", lab_graph, "Input edge list (required)");
  lab->add_option("--problem", lab_problem, "mvc or mis")->capture_default_str();
  lab->add_option("--oracle", lab_oracle, "exact, greedy or local-search")->capture_default_str();
  lab->add_option("--seed", lab_seed, "Seed for the oracle and the split")->capture_default_str();
  lab->add_option("--time-limit", lab_limit, "Exact oracle time limit in seconds")->capture_default_str();
  lab->add_option("--out", lab_out, "Output label file (required)");

  // train-teacher / train-student share most flags.
  struct TrainFlags {
    std::string config, graph, labels, teacher, out, log;
    std::uint64_t seed = 1;
    std::vector<int> dims;
    int epochs = 0;
    double lr = 0, dropout = 0, temperature = 0, lambda = 0;
    bool no_bias = false, no_boost = false;
  };
  TrainFlags tt, ts;
  const TrainConfig tdef = TrainConfig::teacher_defaults();
  tt.dims = tdef.dims;
  tt.epochs = tdef.epochs;
  tt.lr = tdef.lr;
  tt.dropout = tdef.dropout;
  auto* ttc = app.add_subcommand("train-teacher", "Train the teacher GCN on labeled nodes");
  add_config(ttc, tt.config);
  ttc->add_option("--graph", tt.graph, "Training edge list (required)");
  ttc->add_option("--labels", tt.labels, "Label file from 'label' (required)");
  ttc->add_option("--out", tt.out, "Output parameter file (required)");
  ttc->add_option("--log", tt.log, "Per-epoch CSV log (default: <out>.log.csv)");
  ttc->add_option("--seed", tt.seed, "Init and dropout seed")->capture_default_str();
  ttc->add_option("--dims", tt.dims, "Layer widths, comma separated")->delimiter(',')->capture_default_str();
  ttc->add_option("--epochs", tt.epochs, "Training epochs")->capture_default_str();
  ttc->add_option("--lr", tt.lr, "Adam learning rate")->capture_default_str();
  ttc->add_option("--dropout", tt.dropout, "Hidden-layer dropout rate")->capture_default_str();
  ttc->add_flag("--no-bias", tt.no_bias, "Train without layer biases");

  ts.epochs = 1000;
  ts.lr = 1e-3;
  ts.dropout = 0.5;
  ts.temperature = 1.0;
  ts.lambda = 0.8;
  auto* tsc = app.add_subcommand("train-student", "Distill a boosted student from a trained teacher");
  add_config(tsc, ts.config);
  tsc->add_option("--graph", ts.graph, "Training edge list (required)");
  tsc->add_option("--labels", ts.labels, "Label file from 'label' (required)");
  tsc->add_option("--teacher", ts.teacher, "Teacher parameter file (required)");
  tsc->add_option("--out", ts.out, "Output parameter file (required)");
  tsc->add_option("--log", ts.log, "Per-epoch CSV log (default: <out>.log.csv)");
  tsc->add_option("--seed", ts.seed, "Init and dropout seed")->capture_default_str();
  tsc->add_option("--dims", ts.dims,
                  "Layer widths, comma separated (default: 1,32,32,32,2 for MVC, 1,32,32,2 for MIS)")
      ->delimiter(',');
  tsc->add_option("--epochs", ts.epochs, "Training epochs")->capture_default_str();
  tsc->add_option("--lr", ts.lr, "Adam learning rate")->capture_default_str();
  tsc->add_option("--dropout", ts.dropout, "Hidden-layer dropout rate")->capture_default_str();
  tsc->add_option("--temperature", ts.temperature, "Distillation temperature T")->capture_default_str();
  tsc->add_option("--lambda", ts.lambda, "Weight of the distillation term")->capture_default_str();
  tsc->add_flag("--no-bias", ts.no_bias, "Train without layer biases");
  tsc->add_flag("--no-boost", ts.no_boost, "Uniform supervised weights (distillation only)");

  // prune
  std::string pr_config, pr_params, pr_graph, pr_out;
  auto* pr = app.add_subcommand("prune", "Write the nodes a trained model predicts as good");
  add_config(pr, pr_config);
  pr->add_option("--params", pr_params, "Parameter file (required)");
  pr->add_option("--graph", pr_graph, "Edge list (required)");
  pr->add_option("--out", pr_out, "Output node list (default: stdout)");

  // solve
  std::string so_config, so_graph, so_out, so_problem = "mvc", so_solver = "greedy", so_cand = "all";
  std::uint64_t so_seed = 1;
  double so_limit = 3600.0;
  auto* so = app.add_subcommand("solve", "Run one solver, optionally on a pruned search space");
  add_config(so, so_config);
  so->add_option("--graph", so_graph, "Edge list (required)");
  so->add_option("--problem", so_problem, "mvc or mis")->capture_default_str();
  so->add_option("--solver", so_solver, "exact, greedy or local-search")->capture_default_str();
  so->add_option("--candidates", so_cand, "'all' or a node list file from 'prune'")->capture_default_str();
  so->add_option("--seed", so_seed, "Local-search seed")->capture_default_str();
  so->add_option("--time-limit", so_limit, "Exact solver time limit in seconds")->capture_default_str();
  so->add_option("--out", so_out, "Output solution file (default: stdout)");

  // bench
  std::string be_config, be_out_dir, be_problem;
  std::uint64_t be_seed = 0;
  int be_jobs = 1;
  auto* be = app.add_subcommand("bench", "Run the full pipeline and write bench.csv and bench.json");
  be->add_option("--config", be_config, "Pipeline config JSON (fields default as in the README)");
  be->add_option("--out-dir", be_out_dir, "Report directory (default: $COMBHELPER_OUT_DIR or .)");
  be->add_option("--problem", be_problem, "Override the config's problem (mvc or mis)");
  be->add_option("--seed", be_seed, "Derive every pipeline seed from this master seed");
  be->add_option("--jobs", be_jobs, "Parallel solver cells");

  try {
    try {
      app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
      out << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err << "error: " << e.what() << "\n\n";
      auto subs = app.get_subcommands();
      err << (subs.empty() ? app.help() : subs.front()->help());
      return kUsage;
    }

    // Config files are usage-level input: a missing or malformed one is exit 1.
    auto load_config = [](CLI::App* sub, const std::string& path) {
      if (path.empty()) return;
      try {
        detail::apply_config(*sub, load_json_file(path));
      } catch (const CLI::Error& e) {
        throw UsageError(path + ": " + e.what());
      } catch (const UsageError& e) {
        throw UsageError(path + ": " + e.what());
      } catch (const Error& e) {
        throw UsageError(e.what());
      }
    };

    auto parse_enum = [](auto parse, const std::string& text) {
      try {
        return parse(text);
      } catch (const InvalidParameter& e) {
        throw UsageError(e.what());
      }
    };
    auto problem_of = [&](const std::string& s) { return parse_enum([](auto t) { return parse_problem(t); }, s); };
    auto algo_of = [&](const std::string& s) { return parse_enum([](auto t) { return parse_algorithm(t); }, s); };

    if (gen->parsed()) {
      load_config(gen, gen_config);
      detail::require(gen_out, "out");
      if (gen_m < 1 || gen_n <= gen_m) throw UsageError("need 1 <= m < n");
      dump_edge_list(generate_ba(gen_n, gen_m, gen_seed), gen_out);
      return kOk;
    }

    if (lab->parsed()) {
      load_config(lab, lab_config);
      detail::require(lab_graph, "graph");
      detail::require(lab_out, "out");
      const Problem problem = problem_of(lab_problem);
      const Algorithm oracle = algo_of(lab_oracle);
      const LoadedGraph lg = load_edge_list(lab_graph);
      save_labels(generate_labels(lg.graph, problem, oracle, lab_seed, lab_limit), lab_out, &lg.original_ids);
      return kOk;
    }

    if (ttc->parsed() || tsc->parsed()) {
      const bool student = tsc->parsed();
      TrainFlags& f = student ? ts : tt;
      load_config(student ? tsc : ttc, f.config);
      detail::require(f.graph, "graph");
      detail::require(f.labels, "labels");
      detail::require(f.out, "out");
      if (student) detail::require(f.teacher, "teacher");
      const LoadedGraph lg = load_edge_list(f.graph);
      const LabelSet labels = load_labels(f.labels, &lg.original_ids);
      const Matrix x = degree_features(lg.graph);
      TrainConfig cfg = student ? TrainConfig::student_defaults(labels.problem) : TrainConfig::teacher_defaults();
      if (!f.dims.empty()) cfg.dims = f.dims;
      cfg.epochs = f.epochs;
      cfg.lr = f.lr;
      cfg.dropout = f.dropout;
      cfg.bias = !f.no_bias;
      cfg.init_seed = f.seed;
      cfg.dropout_seed = derive_seed(f.seed, 1);
      cfg.temperature = f.temperature;
      cfg.lambda = f.lambda;
      if (cfg.dims.size() < 2 || cfg.dims.front() != 1 || cfg.dims.back() != 2)
        throw UsageError("--dims must start with 1 and end with 2");
      TrainResult result;
      if (student) {
        const GcnParams teacher = load_params(f.teacher);
        const BoostWeights bw = f.no_boost ? uniform_weights(labels)
                                           : boost_weights(teacher, lg.graph, x, labels, labels.problem);
        result = train_student(lg.graph, x, labels, teacher, bw, cfg);
      } else {
        result = train_teacher(lg.graph, x, labels, cfg);
      }
      save_params(result.params, f.out);
      save_epoch_log(result.log, f.log.empty() ? f.out + ".log.csv" : f.log);
      err << "best epoch " << result.best_epoch << " of " << cfg.epochs << '\n';
      return kOk;
    }

    if (pr->parsed()) {
      load_config(pr, pr_config);
      detail::require(pr_params, "params");
      detail::require(pr_graph, "graph");
      const GcnParams params = load_params(pr_params);
      const LoadedGraph lg = load_edge_list(pr_graph);
      const NodeSet good = predict_good_nodes(params, lg.graph, degree_features(lg.graph));
      detail::with_output(pr_out, out, [&](std::ostream& o) { detail::write_node_list(o, good, lg.original_ids); });
      return kOk;
    }

    if (so->parsed()) {
      load_config(so, so_config);
      detail::require(so_graph, "graph");
      const Problem problem = problem_of(so_problem);
      const Algorithm algo = algo_of(so_solver);
      const LoadedGraph lg = load_edge_list(so_graph);
      const Candidates cand =
          so_cand == "all" ? Candidates::all() : Candidates(detail::read_node_list(so_cand, lg.original_ids));
      const Solution s = run_solver(lg.graph, problem, algo, cand, so_seed, so_limit);
      detail::with_output(so_out, out, [&](std::ostream& o) { write_solution(o, lg.graph, s, &lg.original_ids); });
      return kOk;
    }

    if (be->parsed()) {
      PipelineConfig cfg;
      if (!be_config.empty()) {
        if (!std::filesystem::exists(be_config)) throw UsageError(be_config + ": config file not found");
        try {
          cfg = load_pipeline_config(be_config);
        } catch (const Error& e) {
          throw UsageError(e.what());
        }
      }
      if (be->count("--problem")) {
        cfg.problem = problem_of(be_problem);
        if (!be_config.empty())
          err << "note: --problem overrides the config; student dims keep the config's value\n";
        else
          cfg.student = TrainConfig::student_defaults(cfg.problem);
      }
      if (be->count("--seed")) cfg.seeds = Seeds::from_master(be_seed);
      if (be->count("--jobs")) cfg.jobs = be_jobs;
      try {
        cfg.validate();
      } catch (const ConfigError& e) {
        throw UsageError(e.what());
      }
      const std::string dir = be_out_dir.empty() ? detail::default_out_dir() : be_out_dir;
      std::error_code ec;
      std::filesystem::create_directories(dir, ec);
      const BenchReport report = run_pipeline(cfg);
      const std::string csv = (std::filesystem::path(dir) / "bench.csv").string();
      const std::string json = (std::filesystem::path(dir) / "bench.json").string();
      emit_report(report, ReportFormat::kCsv, csv);
      emit_report(report, ReportFormat::kJson, json);
      out << csv << '\n' << json << '\n';
      return kOk;
    }
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntime;
  }
  err << app.help();
  return kUsage;
}

}  // namespace combhelper::cli
