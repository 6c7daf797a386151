#pragma once

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "effector/effector.hpp"

namespace effector {

// Exit codes: 0 success, 1 usage error, 2 data error.
namespace cli_detail {

inline IcNetwork load_graph(const std::string& path, bool undirected,
                            const std::string& prob) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open graph file '" + path + "'");
  return assign_probabilities(load_edge_list(f, undirected),
                              ProbabilityModel::parse(prob));
}

inline ActivationState load_state(const std::string& path,
                                  const IcNetwork& net) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open state file '" + path + "'");
  return load_activation_state(f, net);
}

inline std::vector<NodeId> load_nodes(const std::string& path,
                                      const IcNetwork& net) {
  std::ifstream f(path);
  if (!f) throw DataError("cannot open node list '" + path + "'");
  return load_node_list(f, net);
}

}  // namespace cli_detail

inline int run_cli(const std::vector<std::string>& args, std::ostream& out,
                   std::ostream& err) {
  CLI::App app{"Effector detection for independent-cascade networks"};
  app.require_subcommand(1);

  // ---- detect ----
  auto* detect = app.add_subcommand(
      "detect", "Select B effectors explaining an activation state");
  std::string graph_path, state_path, algo, prob = "explicit";
  std::string dump_dag_path;
  bool undirected = false, as_json = false;
  int budget = 1, k = 3;
  double lambda = 0.5;
  std::uint64_t seed = 0;
  detect->add_option("--graph", graph_path, "edge-list file")->required();
  detect->add_option("--state", state_path, "active-node file")->required();
  detect->add_option("--algo", algo, "mbed|fbed|mlbed|outdegree|random")
      ->required()
      ->check(CLI::IsMember({"mbed", "fbed", "mlbed", "outdegree", "random"}));
  detect->add_option("--budget", budget, "number of effectors")->required();
  detect->add_option("--lambda", lambda, "objective weight in [0,1]");
  detect->add_option("--k", k, "influence-distance depth (fbed)");
  detect->add_option("--seed", seed, "RNG seed");
  detect->add_option("--prob", prob, "uniform:P | wc | explicit");
  detect->add_flag("--undirected", undirected, "expand undirected edges");
  detect->add_flag("--json", as_json, "emit JSON");
  detect->add_option("--dump-dag", dump_dag_path,
                     "write the extracted DAG (mlbed) as an edge list");

  // ---- eval ----
  auto* eval = app.add_subcommand(
      "eval", "Monte Carlo f1/f2 estimates for a given effector set");
  std::string eval_graph, eval_state, effectors_path, eval_prob = "explicit";
  bool eval_undirected = false;
  int trials = 10000;
  std::uint64_t eval_seed = 0;
  eval->add_option("--graph", eval_graph, "edge-list file")->required();
  eval->add_option("--state", eval_state, "active-node file")->required();
  eval->add_option("--effectors", effectors_path, "node-list file")
      ->required();
  eval->add_option("--trials", trials, "Monte Carlo iterations");
  eval->add_option("--seed", eval_seed, "RNG seed");
  eval->add_option("--prob", eval_prob, "uniform:P | wc | explicit");
  eval->add_flag("--undirected", eval_undirected, "expand undirected edges");

  // ---- experiment ----
  auto* experiment = app.add_subcommand(
      "experiment", "Replicated detection benchmark driven by a config file");
  std::string config_path, out_path;
  experiment->add_option("--config", config_path, "key=value config file")
      ->required();
  experiment->add_option("--out", out_path, "output CSV path")->required();

  // ---- distances ----
  auto* distances = app.add_subcommand(
      "distances", "Dump k-th influence distances as CSV");
  std::string dist_graph, sources_path, targets_path, dist_out,
      dist_prob = "explicit";
  bool dist_undirected = false;
  int dist_k = 1;
  distances->add_option("--graph", dist_graph, "edge-list file")->required();
  distances->add_option("--k", dist_k, "influence-distance depth");
  distances->add_option("--sources", sources_path, "node-list file")
      ->required();
  distances->add_option("--targets", targets_path, "node-list file")
      ->required();
  distances->add_option("--out", dist_out, "output CSV path")->required();
  distances->add_option("--prob", dist_prob, "uniform:P | wc | explicit");
  distances->add_flag("--undirected", dist_undirected,
                      "expand undirected edges");

  // ---- sweep ----
  auto* sweep = app.add_subcommand(
      "sweep", "MBED f1 across a lambda grid for a fixed state");
  std::string sweep_graph, sweep_state, sweep_out, sweep_prob = "explicit";
  bool sweep_undirected = false;
  int sweep_budget = 1, sweep_trials = 10000;
  std::uint64_t sweep_seed = 0;
  double lo = 0.05, hi = 0.95, step = 0.05;
  sweep->add_option("--graph", sweep_graph, "edge-list file")->required();
  sweep->add_option("--state", sweep_state, "active-node file")->required();
  sweep->add_option("--budget", sweep_budget, "number of effectors")
      ->required();
  sweep->add_option("--from", lo, "first lambda");
  sweep->add_option("--to", hi, "last lambda");
  sweep->add_option("--step", step, "lambda increment");
  sweep->add_option("--trials", sweep_trials, "Monte Carlo iterations");
  sweep->add_option("--seed", sweep_seed, "RNG seed");
  sweep->add_option("--prob", sweep_prob, "uniform:P | wc | explicit");
  sweep->add_option("--out", sweep_out, "output CSV path")->required();
  sweep->add_flag("--undirected", sweep_undirected,
                  "expand undirected edges");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {  // --help
      out << app.help();
      return 0;
    }
    err << e.what() << "\n";
    return 1;
  }

  try {
    if (detect->parsed()) {
      IcNetwork net = cli_detail::load_graph(graph_path, undirected, prob);
      ActivationState state = cli_detail::load_state(state_path, net);
      DetectorContext ctx(net, state, k);
      EffectorResult res = ctx.detect(algo, budget, lambda, seed);
      if (!dump_dag_path.empty()) {
        if (algo != "mlbed") throw DataError("--dump-dag requires --algo mlbed");
        MlbedDetail detail;
        res = mlbed(net, state, budget, std::nullopt, &detail);
        IcNetwork dag;
        for (NodeId u : state.active_nodes()) dag.add_node(net.label(u));
        for (int e : detail.dag_edges)
          dag.add_edge(dag.find_node(net.label(net.edge(e).src)),
                       dag.find_node(net.label(net.edge(e).dst)),
                       net.edge(e).prob);
        std::ofstream df(dump_dag_path);
        if (!df) throw DataError("cannot write '" + dump_dag_path + "'");
        save_edge_list(df, dag);
      }
      if (as_json) {
        nlohmann::json j;
        j["algorithm"] = res.algorithm;
        j["budget"] = res.budget;
        std::vector<std::string> labels;
        for (NodeId u : res.members) labels.push_back(net.label(u));
        j["members"] = labels;
        j["score"] = res.score;
        if (res.zero_likelihood) j["zero_likelihood"] = true;
        if (!res.note.empty()) j["note"] = res.note;
        out << j.dump() << "\n";
      } else {
        for (std::size_t i = 0; i < res.members.size(); ++i)
          out << (i ? " " : "") << net.label(res.members[i]);
        out << "\nscore " << res.score << "\n";
        if (!res.note.empty()) err << "warning: " << res.note << "\n";
      }
      return 0;
    }
    if (eval->parsed()) {
      IcNetwork net =
          cli_detail::load_graph(eval_graph, eval_undirected, eval_prob);
      ActivationState state = cli_detail::load_state(eval_state, net);
      std::vector<NodeId> effectors =
          cli_detail::load_nodes(effectors_path, net);
      MetricEstimate f1 = estimate_f1(net, state, effectors, trials, eval_seed);
      MetricEstimate f2 = estimate_f2(net, state, effectors, trials, eval_seed);
      out << "f1 " << f1.mean << " stderr " << f1.stderr_ << " trials "
          << f1.trials << "\n";
      out << "f2 " << f2.mean << " stderr " << f2.stderr_ << " trials "
          << f2.trials << "\n";
      return 0;
    }
    if (experiment->parsed()) {
      std::ifstream cf(config_path);
      if (!cf) throw DataError("cannot open config '" + config_path + "'");
      ExperimentConfig cfg = ExperimentConfig::parse(cf);
      std::vector<ResultRecord> records = run_experiment(cfg);
      std::ofstream of(out_path);
      if (!of) throw DataError("cannot write '" + out_path + "'");
      write_results_csv(of, records);
      return 0;
    }
    if (distances->parsed()) {
      IcNetwork net =
          cli_detail::load_graph(dist_graph, dist_undirected, dist_prob);
      std::vector<NodeId> sources = cli_detail::load_nodes(sources_path, net);
      std::vector<NodeId> targets = cli_detail::load_nodes(targets_path, net);
      DistanceTable table =
          compute_distance_table(net, sources, targets, dist_k);
      std::ofstream of(dist_out);
      if (!of) throw DataError("cannot write '" + dist_out + "'");
      dump_distances_csv(of, table, net);
      return 0;
    }
    if (sweep->parsed()) {
      IcNetwork net =
          cli_detail::load_graph(sweep_graph, sweep_undirected, sweep_prob);
      ActivationState state = cli_detail::load_state(sweep_state, net);
      std::vector<double> lambdas;
      for (double l = lo; l <= hi + 1e-12; l += step) lambdas.push_back(l);
      std::vector<SweepRecord> records = run_lambda_sweep(
          net, state, sweep_budget, lambdas, sweep_trials, sweep_seed);
      std::ofstream of(sweep_out);
      if (!of) throw DataError("cannot write '" + sweep_out + "'");
      write_sweep_csv(of, records);
      return 0;
    }
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace effector
