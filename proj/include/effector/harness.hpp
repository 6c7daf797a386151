#pragma once

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "effector/baselines.hpp"
#include "effector/common.hpp"
#include "effector/diffusion.hpp"
#include "effector/fbed.hpp"
#include "effector/graph.hpp"
#include "effector/influence_distance.hpp"
#include "effector/mbed.hpp"
#include "effector/mlbed.hpp"

namespace effector {

struct ExperimentConfig {
  std::string graph_path;
  bool undirected = false;
  ProbabilityModel prob_model = ProbabilityModel::explicit_probs();
  enum class Protocol { SeededDiffusion, RandomState };
  Protocol protocol = Protocol::SeededDiffusion;
  int seed_count = 1;   // SeededDiffusion: seeds drawn and budget granted
  int random_n1 = 0;    // RandomState: |X1|
  std::vector<std::string> algorithms;
  double lambda = 0.5;
  int k = 3;
  int trials = 10000;
  std::uint64_t master_seed = 0;
  int replications = 1;
  bool common_random_numbers = true;
  bool timing = true;  // off => wall_ms written as 0 for reproducible output

  // Key=value lines; '#' starts a comment. Example:
  //   graph=facebook.txt
  //   undirected=true
  //   prob=wc
  //   protocol=seeded:5
  //   algos=mbed,fbed,mlbed,outdegree,random
  //   replications=50
  static ExperimentConfig parse(std::istream& is) {
    ExperimentConfig cfg;
    bool have_graph = false, have_protocol = false, have_algos = false;
    std::string line;
    int line_no = 0;
    auto parse_bool = [&](const std::string& v) {
      if (v == "true" || v == "1") return true;
      if (v == "false" || v == "0") return false;
      throw ParseError(line_no, "expected a boolean, got '" + v + "'");
    };
    while (std::getline(is, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      std::string trimmed = line.substr(line.find_first_not_of(" \t") ==
                                                std::string::npos
                                            ? line.size()
                                            : line.find_first_not_of(" \t"));
      if (trimmed.empty() || trimmed[0] == '#') continue;
      auto eq = trimmed.find('=');
      if (eq == std::string::npos)
        throw ParseError(line_no, "expected key=value");
      std::string key = trimmed.substr(0, eq);
      std::string value = trimmed.substr(eq + 1);
      try {
        if (key == "graph") {
          cfg.graph_path = value;
          have_graph = true;
        } else if (key == "undirected") {
          cfg.undirected = parse_bool(value);
        } else if (key == "prob") {
          cfg.prob_model = ProbabilityModel::parse(value);
        } else if (key == "protocol") {
          if (value.rfind("seeded:", 0) == 0) {
            cfg.protocol = Protocol::SeededDiffusion;
            cfg.seed_count = std::stoi(value.substr(7));
          } else if (value.rfind("random:", 0) == 0) {
            cfg.protocol = Protocol::RandomState;
            cfg.random_n1 = std::stoi(value.substr(7));
          } else {
            throw std::invalid_argument(value);
          }
          have_protocol = true;
        } else if (key == "algos") {
          cfg.algorithms.clear();
          std::istringstream as(value);
          std::string tok;
          while (std::getline(as, tok, ','))
            if (!tok.empty()) cfg.algorithms.push_back(tok);
          have_algos = !cfg.algorithms.empty();
        } else if (key == "lambda") {
          cfg.lambda = std::stod(value);
        } else if (key == "k") {
          cfg.k = std::stoi(value);
        } else if (key == "trials") {
          cfg.trials = std::stoi(value);
        } else if (key == "seed") {
          cfg.master_seed = std::stoull(value);
        } else if (key == "replications") {
          cfg.replications = std::stoi(value);
        } else if (key == "crn") {
          cfg.common_random_numbers = parse_bool(value);
        } else if (key == "timing") {
          cfg.timing = parse_bool(value);
        } else {
          throw ParseError(line_no, "unknown key '" + key + "'");
        }
      } catch (const ParseError&) {
        throw;
      } catch (const std::exception& e) {
        throw ParseError(line_no, "bad value for '" + key + "': " + e.what());
      }
    }
    if (!have_graph) throw DataError("config is missing 'graph'");
    if (!have_protocol) throw DataError("config is missing 'protocol'");
    if (!have_algos) throw DataError("config is missing 'algos'");
    if (cfg.lambda < 0.0 || cfg.lambda > 1.0)
      throw DataError("lambda outside [0,1]");
    if (cfg.k < 1 || cfg.trials < 1 || cfg.replications < 1)
      throw DataError("k, trials and replications must be >= 1");
    return cfg;
  }
};

struct ResultRecord {
  int replication = 0;
  int n1 = 0;
  int budget = 0;
  std::string algorithm;
  double f1_mean = std::numeric_limits<double>::quiet_NaN();
  double f1_stderr = std::numeric_limits<double>::quiet_NaN();
  double score = std::numeric_limits<double>::quiet_NaN();
  long wall_ms = 0;
  bool skipped = false;
};

inline void write_results_csv(std::ostream& os,
                              const std::vector<ResultRecord>& records) {
  os << "replication,n1,budget,algorithm,f1_mean,f1_stderr,score,wall_ms\n";
  char buf[96];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.10g,%.10g,%.10g", r.f1_mean, r.f1_stderr,
                  r.score);
    os << r.replication << ',' << r.n1 << ',' << r.budget << ','
       << r.algorithm << ',' << buf << ',' << r.wall_ms << '\n';
  }
}

// Uniform random seeds, one simulated diffusion; the true seeds are returned
// for diagnostics only.
inline std::pair<ActivationState, std::vector<NodeId>>
generate_state_by_seeding(const IcNetwork& net, int seeds, std::uint64_t seed) {
  if (seeds < 0 || seeds > net.node_count())
    throw std::invalid_argument("seed count outside [0, N]");
  std::vector<NodeId> pool(net.node_count());
  for (NodeId u = 0; u < net.node_count(); ++u) pool[u] = u;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < seeds; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  std::vector<NodeId> chosen(pool.begin(), pool.begin() + seeds);
  std::sort(chosen.begin(), chosen.end());
  DiffusionOutcome out =
      simulate_once(net, chosen, derive_seed(seed, 0x5eedULL));
  return {std::move(out.final_state), std::move(chosen)};
}

inline ActivationState generate_state_random(const IcNetwork& net, int n1,
                                             std::uint64_t seed) {
  if (n1 < 0 || n1 > net.node_count())
    throw std::invalid_argument("n1 outside [0, N]");
  std::vector<NodeId> pool(net.node_count());
  for (NodeId u = 0; u < net.node_count(); ++u) pool[u] = u;
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n1; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
  }
  return ActivationState(net.node_count(),
                         {pool.begin(), pool.begin() + n1});
}

// Shared per-state context: detectors draw their distance tables from here
// so MBED and FBED reuse work when k agrees.
class DetectorContext {
 public:
  DetectorContext(const IcNetwork& net, const ActivationState& state, int k)
      : net_(net), state_(state), k_(k) {}

  const DistanceTable& table(int k) {
    auto& slot = k == 1 ? table1_ : tablek_;
    if (k != 1 && k != k_)
      throw std::invalid_argument("context built for a different k");
    if (!slot) {
      std::vector<NodeId> targets(net_.node_count());
      for (NodeId u = 0; u < net_.node_count(); ++u) targets[u] = u;
      slot.emplace(
          compute_distance_table(net_, state_.active_nodes(), targets, k));
    }
    return *slot;
  }

  EffectorResult detect(const std::string& algo, int budget, double lambda,
                        std::uint64_t seed) {
    if (algo == "mbed") return mbed(state_, budget, lambda, table(1));
    if (algo == "fbed") return fbed(state_, budget, lambda, table(k_));
    if (algo == "mlbed") return mlbed(net_, state_, budget);
    if (algo == "outdegree") return out_degree_detect(net_, state_, budget);
    if (algo == "random") return random_detect(state_, budget, seed);
    throw std::invalid_argument("unknown algorithm '" + algo + "'");
  }

 private:
  const IcNetwork& net_;
  const ActivationState& state_;
  int k_;
  std::optional<DistanceTable> table1_;
  std::optional<DistanceTable> tablek_;
};

inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg,
                                                const IcNetwork& net) {
  std::vector<ResultRecord> records;
  for (int rep = 0; rep < cfg.replications; ++rep) {
    std::uint64_t rep_seed = derive_seed(cfg.master_seed, rep);
    ActivationState state;
    int budget = 0;
    if (cfg.protocol == ExperimentConfig::Protocol::SeededDiffusion) {
      state = generate_state_by_seeding(net, cfg.seed_count,
                                        derive_seed(rep_seed, 0))
                  .first;
      budget = cfg.seed_count;
    } else {
      state = generate_state_random(net, cfg.random_n1,
                                    derive_seed(rep_seed, 0));
      int n1 = state.n1();
      int lo = static_cast<int>(std::ceil(0.1 * n1));
      int hi = static_cast<int>(std::floor(0.2 * n1));
      lo = std::max(lo, 1);
      hi = std::max(hi, lo);
      std::mt19937_64 brng(derive_seed(rep_seed, 1));
      budget = std::uniform_int_distribution<int>(lo, hi)(brng);
      budget = std::min(budget, n1);
    }
    const int n1 = state.n1();
    DetectorContext ctx(net, state, cfg.k);
    std::uint64_t eval_seed = derive_seed(rep_seed, 3);
    for (std::size_t a = 0; a < cfg.algorithms.size(); ++a) {
      const std::string& algo = cfg.algorithms[a];
      ResultRecord rec;
      rec.replication = rep;
      rec.n1 = n1;
      rec.budget = budget;
      rec.algorithm = algo;
      if (budget < 1 || budget > n1) {
        rec.skipped = true;
        records.push_back(std::move(rec));
        continue;
      }
      auto t0 = std::chrono::steady_clock::now();
      EffectorResult res =
          ctx.detect(algo, budget, cfg.lambda, derive_seed(rep_seed, 100 + a));
      auto t1 = std::chrono::steady_clock::now();
      std::uint64_t algo_eval = cfg.common_random_numbers
                                    ? eval_seed
                                    : derive_seed(eval_seed, a);
      MetricEstimate f1 =
          estimate_f1(net, state, res.members, cfg.trials, algo_eval);
      rec.f1_mean = f1.mean;
      rec.f1_stderr = f1.stderr_;
      rec.score = res.score;
      if (cfg.timing)
        rec.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                          t1 - t0)
                          .count();
      records.push_back(std::move(rec));
    }
  }
  return records;
}

inline std::vector<ResultRecord> run_experiment(const ExperimentConfig& cfg) {
  std::ifstream gf(cfg.graph_path);
  if (!gf) throw DataError("cannot open graph file '" + cfg.graph_path + "'");
  IcNetwork net =
      assign_probabilities(load_edge_list(gf, cfg.undirected), cfg.prob_model);
  return run_experiment(cfg, net);
}

struct SweepRecord {
  double lambda = 0.0;
  std::string algorithm;
  double f1_mean = 0.0;
  double f1_stderr = 0.0;
  double score = 0.0;
};

// Fixed-state lambda grid for MBED (with a random-selection reference),
// evaluated with common random numbers across the grid.
inline std::vector<SweepRecord> run_lambda_sweep(
    const IcNetwork& net, const ActivationState& state, int budget,
    const std::vector<double>& lambdas, int trials, std::uint64_t seed,
    int k = 1) {
  DetectorContext ctx(net, state, k);
  std::uint64_t eval_seed = derive_seed(seed, 3);
  std::vector<SweepRecord> out;
  for (double lambda : lambdas) {
    for (const char* algo : {"mbed", "random"}) {
      EffectorResult res = ctx.detect(algo, budget, lambda, seed);
      MetricEstimate f1 =
          estimate_f1(net, state, res.members, trials, eval_seed);
      out.push_back({lambda, algo, f1.mean, f1.stderr_, res.score});
    }
  }
  return out;
}

inline void write_sweep_csv(std::ostream& os,
                            const std::vector<SweepRecord>& records) {
  os << "lambda,algorithm,f1_mean,f1_stderr,score\n";
  char buf[96];
  for (const auto& r : records) {
    std::snprintf(buf, sizeof buf, "%.10g,%s,%.10g,%.10g,%.10g", r.lambda,
                  r.algorithm.c_str(), r.f1_mean, r.f1_stderr, r.score);
    os << buf << '\n';
  }
}

}  // namespace effector
