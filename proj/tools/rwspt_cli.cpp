// Command-line front end: explore, solve, verify and export the production
// system model.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <thread>

#include "rwspt/canon.hpp"
#include "rwspt/ctmc.hpp"
#include "rwspt/ftps.hpp"
#include "rwspt/statespace.hpp"
#include "rwspt/verify.hpp"

namespace fs = std::filesystem;
using namespace rwspt;

namespace {

constexpr int kCheckFailed = 1;
constexpr int kBudgetExceeded = 2;
constexpr int kError = 3;

struct RunConfig {
  ftps::Params params{2, 2, 2};
  std::string mode = "quotient";
  double eps = 1e-10;
  std::string grid = "1:10000:60";
  std::size_t budget = 5'000'000;
  unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::string out = ".";
  bool perturb = false;
  bool verify_symmetry = false;
};

void add_model_flags(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--n", cfg.params.n, "production lines")->check(CLI::PositiveNumber);
  cmd->add_option("--k", cfg.params.k, "branches per line")->check(CLI::PositiveNumber);
  cmd->add_option("--m", cfg.params.m, "items per branch")->check(CLI::PositiveNumber);
  cmd->add_option("--budget", cfg.budget, "maximum number of states")->check(CLI::PositiveNumber);
  cmd->add_option("--workers", cfg.workers, "exploration threads")->check(CLI::PositiveNumber);
  cmd->add_option("--out", cfg.out, "output directory");
}

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.out);
  std::ofstream f(fs::path(cfg.out) / name, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + (fs::path(cfg.out) / name).string());
  return f;
}

TransitionSystem run_explore(const RunConfig& cfg, Mode mode) {
  ExploreOptions opts;
  opts.mode = mode;
  opts.state_budget = cfg.budget;
  opts.workers = cfg.workers;
  const auto rules = ftps::rules(cfg.params);
  return explore(ftps::npl_system(cfg.params), rules, opts);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int report(const char* name, const CheckResult& r) {
  std::printf("%s %s (%zu checked)\n", r.passed ? "PASS" : "FAIL", name, r.checked);
  if (!r.passed) std::printf("  counterexample: %s\n", r.detail.c_str());
  return r.passed ? 0 : kCheckFailed;
}

int cmd_explore(const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto ts = run_explore(cfg, parse_mode(cfg.mode));
  const double elapsed = seconds_since(t0);
  std::printf("states=%zu final=%zu elapsed=%.3f\n", ts.states.size(), final_states(ts).size(),
              elapsed);
  {
    auto f = open_output(cfg, "states.txt");
    write_states(ts, f);
  }
  {
    auto f = open_output(cfg, "edges.txt");
    write_edges(ts, f);
  }
  {
    auto f = open_output(cfg, "generator.coo");
    write_generator(build_generator(ts), f);
  }
  if (cfg.verify_symmetry) {
    return report("normal form matches brute force", check_normalizer(ts.states));
  }
  return 0;
}

int cmd_solve(const RunConfig& cfg) {
  const auto grid = parse_grid(cfg.grid);
  const auto ts = run_explore(cfg, Mode::quotient);
  const auto q = build_generator(ts);
  const auto series = measure_series(ts, q, grid, cfg.eps);
  auto f = open_output(cfg, "measures.csv");
  write_measures_csv(series, f);
  std::printf("states=%zu grid=%zu final_reliability=%.6g\n", ts.states.size(), grid.size(),
              series.reliability.back());
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto quotient = run_explore(cfg, Mode::quotient);
  auto ordinary = run_explore(cfg, Mode::ordinary);
  std::printf("quotient states=%zu ordinary states=%zu\n", quotient.states.size(),
              ordinary.states.size());

  int status = 0;
  status |= report("normal form matches brute force", check_normalizer(quotient.states));

  const auto partition = class_partition(ordinary, quotient);
  if (cfg.perturb && !perturb_one_rate(ordinary, partition)) {
    std::printf("FAIL perturbation found no edge to modify\n");
    return kCheckFailed;
  }
  const auto q_ord = build_generator(ordinary);
  const auto lump = check_lumpability(q_ord, partition, 1e-9);
  status |= report("strong lumpability of the normal-form partition", lump);
  if (lump.passed) {
    status |= report("lumped generator equals quotient generator",
                     check_generators_equal(lump_generator(q_ord, partition, 1e-9),
                                            build_generator(quotient), 1e-9));
  } else {
    std::printf("FAIL lumped generator equals quotient generator (not lumpable)\n");
    status = kCheckFailed;
  }
  return status;
}

int cmd_export_net(const RunConfig& cfg) {
  auto f = open_output(cfg, "net.txt");
  f << to_text(normalize(ftps::npl_system(cfg.params))) << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Rewritable stochastic Petri nets: production system case study"};
  app.require_subcommand(1);
  RunConfig cfg;

  auto* explore_cmd = app.add_subcommand("explore", "build the transition system");
  add_model_flags(explore_cmd, cfg);
  explore_cmd->add_option("--mode", cfg.mode, "ordinary or quotient")
      ->check(CLI::IsMember({"ordinary", "quotient"}));
  explore_cmd->add_flag("--verify-symmetry", cfg.verify_symmetry,
                        "cross-check every state's normal form by brute force");

  auto* solve_cmd = app.add_subcommand("solve", "transient measures on the quotient chain");
  add_model_flags(solve_cmd, cfg);
  solve_cmd->add_option("--eps", cfg.eps, "uniformization accuracy")->check(CLI::PositiveNumber);
  solve_cmd->add_option("--grid", cfg.grid, "lo:hi:points (log-spaced) or t1,t2,...");

  auto* verify_cmd = app.add_subcommand("verify", "normal form and lumping checks");
  add_model_flags(verify_cmd, cfg);
  verify_cmd->add_flag("--perturb", cfg.perturb, "corrupt one ordinary rate (must fail)");

  auto* export_cmd = app.add_subcommand("export-net", "write the initial system");
  add_model_flags(export_cmd, cfg);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*explore_cmd) return cmd_explore(cfg);
    if (*solve_cmd) return cmd_solve(cfg);
    if (*verify_cmd) return cmd_verify(cfg);
    if (*export_cmd) return cmd_export_net(cfg);
  } catch (const BudgetExceeded& e) {
    std::fprintf(stderr, "%s: states=%zu edges=%zu levels=%zu\n", e.what(), e.stats.states,
                 e.stats.edges, e.stats.levels);
    return kBudgetExceeded;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kError;
  }
  return kError;
}
