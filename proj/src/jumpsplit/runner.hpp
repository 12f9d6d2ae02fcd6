#pragma once

// Batch runner: reproduces the benchmark tables at desk scale.  A JSON config
// selects a preset model, dimensions, method(s), and solver parameters; the
// sweep executes `runs` independent solves per (d, method) cell with seeds
// derived per (model-id, d, run) — adding dimensions or methods never
// perturbs existing rows — and aggregates them into a fixed-schema CSV
//
//   d,method,mean_u0,std_u0,mean_runtime_s,mean_evals
//
// plus a JSON file with full per-run diagnostics.  Solver failures are
// recorded per run without aborting the sweep; rows aggregate the completed
// runs of each cell.
//
// This header also hosts the thin JSON front-ends for the bounds and oracle
// subcommands so that the C API / CLI stay declaration-only.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "euler.hpp"
#include "splitting.hpp"

namespace jumpsplit {

struct RunConfig {
    std::string preset;                       // model.preset
    std::map<std::string, double> overrides;  // other model.* keys
    std::vector<int> dims;
    std::vector<SplittingConfig::Method> methods; // expanded from "method"
    EulerConfig euler;   // euler.{N,delta,m_comp}; J copied from train.J
    int K = 0;           // net.K; 0 = the min(d, 2000) policy
    SgdConfig sgd;       // train.{epochs, lr}; J lives in euler.J
    int runs = 10;
    std::uint64_t seed = 1;
    std::string output = "results";
};

// Parse / validate a config.  Unknown keys anywhere are rejected; messages
// name the offending field.  Throws ConfigError.
RunConfig parse_run_config(const std::string& json_text);
RunConfig load_run_config(const std::string& path);

// Single-solve config for the C API: accepts the keys "method", "euler",
// "net", "train", "seed", "truncation_theta" with the same sub-schemas as the
// run config (all optional).
SplittingConfig parse_solver_config(const std::string& json_text);

// One solution's diagnostics as a JSON document.
std::string solution_diagnostics_json(const SplittingSolution& solution);

struct RunRecord {
    std::string preset;
    int d = 0;
    SplittingConfig::Method method = SplittingConfig::Method::random;
    int run_index = 0;
    std::uint64_t run_seed = 0;
    bool ok = false;
    std::string error;
    double u0 = 0.0;
    double runtime_s = 0.0;
    long long evals = 0;
    std::vector<StepDiagnostics> steps;
};

struct SweepResult {
    std::vector<RunRecord> records; // in (d, method, run) execution order
    bool all_ok = true;
};

const char* method_name(SplittingConfig::Method m);

// Seed for run r of dimension d: derive_seed(master,
// {LANE_RUN_SEED, model_id * 1000000 + d, r}) with model_id the preset's
// index in preset_names().
std::uint64_t run_seed_for(std::uint64_t master_seed, const std::string& preset,
                           int d, int run_index);

// Execute the sweep (sequential over cells and runs; each solve parallelizes
// internally, which keeps per-run timings honest).
SweepResult run_sweep(const RunConfig& config);

// Aggregated CSV (header always present; one row per (d, method) cell with at
// least one completed run, in config order).
std::string sweep_csv(const RunConfig& config, const SweepResult& result);

// Full per-run diagnostics as a JSON document (deterministic key order).
std::string sweep_diagnostics_json(const RunConfig& config, const SweepResult& result);

// Write results.csv + runs.json under out_dir (created if needed; out_dir
// empty means use config.output).
void write_sweep_outputs(const RunConfig& config, const SweepResult& result,
                         const std::string& out_dir);

// Front-end for the `bounds` subcommand: input
//   { "theory": {L, L1, L2, C_eta, T, p, q, d, xi_second_moment, xi_q_moment},
//     "budget": {N, delta, m_comp, K, J, theta, epsilon_uat},   (optional)
//     "select": {epsilon_target, K},                            (optional)
//     "format": "json" | "csv" }                                (optional)
// and output: the constants plus any requested budget/selection, as JSON
// (default) or a name,value CSV table.
std::string bounds_report(const std::string& json_text);

// Front-end for the `oracle` subcommand: input
//   { "model": {"preset": name, ...overrides}, "d": int,
//     "mode": "mc_terminal" | "picard",
//     "samples", "picard_iters", "grid_N", "seed", "delta", "m_comp" }
// and output JSON {estimate, stderr, evals} (+ "iterates" for picard).
std::string oracle_report(const std::string& json_text);

// Front-end for the `paths` subcommand (simulated path dump): input
//   { "model": {"preset": name, ...overrides}, "d": int,
//     "euler": {N, delta, m_comp}, "J": int, "seed": int }
// and output: CSV with header j,k,x_1..x_d, one row per (path, grid node) in
// (j, k) order.  Restricted to d <= 16 to keep the dump human-scaled.
std::string paths_csv(const std::string& json_text);

} // namespace jumpsplit
