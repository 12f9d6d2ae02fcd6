#pragma once

// Truncated-jump Euler-Maruyama path engine.
//
// On the grid t_k = kT/N the scheme reads
//
//   X_{k+1} = X_k + mu(t_k, X_k) dt + sigma(t_k, X_k) (sqrt(dt) G_k)
//           + sum_{i=1}^{P_k} eta(t_k, X_k, Z_i)
//           - dt lambda_delta (1/M) sum_{i=1}^{M} eta(t_k, X_k, V_i),
//
// with G_k standard normal, P_k ~ Poisson(lambda_delta dt), and Z_i, V_i
// i.i.d. draws from the truncated normalized jump measure nu_delta.  Jumps of
// norm below delta are dropped entirely; the Monte-Carlo compensator (last
// sum) restores their drift in expectation.
//
// Randomness is drawn from counter-based lanes keyed by (channel, path j,
// step k), so paths are mutually independent, the batch is bit-reproducible
// for any thread count, and a continuous model consumes no jump randomness.

#include <cstdint>
#include <vector>

#include "problem.hpp"

namespace jumpsplit {

struct EulerConfig {
    int N = 12;         // time steps
    double delta = 0.1; // jump truncation level, in (0,1)
    int m_comp = 200;   // compensator sample count M per (path, step)
    long long J = 500;  // number of paths
};

struct PathBatch {
    int d = 0;
    int N = 0;
    long long J = 0;
    double T = 0.0;
    std::uint64_t master_seed = 0; // seed lineage; lanes are the fixed channel tags
    long long eval_count = 0;      // coefficient calls (mu, sigma_apply, eta)

    // Row-major J x (N+1) x d states; values[j][0] is the initial point.
    std::vector<double> values;

    const double* state(long long j, int k) const {
        return values.data() + (j * (N + 1) + k) * d;
    }
    double* state(long long j, int k) {
        return values.data() + (j * (N + 1) + k) * d;
    }
};

// Simulate J truncated-Euler paths.  Distinct batches must be given distinct
// master seeds (derive them with derive_seed); identical (problem, config,
// seed) triples reproduce bit-identical batches.
PathBatch simulate_paths(const PideProblem& problem, const EulerConfig& config,
                         std::uint64_t master_seed);

// Exact-law engine for the exponential Variance-Gamma preset: increments of
// the log-process are drawn from the subordination representation and
// exponentiated, bypassing the Euler scheme and the coefficient callables
// entirely (eval_count stays 0).  Validation use only.
PathBatch simulate_paths_vg_exact(const PideProblem& problem, const EulerConfig& config,
                                  std::uint64_t master_seed);

inline long long count_evaluations(const PathBatch& batch) { return batch.eval_count; }

} // namespace jumpsplit
