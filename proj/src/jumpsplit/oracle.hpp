#pragma once

// Independent reference estimators used to validate the splitting solvers.
//
// mc_terminal: plain Monte-Carlo of E[g(X_T)] for linear problems (f == 0),
// run on a finer time grid than the solver under test (default 8x).
//
// picard_mc: fixed-point (Picard) iteration of the mild / Feynman-Kac form
//
//   u^{(0)}(t,x)   ~ E[ g(X_T^{t,x}) ]
//   u^{(k+1)}(t,x) ~ E[ g(X_T^{t,x}) ] + sum_m dt E[ f(t_m, X_{t_m}^{t,x},
//                                                  u^{(k)}(t_m, X_{t_m}^{t,x})) ]
//
// on a grid of grid_N steps, estimated by nested Monte Carlo: the outer
// expectation uses fresh paths, and the time sum is estimated per path by one
// uniformly drawn grid index m (weighted by the sub-horizon length), which
// keeps the nesting cost linear instead of grid_N-exponential.  All iterates
// u^{(0..K)} are computed in a single traversal over common random numbers,
// so successive-iterate differences reflect the Picard update rather than
// Monte-Carlo noise.  Small nested-sample schedule per recursion depth:
// S_1 = max(4, ceil(S_0/128)), S_2 = max(2, ceil(S_1/8)),
// S_k = max(2, ceil(S_{k-1}/2)) for k >= 3.
//
// Cost guard: picard_mc refuses to start when the projected coefficient-
// evaluation count, sum_{j=0..K} (prod_{i<=j} S_i) * grid_N * per_step with
// per_step = 2 (+ m_comp + 2 with jumps), exceeds 1e9; the refusal message
// carries the projection.  Projection counts simulated steps regardless of
// which path engine runs.
//
// Both estimators are reproducible for a fixed seed (chunk/path/node lanes)
// and parallelize over outer samples.  Problems carrying exact-law parameters
// (the exponential Variance-Gamma preset) are simulated with the exact engine,
// making the oracle independent of the jump-truncation scheme under test.

#include <cstdint>
#include <vector>

#include "euler.hpp"
#include "problem.hpp"

namespace jumpsplit {

struct OracleConfig {
    long long samples = 100000; // outer Monte-Carlo sample count S_0
    int picard_iters = 3;       // K, at most 4
    int grid_N = 96;            // time steps (8x the solver default N = 12)
    std::uint64_t seed = 1;
    double delta = 0.1; // jump truncation handed to the path engine
    int m_comp = 200;   // compensator draws per (path, step)
};

struct McResult {
    double mean = 0;
    double std_error = 0;
    long long evals = 0; // engine coefficient calls + g calls
};

struct PicardResult {
    double u0_estimate = 0; // u^{(K)}(0, x0)
    double std_error = 0;   // outer-sample standard error of u^{(K)}
    std::vector<double> iterates; // u^{(0)}, ..., u^{(K)} at (0, x0)
    long long evals = 0;          // engine coefficient calls + f calls + g calls
};

// Sample mean / standard error of g(X_T); the problem's f is ignored (caller
// asserts f == 0 when using this as a reference value).
McResult mc_terminal(const PideProblem& problem, const OracleConfig& config);

// Nested Picard Monte-Carlo estimate of u(0, x0).  Requires d <= 3 and
// 1 <= picard_iters <= 4; throws BudgetError when the projected cost exceeds
// 1e9 coefficient evaluations.
PicardResult picard_mc(const PideProblem& problem, const OracleConfig& config);

} // namespace jumpsplit
