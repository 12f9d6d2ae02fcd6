#pragma once

// Deep splitting backward recursion.  The chain starts from the terminal
// condition V_N = g and steps backward: at time slot n the regression target
// for path j is
//
//   Q_j = V_{n+1}(X_{n+1,j}) + dt f(t_{n+1}, X_{n+1,j}, V_{n+1}(X_{n+1,j})),
//
// and V_n is fitted to (X_{n,j}, Q_j) either as a random-feature readout
// (least squares; one shared hidden layer and one path batch for the whole
// recursion) or as a dense net trained by Adam (a fresh full-length batch per
// time step, warm-started from step n+1).

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "dense_net.hpp"
#include "euler.hpp"
#include "problem.hpp"
#include "random_features.hpp"

namespace jumpsplit {

// Piecewise-constant learning-rate schedule: rates[i] applies to epochs
// [cutoffs[i-1], cutoffs[i]), the last rate extends to the end.  The default
// is the published 1e-2 / 1e-3 / 1e-4 staircase with breaks at 500 and 1000.
struct LrSchedule {
    std::vector<double> rates{1e-2, 1e-3, 1e-4};
    std::vector<long long> cutoffs{500, 1000};

    double at(long long epoch) const {
        std::size_t i = 0;
        while (i < cutoffs.size() && epoch >= cutoffs[i]) ++i;
        return rates[std::min(i, rates.size() - 1)];
    }
};

struct SgdConfig {
    long long epochs = 2000;  // M
    long long minibatch = 0;  // 0 = full batch
    LrSchedule schedule;
    bool warm_start = true;   // initialize step n from step n+1's parameters
    bool streaming = false;   // fresh J samples per epoch (the J m + j variant)
};

struct SplittingConfig {
    enum class Method { random, deterministic };
    Method method = Method::random;
    EulerConfig euler;
    int K = 0;                     // 0 -> min(d, 2000)
    double truncation_theta = 0.0; // <= 0 means off
    int hidden_layers = 1;         // dense method depth
    SgdConfig sgd;                 // dense method training
    std::uint64_t master_seed = 1;
};

struct StepDiagnostics {
    int n = 0;
    double mse = 0.0;        // in-sample MSE after the fit
    double ridge_used = 0.0; // random method only
    double final_loss = 0.0; // deterministic method only (== last epoch loss)
    double wall_s = 0.0;
};

struct SplittingSolution {
    SplittingConfig::Method method = SplittingConfig::Method::random;
    int d = 0;
    int N = 0;
    double u0 = 0.0;
    long long eval_count = 0; // coefficient evaluations (mu, sigma, eta, f, g)
    double wall_s = 0.0;
    std::vector<StepDiagnostics> steps; // indexed by n = 0..N-1

    // Slot n holds the network for time t_n; slot n = N is g itself.
    std::vector<RandomFeatureNet> rf_nets; // random method
    std::vector<DenseNet> dense_nets;      // deterministic method
    std::function<double(const double*)> g;
};

// Clamp to [-theta, theta].
double truncate(double theta, double s);

// Regression targets for step n from the fitted next-step value function.
// next_value is g when n = N-1.  Adds J calls of f (plus the caller's own
// next_value accounting) per invocation.
std::vector<double> build_targets(const PideProblem& problem, int n,
                                  const std::function<double(const double*)>& next_value,
                                  const PathBatch& paths);

SplittingSolution solve_random(const PideProblem& problem, const SplittingConfig& config);
SplittingSolution solve_deterministic(const PideProblem& problem, const SplittingConfig& config);

// n = N returns g(x); otherwise evaluates the stored net for slot n.
double evaluate_solution(const SplittingSolution& solution, int n, const double* x);

} // namespace jumpsplit
