#include "splitting.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"

namespace jumpsplit {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// View of the step-k states of a batch as a J x d matrix (one path per row).
using StepView = Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>,
                            Eigen::Unaligned, Eigen::OuterStride<>>;

StepView step_states(const PathBatch& paths, int k) {
    return StepView(paths.values.data() + static_cast<std::size_t>(k) * paths.d,
                    paths.J, paths.d,
                    Eigen::OuterStride<>(static_cast<Eigen::Index>(paths.N + 1) * paths.d));
}

// Shared target formula: out_j = v_j + dt f(t_{n+1}, X_{n+1,j}, v_j).
void fill_targets(const PideProblem& problem, int n, const Eigen::VectorXd& next_vals,
                  const PathBatch& paths, Eigen::VectorXd& out) {
    if (n < 0 || n >= paths.N) throw ParameterError("build_targets: step index out of range");
    const double dt = paths.T / paths.N;
    const double t_next = (static_cast<double>(n + 1) * paths.T) / paths.N;
    out.resize(paths.J);
    for (long long j = 0; j < paths.J; ++j) {
        const double v = next_vals(j);
        const double q = v + dt * problem.f(t_next, paths.state(j, n + 1), v);
        if (!std::isfinite(q)) {
            std::ostringstream msg;
            msg << "build_targets: non-finite target at path " << j << ", step " << n;
            throw NumericError(msg.str());
        }
        out(j) = q;
    }
}

int resolve_K(const SplittingConfig& config, int d) {
    if (config.K > 0) return config.K;
    return std::min(d, 2000);
}

void apply_truncation(double theta, Eigen::VectorXd& q) {
    if (theta > 0.0) {
        for (Eigen::Index j = 0; j < q.size(); ++j) q(j) = truncate(theta, q(j));
    }
}

} // namespace

double truncate(double theta, double s) {
    if (!(theta > 0.0)) throw ParameterError("truncate: theta must be positive");
    return std::min(std::max(s, -theta), theta);
}

std::vector<double> build_targets(const PideProblem& problem, int n,
                                  const std::function<double(const double*)>& next_value,
                                  const PathBatch& paths) {
    Eigen::VectorXd next_vals(paths.J);
    for (long long j = 0; j < paths.J; ++j) next_vals(j) = next_value(paths.state(j, n + 1));
    Eigen::VectorXd q;
    fill_targets(problem, n, next_vals, paths, q);
    return std::vector<double>(q.data(), q.data() + q.size());
}

SplittingSolution solve_random(const PideProblem& problem, const SplittingConfig& config) {
    if (config.method != SplittingConfig::Method::random) {
        throw ParameterError("solve_random: config.method must be 'random'");
    }
    if (config.euler.J < 2) {
        throw ParameterError("solve_random: J >= 2 required (normalization stats)");
    }
    const auto t_start = Clock::now();
    const int d = problem.d;
    const int N = config.euler.N;
    const int K = resolve_K(config, d);

    const std::uint64_t batch_seed = derive_seed(config.master_seed, Lane{LANE_STEP_BATCH, 0, 0});
    const std::uint64_t net_seed = derive_seed(config.master_seed, Lane{LANE_NET_INIT, 0, 0});

    // One path batch and one hidden layer serve the whole backward recursion.
    PathBatch paths = simulate_paths(problem, config.euler, batch_seed);
    long long evals = paths.eval_count;
    const RandomFeatureNet base = init_random_features(d, K, net_seed);

    SplittingSolution sol;
    sol.method = SplittingConfig::Method::random;
    sol.d = d;
    sol.N = N;
    sol.g = problem.g;
    sol.rf_nets.resize(N);
    sol.steps.resize(N);

    // V_N = g evaluated on the terminal slice.
    Eigen::VectorXd next_vals(paths.J);
    for (long long j = 0; j < paths.J; ++j) next_vals(j) = problem.g(paths.state(j, N));
    evals += paths.J;

    Eigen::VectorXd targets;
    for (int n = N - 1; n >= 0; --n) {
        const auto t_step = Clock::now();
        fill_targets(problem, n, next_vals, paths, targets);
        evals += paths.J;
        apply_truncation(config.truncation_theta, targets);

        RandomFeatureNet net = base; // shares A, B; stats/readout are per step
        const Eigen::MatrixXd Xn = step_states(paths, n);
        const Eigen::MatrixXd R = freeze_norm_and_features(net, Xn);

        StepDiagnostics diag;
        diag.n = n;
        net.y = rf_fit_readout(R, targets, &diag.ridge_used);

        // Fitted values at X_n are exactly the next step's V_{n+1} chain.
        next_vals.noalias() = R * net.y;
        diag.mse = (next_vals - targets).squaredNorm() / static_cast<double>(paths.J);
        diag.wall_s = seconds_since(t_step);
        sol.steps[n] = diag;
        sol.rf_nets[n] = std::move(net);
    }

    if (problem.initial_sampler) {
        sol.u0 = next_vals.mean(); // mean of V_0 over the initial draws
    } else {
        sol.u0 = rf_eval(sol.rf_nets[0], problem.x0.data());
    }
    sol.eval_count = evals;
    sol.wall_s = seconds_since(t_start);
    return sol;
}

SplittingSolution solve_deterministic(const PideProblem& problem, const SplittingConfig& config) {
    if (config.method != SplittingConfig::Method::deterministic) {
        throw ParameterError("solve_deterministic: config.method must be 'deterministic'");
    }
    if (config.sgd.epochs < 1) throw ParameterError("solve_deterministic: epochs must be >= 1");
    const auto t_start = Clock::now();
    const int d = problem.d;
    const int N = config.euler.N;
    const int K = resolve_K(config, d);
    const double theta = config.truncation_theta;
    const SgdConfig& sgd = config.sgd;

    SplittingSolution sol;
    sol.method = SplittingConfig::Method::deterministic;
    sol.d = d;
    sol.N = N;
    sol.g = problem.g;
    sol.dense_nets.resize(N);
    sol.steps.resize(N);
    long long evals = 0;

    const std::uint64_t net_seed = derive_seed(config.master_seed, Lane{LANE_NET_INIT, 0, 1});
    DenseNet carry = init_dense_net(d, K, config.hidden_layers, net_seed);

    Eigen::MatrixXd X0_last; // step-0 states of the n = 0 batch (for xi means)

    for (int n = N - 1; n >= 0; --n) {
        const auto t_step = Clock::now();

        // Fresh full-length batch for this time step; columns n and n+1 feed
        // the regression.
        const std::uint64_t batch_seed =
            derive_seed(config.master_seed, Lane{LANE_STEP_BATCH, static_cast<std::uint32_t>(n), 1});
        PathBatch paths = simulate_paths(problem, config.euler, batch_seed);
        evals += paths.eval_count;
        const long long J = paths.J;

        Eigen::VectorXd next_vals(J);
        const Eigen::MatrixXd Xnext = step_states(paths, n + 1);
        if (n == N - 1) {
            for (long long j = 0; j < J; ++j) next_vals(j) = problem.g(paths.state(j, N));
            evals += J;
        } else {
            next_vals = dense_eval_batch(sol.dense_nets[n + 1], Xnext);
        }
        Eigen::VectorXd targets;
        fill_targets(problem, n, next_vals, paths, targets);
        evals += J;
        apply_truncation(theta, targets);

        DenseNet net = sgd.warm_start
                           ? carry
                           : init_dense_net(d, K, config.hidden_layers,
                                            derive_seed(config.master_seed,
                                                        Lane{LANE_NET_INIT, static_cast<std::uint32_t>(n), 2}));
        AdamState state = make_adam_state(net);
        Eigen::MatrixXd Xn = step_states(paths, n);
        // Refreeze batch standardization on this step's data; the warm-started
        // core then only tracks the small step-to-step target drift.
        set_standardization(net, Xn, targets);

        auto check_divergence = [&](const Eigen::MatrixXd& X, const Eigen::VectorXd& Q, long long epoch) {
            const double loss = dense_loss(net, X, Q);
            if (!(loss < 1e12)) {
                std::ostringstream msg;
                msg << "solve_deterministic: training diverged at step " << n << ", epoch "
                    << epoch << " (loss " << loss << ")";
                throw NumericError(msg.str());
            }
            return loss;
        };

        double final_loss = 0.0;
        if (sgd.streaming) {
            // Streaming variant: one fresh batch of J samples per epoch.
            for (long long m = 0; m < sgd.epochs; ++m) {
                const std::uint64_t epoch_seed = derive_seed(
                    config.master_seed,
                    Lane{LANE_SGD, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)});
                PathBatch stream_paths = simulate_paths(problem, config.euler, epoch_seed);
                evals += stream_paths.eval_count;
                Eigen::VectorXd sv(J);
                const Eigen::MatrixXd sXnext = step_states(stream_paths, n + 1);
                if (n == N - 1) {
                    for (long long j = 0; j < J; ++j) sv(j) = problem.g(stream_paths.state(j, N));
                    evals += J;
                } else {
                    sv = dense_eval_batch(sol.dense_nets[n + 1], sXnext);
                }
                Eigen::VectorXd sq;
                fill_targets(problem, n, sv, stream_paths, sq);
                evals += J;
                apply_truncation(theta, sq);
                const Eigen::MatrixXd sXn = step_states(stream_paths, n);
                adam_step(net, state, dense_grad(net, sXn, sq), sgd.schedule.at(m));
                if (m % 100 == 99) final_loss = check_divergence(sXn, sq, m);
                if (n == 0 && m + 1 == sgd.epochs) X0_last = sXn;
            }
            if (n == 0 && X0_last.rows() == 0) X0_last = Xn;
            final_loss = dense_loss(net, Xn, targets);
        } else if (sgd.minibatch > 0 && sgd.minibatch < J) {
            std::vector<Eigen::Index> order(static_cast<std::size_t>(J));
            std::iota(order.begin(), order.end(), 0);
            for (long long m = 0; m < sgd.epochs; ++m) {
                // Deterministic Fisher-Yates reshuffle per epoch.
                RngStream shuffle = substream(
                    config.master_seed,
                    Lane{LANE_SGD, static_cast<std::uint32_t>(n), static_cast<std::uint32_t>(m)});
                for (std::size_t i = order.size(); i > 1; --i) {
                    const std::size_t r = static_cast<std::size_t>(shuffle.next_u64() % i);
                    std::swap(order[i - 1], order[r]);
                }
                const double lr = sgd.schedule.at(m);
                for (long long lo = 0; lo < J; lo += sgd.minibatch) {
                    const long long len = std::min<long long>(sgd.minibatch, J - lo);
                    Eigen::MatrixXd Xb(len, d);
                    Eigen::VectorXd Qb(len);
                    for (long long i = 0; i < len; ++i) {
                        Xb.row(i) = Xn.row(order[static_cast<std::size_t>(lo + i)]);
                        Qb(i) = targets(order[static_cast<std::size_t>(lo + i)]);
                    }
                    adam_step(net, state, dense_grad(net, Xb, Qb), lr);
                }
                if (m % 100 == 99) check_divergence(Xn, targets, m);
            }
            final_loss = dense_loss(net, Xn, targets);
        } else {
            for (long long m = 0; m < sgd.epochs; ++m) {
                adam_step(net, state, dense_grad(net, Xn, targets), sgd.schedule.at(m));
                if (m % 100 == 99) check_divergence(Xn, targets, m);
            }
            final_loss = dense_loss(net, Xn, targets);
        }

        if (n == 0 && X0_last.rows() == 0) X0_last = std::move(Xn);

        StepDiagnostics diag;
        diag.n = n;
        diag.mse = final_loss;
        diag.final_loss = final_loss;
        diag.wall_s = seconds_since(t_step);
        sol.steps[n] = diag;
        carry = net;
        sol.dense_nets[n] = std::move(net);
    }

    if (problem.initial_sampler) {
        sol.u0 = dense_eval_batch(sol.dense_nets[0], X0_last).mean();
    } else {
        sol.u0 = dense_eval(sol.dense_nets[0], problem.x0.data());
    }
    sol.eval_count = evals;
    sol.wall_s = seconds_since(t_start);
    return sol;
}

double evaluate_solution(const SplittingSolution& solution, int n, const double* x) {
    if (n < 0 || n > solution.N) throw ParameterError("evaluate_solution: step index out of range");
    if (n == solution.N) return solution.g(x);
    if (solution.method == SplittingConfig::Method::random) {
        return rf_eval(solution.rf_nets[static_cast<std::size_t>(n)], x);
    }
    return dense_eval(solution.dense_nets[static_cast<std::size_t>(n)], x);
}

} // namespace jumpsplit
