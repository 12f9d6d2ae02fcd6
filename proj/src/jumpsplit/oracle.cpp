#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numeric>
#include <sstream>
#include <vector>

#include "errors.hpp"
#include "parallel.hpp"

namespace jumpsplit {

namespace {

using EngineFn = PathBatch (*)(const PideProblem&, const EulerConfig&, std::uint64_t);

EngineFn engine_for(const PideProblem& problem) {
    return problem.vg_exact ? &simulate_paths_vg_exact : &simulate_paths;
}

void check_common(const PideProblem& problem, const OracleConfig& cfg) {
    if (cfg.samples < 1) throw ParameterError("oracle: samples must be >= 1");
    if (cfg.grid_N < 1) throw ParameterError("oracle: grid_N must be >= 1");
    if (problem.has_jumps() && !problem.vg_exact) {
        if (!(cfg.delta > 0) || !(cfg.delta < 1))
            throw ParameterError("oracle: delta must lie in (0,1) for jump models");
        if (cfg.m_comp < 1) throw ParameterError("oracle: m_comp must be >= 1");
    }
    if (!problem.g) throw ParameterError("oracle: problem.g is not set");
}

// Deterministic chunking of the outer sample loop: at most ~8e6 state doubles
// (64 MB) live at once.  The chunk rule is part of the estimator's frozen
// behavior; changing it changes sample-to-lane assignment.
long long paths_per_chunk(long long samples, int grid_N, int d) {
    const long long per_path = static_cast<long long>(grid_N + 1) * d;
    long long chunk = 8000000 / std::max<long long>(1, per_path);
    chunk = std::max<long long>(1, chunk);
    return std::min(chunk, samples);
}

EulerConfig engine_config(const OracleConfig& cfg, int n_steps, long long J) {
    EulerConfig out;
    out.N = n_steps;
    out.delta = cfg.delta;
    out.m_comp = cfg.m_comp;
    out.J = J;
    return out;
}

// Sub-problem starting at (t0, x) with n_steps * dt to go.  The engine's own
// clock restarts at 0, so time-dependent coefficients are shifted by t0.  The
// start point is fixed: any initial sampler is dropped.
PideProblem make_subproblem(const PideProblem& base, double t0, const double* x,
                            double horizon) {
    PideProblem sub = base;
    sub.T = horizon;
    sub.x0.assign(x, x + base.d);
    sub.initial_sampler = nullptr;
    if (t0 != 0.0) {
        sub.mu = [f = base.mu, t0](double t, const double* xx, double* out) {
            f(t0 + t, xx, out);
        };
        sub.sigma_apply = [f = base.sigma_apply, t0](double t, const double* xx,
                                                     const double* w, double* out) {
            f(t0 + t, xx, w, out);
        };
        if (base.eta) {
            sub.eta = [f = base.eta, t0](double t, const double* xx, const double* z,
                                         double* out) { f(t0 + t, xx, z, out); };
        }
    }
    return sub;
}

struct MeanAccumulator {
    long double sum = 0, sumsq = 0;
    long long n = 0;
    void add(double v) {
        sum += v;
        sumsq += static_cast<long double>(v) * v;
        ++n;
    }
    double mean() const { return n ? static_cast<double>(sum / n) : 0.0; }
    double std_error() const {
        if (n < 2) return 0.0;
        const long double m = sum / n;
        long double var = (sumsq - static_cast<long double>(n) * m * m) / (n - 1);
        if (var < 0) var = 0;
        return static_cast<double>(std::sqrt(var / n));
    }
};

// Per-depth nested sample counts S_0..S_K.
std::vector<long long> nested_schedule(long long s0, int K) {
    std::vector<long long> s(static_cast<std::size_t>(K) + 1);
    s[0] = s0;
    for (int k = 1; k <= K; ++k) {
        const long long prev = s[k - 1];
        long long div = (k == 1) ? 128 : (k == 2) ? 8 : 2;
        long long floor_v = (k == 1) ? 4 : 2;
        s[k] = std::max(floor_v, (prev + div - 1) / div);
    }
    return s;
}

// Recursive single-traversal Picard node: returns the iterate estimates
// u^{(0..K-depth)}(t_index * dt, x).  evals accumulates engine + f + g calls.
std::vector<double> picard_node(const PideProblem& problem, EngineFn engine,
                                const OracleConfig& cfg, double dt, int K,
                                const std::vector<long long>& schedule, int t_index,
                                const double* x, std::uint64_t node_seed, int depth,
                                long long& evals) {
    const int kmax = K - depth;
    const int n_steps = cfg.grid_N - t_index;
    const double t0 = t_index * dt;
    std::vector<double> iterates(static_cast<std::size_t>(kmax) + 1, 0.0);
    if (n_steps <= 0) {
        const double gv = problem.g(x);
        evals += 1;
        std::fill(iterates.begin(), iterates.end(), gv);
        return iterates;
    }

    const long long S = schedule[static_cast<std::size_t>(depth)];
    const PideProblem sub = make_subproblem(problem, t0, x, n_steps * dt);
    const PathBatch batch = engine(sub, engine_config(cfg, n_steps, S), node_seed);
    evals += batch.eval_count;

    const double w = n_steps * dt; // uniform-index importance weight
    std::vector<long double> acc(static_cast<std::size_t>(kmax) + 1, 0.0L);
    std::vector<double> x_m(static_cast<std::size_t>(problem.d));
    for (long long j = 0; j < S; ++j) {
        const double gj = problem.g(batch.state(j, n_steps));
        evals += 1;
        acc[0] += gj;
        if (kmax >= 1) {
            RngStream pick = substream(node_seed,
                                       Lane{LANE_ORACLE, static_cast<std::uint32_t>(j), 1});
            const int idx = std::min<int>(n_steps - 1,
                                          static_cast<int>(pick.next_uniform() * n_steps));
            const int m = t_index + idx;
            std::memcpy(x_m.data(), batch.state(j, idx),
                        sizeof(double) * static_cast<std::size_t>(problem.d));
            const std::uint64_t child =
                derive_seed(node_seed, Lane{LANE_CHILD_SEED,
                                            static_cast<std::uint32_t>(j),
                                            static_cast<std::uint32_t>(m)});
            const std::vector<double> inner =
                picard_node(problem, engine, cfg, dt, K, schedule, m, x_m.data(),
                            child, depth + 1, evals);
            const double tm = m * dt;
            for (int k = 1; k <= kmax; ++k) {
                const double fv = problem.f(tm, x_m.data(), inner[static_cast<std::size_t>(k - 1)]);
                evals += 1;
                acc[static_cast<std::size_t>(k)] += gj + w * fv;
            }
        }
    }
    for (int k = 0; k <= kmax; ++k)
        iterates[static_cast<std::size_t>(k)] =
            static_cast<double>(acc[static_cast<std::size_t>(k)] / S);
    return iterates;
}

} // namespace

McResult mc_terminal(const PideProblem& problem, const OracleConfig& cfg) {
    check_common(problem, cfg);
    EngineFn engine = engine_for(problem);

    const long long chunk = paths_per_chunk(cfg.samples, cfg.grid_N, problem.d);
    MeanAccumulator acc;
    long long evals = 0;
    long long done = 0;
    std::uint32_t chunk_index = 0;
    while (done < cfg.samples) {
        const long long J = std::min(chunk, cfg.samples - done);
        const std::uint64_t chunk_seed =
            derive_seed(cfg.seed, Lane{LANE_ORACLE, chunk_index, 0});
        const PathBatch batch = engine(problem, engine_config(cfg, cfg.grid_N, J),
                                       chunk_seed);
        evals += batch.eval_count;
        for (long long j = 0; j < J; ++j) acc.add(problem.g(batch.state(j, cfg.grid_N)));
        evals += J;
        done += J;
        ++chunk_index;
    }

    McResult out;
    out.mean = acc.mean();
    out.std_error = acc.std_error();
    out.evals = evals;
    return out;
}

PicardResult picard_mc(const PideProblem& problem, const OracleConfig& cfg) {
    check_common(problem, cfg);
    if (problem.d > 3)
        throw ParameterError("picard_mc: requires d <= 3 (nested cost grows with d)");
    if (cfg.picard_iters < 1 || cfg.picard_iters > 4)
        throw ParameterError("picard_mc: picard_iters must lie in [1, 4]");
    if (!problem.f) throw ParameterError("picard_mc: problem.f is not set");

    const int K = cfg.picard_iters;
    const std::vector<long long> schedule = nested_schedule(cfg.samples, K);

    // Cost projection (documented in the header): refuse before doing work.
    const double per_step =
        2.0 + (problem.has_jumps() ? static_cast<double>(cfg.m_comp) + 2.0 : 0.0);
    double nodes_product = 1.0, projected_steps = 0.0;
    for (int j = 0; j <= K; ++j) {
        nodes_product *= static_cast<double>(schedule[static_cast<std::size_t>(j)]);
        projected_steps += nodes_product * cfg.grid_N;
    }
    const double projected = projected_steps * per_step;
    if (projected > 1e9) {
        std::ostringstream msg;
        msg << "picard_mc: projected ~" << projected
            << " coefficient evaluations exceed the 1e9 budget "
            << "(samples=" << cfg.samples << ", grid_N=" << cfg.grid_N
            << ", picard_iters=" << K << "); reduce one of them";
        throw BudgetError(msg.str());
    }

    EngineFn engine = engine_for(problem);
    const double dt = problem.T / cfg.grid_N;
    const long long chunk = paths_per_chunk(cfg.samples, cfg.grid_N, problem.d);

    std::vector<MeanAccumulator> acc(static_cast<std::size_t>(K) + 1);
    long long evals = 0;
    long long done = 0;
    std::uint32_t chunk_index = 0;
    while (done < cfg.samples) {
        const long long J = std::min(chunk, cfg.samples - done);
        const std::uint64_t chunk_seed =
            derive_seed(cfg.seed, Lane{LANE_ORACLE, chunk_index, 0});
        const PathBatch batch = engine(problem, engine_config(cfg, cfg.grid_N, J),
                                       chunk_seed);
        evals += batch.eval_count;

        // Per-path contributions, filled in parallel, reduced serially.
        std::vector<double> contrib(static_cast<std::size_t>(J) *
                                    (static_cast<std::size_t>(K) + 1));
        std::vector<long long> path_evals(static_cast<std::size_t>(J), 0);
        const long long global_offset = done;
        parallel_for(static_cast<std::size_t>(J), [&](std::size_t sj) {
            const long long j = static_cast<long long>(sj);
            double* row = contrib.data() + sj * (static_cast<std::size_t>(K) + 1);
            long long ev = 0;
            const double gj = problem.g(batch.state(j, cfg.grid_N));
            ev += 1;
            row[0] = gj;
            RngStream pick = substream(chunk_seed,
                                       Lane{LANE_ORACLE, static_cast<std::uint32_t>(j), 1});
            const int idx = std::min<int>(cfg.grid_N - 1,
                                          static_cast<int>(pick.next_uniform() * cfg.grid_N));
            std::vector<double> x_m(batch.state(j, idx),
                                    batch.state(j, idx) + problem.d);
            const std::uint64_t child = derive_seed(
                cfg.seed, Lane{LANE_CHILD_SEED,
                               static_cast<std::uint32_t>(global_offset + j),
                               static_cast<std::uint32_t>(idx)});
            const std::vector<double> inner =
                picard_node(problem, engine, cfg, dt, K, schedule, idx, x_m.data(),
                            child, 1, ev);
            const double w = cfg.grid_N * dt; // = T
            const double tm = idx * dt;
            for (int k = 1; k <= K; ++k) {
                const double fv =
                    problem.f(tm, x_m.data(), inner[static_cast<std::size_t>(k - 1)]);
                ev += 1;
                row[static_cast<std::size_t>(k)] = gj + w * fv;
            }
            path_evals[sj] = ev;
        });

        for (long long j = 0; j < J; ++j) {
            const double* row = contrib.data() +
                                static_cast<std::size_t>(j) *
                                    (static_cast<std::size_t>(K) + 1);
            for (int k = 0; k <= K; ++k) acc[static_cast<std::size_t>(k)].add(row[k]);
        }
        evals += std::accumulate(path_evals.begin(), path_evals.end(), 0LL);
        done += J;
        ++chunk_index;
    }

    PicardResult out;
    out.iterates.resize(static_cast<std::size_t>(K) + 1);
    for (int k = 0; k <= K; ++k)
        out.iterates[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].mean();
    out.u0_estimate = out.iterates.back();
    out.std_error = acc.back().std_error();
    out.evals = evals;
    return out;
}

} // namespace jumpsplit
