#include "euler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "errors.hpp"
#include "models.hpp"
#include "parallel.hpp"

namespace jumpsplit {

namespace {

void check_config(const EulerConfig& config, bool has_jumps) {
    if (config.N < 1) throw ParameterError("euler: N must be >= 1");
    if (config.J < 1) throw ParameterError("euler: J must be >= 1");
    if (has_jumps) {
        if (!(config.delta > 0.0 && config.delta < 1.0)) {
            throw ParameterError("euler: delta must lie in (0,1)");
        }
        if (config.m_comp < 1) throw ParameterError("euler: m_comp must be >= 1");
    }
}

void check_finite(const double* x, int d, long long j, int k) {
    for (int i = 0; i < d; ++i) {
        if (!std::isfinite(x[i])) {
            std::ostringstream msg;
            msg << "euler: non-finite state (component " << i << ") at path " << j
                << ", step " << k;
            throw NumericError(msg.str());
        }
    }
}

void write_initial(const PideProblem& problem, std::uint64_t seed, long long j, double* out) {
    if (problem.initial_sampler) {
        RngStream s = substream(seed, Lane{LANE_INIT, static_cast<std::uint32_t>(j), 0});
        problem.initial_sampler(s, out);
    } else {
        std::copy(problem.x0.begin(), problem.x0.end(), out);
    }
}

} // namespace

PathBatch simulate_paths(const PideProblem& problem, const EulerConfig& config,
                         std::uint64_t master_seed) {
    const bool jumps = problem.has_jumps();
    check_config(config, jumps);
    const int d = problem.d;
    const int N = config.N;
    const double dt = problem.T / N;
    const double sqrt_dt = std::sqrt(dt);
    const double lambda_delta = jumps ? problem.jumps->intensity_above(config.delta) : 0.0;
    if (jumps && !std::isfinite(lambda_delta)) {
        throw ParameterError("euler: jump intensity at this delta is not finite");
    }

    PathBatch batch;
    batch.d = d;
    batch.N = N;
    batch.J = config.J;
    batch.T = problem.T;
    batch.master_seed = master_seed;
    batch.values.resize(static_cast<std::size_t>(config.J) * (N + 1) * d);

    std::vector<long long> evals(static_cast<std::size_t>(config.J), 0);

    parallel_for(static_cast<std::size_t>(config.J), [&](std::size_t sj) {
        const long long j = static_cast<long long>(sj);
        const std::uint32_t j32 = static_cast<std::uint32_t>(j);
        thread_local std::vector<double> gk, drift, diff, z, ez, acc;
        gk.resize(d);
        drift.resize(d);
        diff.resize(d);
        z.resize(d);
        ez.resize(d);
        acc.resize(d);

        double* x = batch.state(j, 0);
        write_initial(problem, master_seed, j, x);
        check_finite(x, d, j, 0);
        long long count = 0;

        for (int k = 0; k < N; ++k) {
            const double t_k = (static_cast<double>(k) * problem.T) / N;
            const double* xk = batch.state(j, k);
            double* xn = batch.state(j, k + 1);

            problem.mu(t_k, xk, drift.data());
            ++count;

            RngStream bs = substream(master_seed, Lane{LANE_BROWNIAN, j32, static_cast<std::uint32_t>(k)});
            bs.fill_normal(gk.data(), static_cast<std::size_t>(d));
            for (int i = 0; i < d; ++i) gk[i] *= sqrt_dt;
            problem.sigma_apply(t_k, xk, gk.data(), diff.data());
            ++count;

            for (int i = 0; i < d; ++i) xn[i] = xk[i] + drift[i] * dt + diff[i];

            if (jumps) {
                RngStream ps = substream(master_seed, Lane{LANE_POISSON, j32, static_cast<std::uint32_t>(k)});
                const long long p_k = ps.sample_poisson(lambda_delta * dt);
                if (p_k > 0) {
                    RngStream js = substream(master_seed, Lane{LANE_JUMP, j32, static_cast<std::uint32_t>(k)});
                    for (long long i = 0; i < p_k; ++i) {
                        problem.jumps->sample_above(js, config.delta, z.data());
                        problem.eta(t_k, xk, z.data(), ez.data());
                        ++count;
                        for (int c = 0; c < d; ++c) xn[c] += ez[c];
                    }
                }
                RngStream cs = substream(master_seed, Lane{LANE_COMP, j32, static_cast<std::uint32_t>(k)});
                std::fill(acc.begin(), acc.end(), 0.0);
                for (int i = 0; i < config.m_comp; ++i) {
                    problem.jumps->sample_above(cs, config.delta, z.data());
                    problem.eta(t_k, xk, z.data(), ez.data());
                    ++count;
                    for (int c = 0; c < d; ++c) acc[c] += ez[c];
                }
                const double w = dt * lambda_delta / config.m_comp;
                for (int c = 0; c < d; ++c) xn[c] -= w * acc[c];
            }

            check_finite(xn, d, j, k + 1);
        }
        evals[sj] = count;
    });

    batch.eval_count = std::accumulate(evals.begin(), evals.end(), 0LL);
    return batch;
}

PathBatch simulate_paths_vg_exact(const PideProblem& problem, const EulerConfig& config,
                                  std::uint64_t master_seed) {
    if (!problem.vg_exact) {
        throw ParameterError("simulate_paths_vg_exact: problem is not the exponential VG model");
    }
    check_config(config, /*has_jumps=*/false);
    const int d = problem.d;
    const int N = config.N;
    const double dt = problem.T / N;
    const double sqrt_dt = std::sqrt(dt);
    const auto vg = *problem.vg_exact;

    PathBatch batch;
    batch.d = d;
    batch.N = N;
    batch.J = config.J;
    batch.T = problem.T;
    batch.master_seed = master_seed;
    batch.values.resize(static_cast<std::size_t>(config.J) * (N + 1) * d);

    parallel_for(static_cast<std::size_t>(config.J), [&](std::size_t sj) {
        const long long j = static_cast<long long>(sj);
        const std::uint32_t j32 = static_cast<std::uint32_t>(j);
        thread_local std::vector<double> gk, dz;
        gk.resize(d);
        dz.resize(d);

        double* x = batch.state(j, 0);
        write_initial(problem, master_seed, j, x);
        check_finite(x, d, j, 0);

        for (int k = 0; k < N; ++k) {
            const double* xk = batch.state(j, k);
            double* xn = batch.state(j, k + 1);
            RngStream bs = substream(master_seed, Lane{LANE_BROWNIAN, j32, static_cast<std::uint32_t>(k)});
            bs.fill_normal(gk.data(), static_cast<std::size_t>(d));
            RngStream js = substream(master_seed, Lane{LANE_JUMP, j32, static_cast<std::uint32_t>(k)});
            simulate_vg_exact_increment(js, d, vg.kappa, vg.alpha, dt, dz.data());
            for (int i = 0; i < d; ++i) {
                const double l_inc = vg.mu0 * dt + vg.sigma0 * sqrt_dt * gk[i] + dz[i];
                xn[i] = xk[i] * std::exp(l_inc);
            }
            check_finite(xn, d, j, k + 1);
        }
    });

    return batch;
}

} // namespace jumpsplit
