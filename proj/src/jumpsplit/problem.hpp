#pragma once

// Problem abstraction: everything a solver needs to know about one semilinear
// PIDE / its forward SDE.  Coefficients are stored as callables acting on raw
// pointers so that no d x d object is ever materialized (all benchmark models
// have scalar-identity or diagonal diffusion; a dense model can still be
// expressed through sigma_apply).
//
// Terminal value problem solved everywhere in this library:
//
//   du/dt + mu.grad u + 1/2 tr(sigma sigma^T hess u)
//         + integral of [u(t, x + eta(t,x,z)) - u(t,x) - eta(t,x,z).grad u] nu(dz)
//         + f(t, x, u) = 0,          u(T, x) = g(x).

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rng.hpp"

namespace jumpsplit {

// Constants of the a-priori error analysis (Lipschitz/growth data of the
// model).  They cannot be derived from the coefficient callables, so they are
// user-supplied metadata; the bounds module consumes them.
struct TheoryParams {
    double L = 1.0;   // Lipschitz / linear-growth constant
    double L1 = 1.0;  // temporal 1/2-Hoelder constant (drift/diffusion)
    double L2 = 1.0;  // temporal 1/2-Hoelder constant (jump coefficient)
    double C_eta = 1.0; // small-jump moment constant
    double T = 1.0;   // horizon (duplicated here so bounds is self-contained)
    double p = 1.0;   // dimension growth exponent
    double q = 4.0;   // moment exponent, must be > 2 for generalization bounds
    int d = 1;
    double xi_second_moment = 0.0; // E |xi|^2 of the initial law
    double xi_q_moment = 1.0;      // E (d^p + |xi|^2)^{q/2}
};

// Jump part of the model: the Levy measure nu restricted to
// A_delta = { z : |z| >= delta }, exposed through its total mass and a
// sampler of the normalized restriction nu_delta.
class JumpMeasure {
public:
    enum class Activity { finite, infinite };

    virtual ~JumpMeasure() = default;

    // lambda_delta = nu(A_delta).  Non-increasing in delta.  delta = 0 is
    // allowed for finite-activity measures and returns the total mass.
    virtual double intensity_above(double delta) const = 0;

    // Draw z ~ nu_delta = nu(. intersect A_delta) / nu(A_delta) into out[0..d).
    // Every returned z satisfies |z| >= delta.
    virtual void sample_above(RngStream& stream, double delta, double* out) const = 0;

    virtual Activity activity() const = 0;
    virtual int dim() const = 0;
};

struct PideProblem {
    int d = 1;
    double T = 1.0;

    // Coefficient callables.  All are pure; out has length d.
    //   mu(t, x, out)            drift vector
    //   sigma_apply(t, x, w, out)  action of sigma(t,x) on a d-vector w
    //   eta(t, x, z, out)        jump coefficient (only when jumps is set)
    std::function<void(double, const double*, double*)> mu;
    std::function<void(double, const double*, const double*, double*)> sigma_apply;
    std::function<void(double, const double*, const double*, double*)> eta;

    std::shared_ptr<const JumpMeasure> jumps; // null = continuous model

    // Nonlinearity f(t, x, v) and terminal condition g(x).
    std::function<double(double, const double*, double)> f;
    std::function<double(const double*)> g;

    // Initial law: fixed point x0, or a sampler writing one draw of xi into
    // out[0..d).  When initial_sampler is set it takes precedence.
    std::vector<double> x0;
    std::function<void(RngStream&, double*)> initial_sampler;

    std::optional<TheoryParams> theory;

    // Set on the exponential Variance-Gamma preset only: parameters needed by
    // the exact (subordination-based) path engine used for cross-validation.
    struct VgExactParams {
        double mu0, sigma0, kappa, alpha;
    };
    std::optional<VgExactParams> vg_exact;

    std::string name; // preset name or empty for ad-hoc problems

    bool has_jumps() const { return static_cast<bool>(jumps); }
};

} // namespace jumpsplit
