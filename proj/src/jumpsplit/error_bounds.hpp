#pragma once

#include <cstdint>

#include "problem.hpp"

namespace jumpsplit {

// Explicit worst-case error-budget machinery for the splitting scheme with
// random networks.  Every constant below is an exact transcription of a
// closed-form display; see error_bounds.cpp for the quoted formulas.
//
// The budget decomposes the mean-square error at a time grid point into four
// summands:
//
//   tail  = C_bar / theta^{q-2} * E[(d^p + ||xi||^2)^{q/2}]
//   discr = 64 * C_hat * d^p * (d^p + E||xi||^2) * e(d,N,delta,M)
//   gen   = 2 * C0 * theta^2 * (ln(J) + 1) * K / J
//   uat   = 64 * epsilon_uat
//
// with e(d,N,delta,M) = 1/N + delta^q d^p + delta^{-2} d^p / M.  K (the
// network width needed for a given approximation allowance) is existential in
// the theory and therefore always an input here, never derived.

struct BoundConstants {
    double c = 0;        // spatial Lipschitz constant of the solution map
    double c1 = 0;       // temporal 1/2-Hoelder constant
    double c2 = 0;       // one-step moment constant
    double c3 = 0;       // one-step consistency constant
    double C_tilde = 0;  // Euler strong-error constant
    double C_hat = 0;    // time-discretization budget constant
    double C_bar = 0;    // truncation-tail constant
    double C0 = 0;       // least-squares generalization constant
};

struct ErrorBudget {
    double tail = 0;   // theta-truncation tail summand
    double discr = 0;  // time-discretization summand
    double gen = 0;    // generalization summand
    double uat = 0;    // universal-approximation summand (64 * epsilon_uat)
    double total = 0;  // sum of the four summands
};

struct SelectedParameters {
    double theta = 0;        // truncation level
    std::int64_t N = 0;      // number of time steps
    double delta = 0;        // small-jump cutoff
    std::int64_t m_comp = 0; // compensator sample count M
    std::int64_t J = 0;      // regression batch size
};

// e(d,N,delta,M) = 1/N + delta^q d^p + delta^{-2} d^p / M, exactly.
// The constraint M >= delta^{-2} C_eta d^p is the caller's responsibility.
double euler_error_term(int d, double p, double q, std::int64_t N, double delta,
                        std::int64_t m_comp);

// All eight closed-form constants for the given theory parameters.
BoundConstants constants(const TheoryParams& params);

// The four budget summands and their total.  Requires q > 2 and
// m_comp >= delta^{-2} C_eta d^p; violations throw ParameterError naming the
// failing inequality.
ErrorBudget budget(const TheoryParams& params, std::int64_t N, double delta,
                   std::int64_t m_comp, std::int64_t K, std::int64_t J,
                   double theta, double epsilon_uat);

// Geometric-grid parameter selection for a target tolerance
// epsilon_target in (0,1):
//   theta: smallest power of two >= 1 with   tail(theta) <= eps/4
//   N:     smallest power of two             with   discr N-part <= eps/12
//   delta: largest 2^-k, k >= 1,             with   discr delta-part <= eps/12
//   M:     smallest power of two with the discr M-part <= eps/12 and
//          M >= delta^{-2} C_eta d^p
//   J:     smallest power of two with 2 C0 theta^2 (ln J + 1) K / J <= eps/4
// Grid caps: theta, N, M, J <= 1e9 and delta >= 1e-9; exceeding a cap throws
// ParameterError with an infeasibility report naming the parameter.
SelectedParameters select_parameters(const TheoryParams& params,
                                     double epsilon_target,
                                     std::int64_t K_given);

} // namespace jumpsplit
