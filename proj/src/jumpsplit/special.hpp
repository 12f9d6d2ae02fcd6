#pragma once

#include <functional>

namespace jumpsplit {

// Upper regularized incomplete gamma function Q(a, x) = Γ(a,x)/Γ(a).
// Series for x < a+1, Lentz continued fraction otherwise; relative error
// <= 1e-12 for a <= 1e4 (larger a rejected: the library only needs
// chi-square tails up to ~2e4 degrees of freedom, i.e. a = d/2 <= 1e4).
double regularized_gamma_q(double a, double x);

// Solve Q(a, x) = u for x (Q is strictly decreasing in x).  Bracketed
// bisection with Newton polish; returns x with |Q(a,x) - u| <= 1e-10.
double inverse_regularized_gamma_q(double a, double u);

// Adaptive Simpson quadrature of f on [a, b].  Used for the jump-measure
// integrals of the exponential Variance-Gamma model and by test oracles.
// Throws NumericError if the depth limit is hit before the tolerance.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-10, double abs_tol = 0.0);

} // namespace jumpsplit
