#pragma once

// The four benchmark models:
//
//   bs_default    Black-Scholes basket, pricing with default risk
//   merton_default  Merton log-normal jump-diffusion, same pricing problem
//   vasicek_cc    Vasicek short-rate with uniform jumps, counterparty risk
//   expvg_cc      exponential Variance-Gamma, counterparty risk
//
// plus the payoff / nonlinearity building blocks they share.  Every factory
// exposes all parameters; make_preset() applies the published parameter sets
// and accepts name=value overrides.

#include <map>
#include <string>
#include <vector>

#include "problem.hpp"

namespace jumpsplit {

// ---------------------------------------------------------------------------
// Nonlinearities and payoffs

// Parameters of the default-intensity nonlinearity.
struct DefaultRiskParams {
    double gamma_h = 0.2;  // intensity below v_h   (1/time)
    double gamma_l = 0.02; // intensity above v_l   (1/time)
    double v_h = 25.0;     // lower value threshold (currency)
    double v_l = 50.0;     // upper value threshold (currency)
    double alpha = 2.0 / 3.0; // recovery fraction in [0,1)
    double R_rate = 0.02;  // discount rate         (1/time)
};

// Piecewise-linear default intensity Q(v): gamma_h on (-inf, v_h), gamma_l on
// [v_l, inf), linear interpolation in between (continuous on [v_h, v_l]).
double default_intensity(const DefaultRiskParams& params, double v);

// f(t,x,v) = -(1 - alpha) Q(v) v - R v   (x and t do not enter)
double f_default_risk(const DefaultRiskParams& params, double t, const double* x, double v);

// g(x) = min_i x_i
double g_min(const double* x, int d);

// g(x) = (min_i x_i - K1)^+ - (min_i x_i - K2)^+ - L        (requires K1 < K2)
double g_call_spread(const double* x, int d, double K1, double K2, double L);

// f(t,x,v) = -zeta min(v, 0)
double f_counterparty(double zeta, double v);

// ---------------------------------------------------------------------------
// Model factories.  Passing an empty x0 selects the published initial point;
// a single-element x0 is broadcast to all d coordinates.  T is last and
// defaulted so call sites normally use the published horizon.

PideProblem make_bs_default_model(int d, double mu0, double sigma0,
                                  const DefaultRiskParams& risk,
                                  std::vector<double> x0 = {},
                                  double T = 1.0 / 3.0);

PideProblem make_merton_model(int d, double mu0, double sigma0, double lambda,
                              double mu_z, double sigma_z,
                              const DefaultRiskParams& risk,
                              std::vector<double> x0 = {},
                              double T = 1.0 / 3.0);

PideProblem make_vasicek_jump_model(int d, double alpha_rev, double mu0,
                                    double sigma0, double lambda, double zeta,
                                    double K1, double K2, double L,
                                    std::vector<double> x0 = {},
                                    double T = 0.5);

PideProblem make_expvg_model(int d, double mu0, double sigma0, double alpha_g,
                             double kappa, double zeta,
                             double K1, double K2, double L,
                             std::vector<double> x0 = {},
                             double T = 0.5);

// Exact Variance-Gamma increment over dt via Gamma subordination:
// tau ~ Gamma(shape = alpha_g dt, rate = alpha_g), out = sqrt(kappa tau) G
// with G standard normal.  Used by the validation path engine only.
void simulate_vg_exact_increment(RngStream& stream, int d, double kappa,
                                 double alpha_g, double dt, double* out);

// ---------------------------------------------------------------------------
// Preset lookup for the CLI / C API.
//
// Known names: "bs_default", "merton_default", "vasicek_cc", "expvg_cc".
// overrides may remap any scalar parameter of the factory ("mu0", "sigma0",
// "lambda", "mu_z", "sigma_z", "alpha_rev", "zeta", "K1", "K2", "L",
// "alpha_g", "kappa", "T", "x0", plus the default-risk fields "gamma_h",
// "gamma_l", "v_h", "v_l", "alpha", "R_rate").  Unknown keys throw
// ParameterError, as does an unknown preset name.
PideProblem make_preset(const std::string& name, int d,
                        const std::map<std::string, double>& overrides = {});

std::vector<std::string> preset_names();

} // namespace jumpsplit
