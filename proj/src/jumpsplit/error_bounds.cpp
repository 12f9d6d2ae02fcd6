#include "error_bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace jumpsplit {

namespace {

void check_params(const TheoryParams& tp) {
    if (!(tp.L > 0) || !(tp.L1 > 0) || !(tp.L2 > 0) || !(tp.C_eta > 0))
        throw ParameterError("TheoryParams: L, L1, L2, C_eta must be positive");
    if (!(tp.T > 0)) throw ParameterError("TheoryParams: T must be positive");
    if (!(tp.p > 0) || !(tp.q > 0))
        throw ParameterError("TheoryParams: p, q must be positive");
    if (tp.d < 1) throw ParameterError("TheoryParams: d must be >= 1");
    if (tp.xi_second_moment < 0)
        throw ParameterError("TheoryParams: xi_second_moment must be >= 0");
    if (!(tp.xi_q_moment > 0))
        throw ParameterError("TheoryParams: xi_q_moment must be positive");
}

void require_q_above_two(const TheoryParams& tp) {
    if (!(tp.q > 2))
        throw ParameterError(
            "error budget requires q > 2 (tail summand decays like theta^{2-q})");
}

double dp_of(const TheoryParams& tp) {
    return std::pow(static_cast<double>(tp.d), tp.p);
}

} // namespace

double euler_error_term(int d, double p, double q, std::int64_t N, double delta,
                        std::int64_t m_comp) {
    if (d < 1) throw ParameterError("euler_error_term: d must be >= 1");
    if (N < 1) throw ParameterError("euler_error_term: N must be >= 1");
    if (m_comp < 1) throw ParameterError("euler_error_term: m_comp must be >= 1");
    if (!(delta > 0) || !(delta < 1))
        throw ParameterError("euler_error_term: delta must lie in (0,1)");
    const double dp = std::pow(static_cast<double>(d), p);
    // e(d,N,delta,M) = 1/N + delta^q d^p + delta^{-2} d^p / M
    return 1.0 / static_cast<double>(N) + std::pow(delta, q) * dp +
           dp / (delta * delta * static_cast<double>(m_comp));
}

BoundConstants constants(const TheoryParams& tp) {
    check_params(tp);
    const double L = tp.L, L1 = tp.L1, L2 = tp.L2, Ceta = tp.C_eta, T = tp.T;
    const double q = tp.q;
    const double sL = std::sqrt(L);

    BoundConstants out;

    // c := 4 L^{1/2} T^{-1/2} exp{ L^{1/2} T [1 + 2 L^{1/2} (T+2)] }
    out.c = 4.0 * sL / std::sqrt(T) * std::exp(sL * T * (1.0 + 2.0 * sL * (T + 2.0)));

    // c1 := L^{1/2} (2 L^{1/2} e^{L^{1/2} T} + T^{-1/2}) e^{(L^{1/2}+L) T}
    //     + L^{1/2} (2 T^{-1/2} + c T) * 3 e^{3 L T (T+4)} (3 L^{1/2} + 1)
    out.c1 = sL * (2.0 * sL * std::exp(sL * T) + 1.0 / std::sqrt(T)) *
                 std::exp((sL + L) * T) +
             sL * (2.0 / std::sqrt(T) + out.c * T) * 3.0 *
                 std::exp(3.0 * L * T * (T + 4.0)) * (3.0 * sL + 1.0);

    // c2 := 12 L (1 + 6 L T) e^{(1+6L) T}
    out.c2 = 12.0 * L * (1.0 + 6.0 * L * T) * std::exp((1.0 + 6.0 * L) * T);

    // c3 := L^{1/2} ( 1 + [ c1 e^{(L^{1/2}+L) T} + c2^{1/2} c ] + c2^{1/2} T^{-3/2} )
    out.c3 = sL * (1.0 +
                   (out.c1 * std::exp((sL + L) * T) + std::sqrt(out.c2) * out.c) +
                   std::sqrt(out.c2) * std::pow(T, -1.5));

    // C_tilde := max( 27 T^2 (38 L1 + 37 L2
    //                         + 150 * 12 L (1+6LT) e^{(1+6L)T} (T+1) L) e^{(1+225L)T},
    //                 24 (9 max{150 L T, 1} + 1) C_eta T e^{9(1+150L)T} e^{3(T+12)L},
    //                 16 L T^2 * 5 max{1, 4 L T (T+8)} e^{8L(16+T)} )
    const double tilde1 =
        27.0 * T * T *
        (38.0 * L1 + 37.0 * L2 +
         150.0 * 12.0 * L * (1.0 + 6.0 * L * T) * std::exp((1.0 + 6.0 * L) * T) *
             (T + 1.0) * L) *
        std::exp((1.0 + 225.0 * L) * T);
    const double tilde2 = 24.0 * (9.0 * std::max(150.0 * L * T, 1.0) + 1.0) * Ceta *
                          T * std::exp(9.0 * (1.0 + 150.0 * L) * T) *
                          std::exp(3.0 * (T + 12.0) * L);
    const double tilde3 = 16.0 * L * T * T * 5.0 *
                          std::max(1.0, 4.0 * L * T * (T + 8.0)) *
                          std::exp(8.0 * L * (16.0 + T));
    out.C_tilde = std::max({tilde1, tilde2, tilde3});

    // C_hat := 2 ( 4 c3^2 (L^{-1/2}+T)^2 T (1+T^{1/2})^2 e^{6(L^{1/2}+L)T}
    //              + C_tilde (2 T^{-3} + L T^{-1}) e^{[1+2L(T+1)]T} )
    out.C_hat =
        2.0 * (4.0 * out.c3 * out.c3 * std::pow(1.0 / sL + T, 2.0) * T *
                   std::pow(1.0 + std::sqrt(T), 2.0) * std::exp(6.0 * (sL + L) * T) +
               out.C_tilde * (2.0 * std::pow(T, -3.0) + L / T) *
                   std::exp((1.0 + 2.0 * L * (T + 1.0)) * T));

    // C_bar := 34 * 2^q L^{q/2} e^{q L^{1/2} T}
    //          exp{ [2(L+1)]^{(q-2)/2} * 2 (L + L^{1/2}) q (q-1) T }
    out.C_bar = 34.0 * std::pow(2.0, q) * std::pow(L, q / 2.0) * std::exp(q * sL * T) *
                std::exp(std::pow(2.0 * (L + 1.0), (q - 2.0) / 2.0) * 2.0 *
                         (L + sL) * q * (q - 1.0) * T);

    // C0 := 8 + 8 * 2304 * ln(3 * 12 * e)
    out.C0 = 8.0 + 8.0 * 2304.0 * std::log(3.0 * 12.0 * std::exp(1.0));

    return out;
}

ErrorBudget budget(const TheoryParams& tp, std::int64_t N, double delta,
                   std::int64_t m_comp, std::int64_t K, std::int64_t J,
                   double theta, double epsilon_uat) {
    check_params(tp);
    require_q_above_two(tp);
    if (N < 1) throw ParameterError("budget: N must be >= 1");
    if (!(delta > 0) || !(delta < 1))
        throw ParameterError("budget: delta must lie in (0,1)");
    if (m_comp < 1) throw ParameterError("budget: m_comp must be >= 1");
    if (K < 1) throw ParameterError("budget: K must be >= 1");
    if (J < 1) throw ParameterError("budget: J must be >= 1");
    if (!(theta > 0)) throw ParameterError("budget: theta must be positive");
    if (epsilon_uat < 0) throw ParameterError("budget: epsilon_uat must be >= 0");

    const double dp = dp_of(tp);
    const double m_floor = tp.C_eta * dp / (delta * delta);
    if (static_cast<double>(m_comp) < m_floor) {
        std::ostringstream msg;
        msg << "budget: constraint m_comp >= delta^{-2} C_eta d^p violated: " << m_comp
            << " < " << m_floor;
        throw ParameterError(msg.str());
    }

    const BoundConstants k = constants(tp);
    const double e_term = euler_error_term(tp.d, tp.p, tp.q, N, delta, m_comp);

    ErrorBudget out;
    out.tail = k.C_bar / std::pow(theta, tp.q - 2.0) * tp.xi_q_moment;
    out.discr = 64.0 * k.C_hat * dp * (dp + tp.xi_second_moment) * e_term;
    out.gen = 2.0 * k.C0 * theta * theta *
              (std::log(static_cast<double>(J)) + 1.0) * static_cast<double>(K) /
              static_cast<double>(J);
    out.uat = 64.0 * epsilon_uat;
    out.total = out.tail + out.discr + out.gen + out.uat;
    return out;
}

SelectedParameters select_parameters(const TheoryParams& tp, double epsilon_target,
                                     std::int64_t K_given) {
    check_params(tp);
    require_q_above_two(tp);
    if (!(epsilon_target > 0) || !(epsilon_target < 1))
        throw ParameterError("select_parameters: epsilon_target must lie in (0,1)");
    if (K_given < 1) throw ParameterError("select_parameters: K_given must be >= 1");

    const BoundConstants k = constants(tp);
    const double dp = dp_of(tp);
    const double eps = epsilon_target;
    // Shared factor of the three discretization inequalities:
    //   64 C_hat d^p (d^p + E||xi||^2)
    const double discr_factor = 64.0 * k.C_hat * dp * (dp + tp.xi_second_moment);
    const double cap = 1e9;

    auto infeasible = [&](const char* name, const char* constraint) {
        std::ostringstream msg;
        msg << "select_parameters: no feasible " << name
            << " within grid caps (theta, N, M, J <= 1e9; delta >= 1e-9) for "
            << constraint << " at epsilon_target=" << eps;
        throw ParameterError(msg.str());
    };

    SelectedParameters out;

    // theta: smallest power of two >= 1 with
    //   C_bar / theta^{q-2} * xi_q_moment <= eps/4
    double theta = 1.0;
    while (k.C_bar / std::pow(theta, tp.q - 2.0) * tp.xi_q_moment > eps / 4.0) {
        theta *= 2.0;
        if (theta > cap) infeasible("theta", "tail term <= eps/4");
    }
    out.theta = theta;

    // N: smallest power of two with (1/N) * discr_factor <= eps/12
    double N = 1.0;
    while (discr_factor / N > eps / 12.0) {
        N *= 2.0;
        if (N > cap) infeasible("N", "1/N discretization term <= eps/12");
    }
    out.N = static_cast<std::int64_t>(N);

    // delta: largest 2^-k (k >= 1) with delta^q d^p * discr_factor <= eps/12
    double delta = 0.5;
    while (std::pow(delta, tp.q) * dp * discr_factor > eps / 12.0) {
        delta *= 0.5;
        if (delta < 1e-9) infeasible("delta", "delta^q d^p term <= eps/12");
    }
    out.delta = delta;

    // M: smallest power of two with d^p/(delta^2 M) * discr_factor <= eps/12
    //    and M >= delta^{-2} C_eta d^p
    const double m_floor = tp.C_eta * dp / (delta * delta);
    double M = 1.0;
    while (dp / (delta * delta * M) * discr_factor > eps / 12.0 || M < m_floor) {
        M *= 2.0;
        if (M > cap) infeasible("m_comp", "compensator term <= eps/12 and M >= delta^{-2} C_eta d^p");
    }
    out.m_comp = static_cast<std::int64_t>(M);

    // J: smallest power of two with 2 C0 theta^2 (ln J + 1) K / J <= eps/4
    double J = 1.0;
    while (2.0 * k.C0 * theta * theta * (std::log(J) + 1.0) *
               static_cast<double>(K_given) / J >
           eps / 4.0) {
        J *= 2.0;
        if (J > cap) infeasible("J", "generalization term <= eps/4");
    }
    out.J = static_cast<std::int64_t>(J);

    return out;
}

} // namespace jumpsplit
