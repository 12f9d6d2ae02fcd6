#include "jumpsplit/linalg.hpp"

#include <cmath>
#include <string>

#include "jumpsplit/errors.hpp"

namespace jumpsplit {

namespace {

bool try_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs, double ridge,
               Eigen::VectorXd& out) {
    Eigen::MatrixXd m = gram;
    if (ridge != 0.0) m.diagonal().array() += ridge;
    Eigen::LLT<Eigen::MatrixXd> llt(m);
    if (llt.info() != Eigen::Success) return false;
    out = llt.solve(rhs);
    // Residual guard: LLT can "succeed" on numerically indefinite input.
    const double resid = (m * out - rhs).norm();
    return resid <= 1e-8 * (1.0 + rhs.norm());
}

} // namespace

CholeskySolveResult cholesky_solve_detailed(const SpdSystem& sys) {
    const auto k = sys.gram.rows();
    if (k == 0 || sys.gram.cols() != k)
        throw ParameterError("cholesky_solve: gram must be square and non-empty");
    if (sys.rhs.size() != k)
        throw ParameterError("cholesky_solve: rhs length must match gram");
    if (sys.ridge < 0.0)
        throw ParameterError("cholesky_solve: ridge must be >= 0");

    CholeskySolveResult res;
    if (try_solve(sys.gram, sys.rhs, sys.ridge, res.y)) {
        res.ridge_used = sys.ridge;
        return res;
    }

    const double trace_over_k = sys.gram.trace() / static_cast<double>(k);
    double extra = 1e-8 * trace_over_k;
    const double extra_max = 1e-2 * trace_over_k;
    double ridge = sys.ridge;
    while (extra <= extra_max * (1.0 + 1e-12) && extra > 0.0) {
        ridge = sys.ridge + extra;
        if (try_solve(sys.gram, sys.rhs, ridge, res.y)) {
            res.ridge_used = ridge;
            return res;
        }
        extra *= 10.0;
    }
    throw SingularSystemError(
        "cholesky_solve: factorization failed after ridge escalation (final ridge " +
        std::to_string(ridge) + ")");
}

Eigen::VectorXd cholesky_solve(const SpdSystem& sys) {
    return cholesky_solve_detailed(sys).y;
}

} // namespace jumpsplit
