#pragma once

#include <Eigen/Dense>

namespace jumpsplit {

// Normal-equation system (G + ridge*I) y = rhs with G symmetric PSD.
// With the experiment shape J=500 samples and K=2000 neurons the Gram matrix
// R^T R has rank <= J < K+1, so a bare solve is singular by construction and
// the ridge escalation below is load-bearing, not defensive.
struct SpdSystem {
    Eigen::MatrixXd gram;
    Eigen::VectorXd rhs;
    double ridge = 0.0;
};

struct CholeskySolveResult {
    Eigen::VectorXd y;
    double ridge_used = 0.0; // final ridge actually applied (>= sys.ridge)
};

// Solve via LLT.  If factorization fails or the residual check
// ||(G+ridge I)y - b|| <= 1e-8 (1+||b||) does not hold, the ridge is
// escalated by factors of 10 from 1e-8*(trace/K) up to 1e-2*(trace/K);
// beyond that a SingularSystemError reports the final ridge tried.
CholeskySolveResult cholesky_solve_detailed(const SpdSystem& sys);

// Contract-named convenience wrapper.
Eigen::VectorXd cholesky_solve(const SpdSystem& sys);

} // namespace jumpsplit
