#pragma once

// Random feature networks: a single hidden layer whose weights A (K x d) and
// biases B (K) are drawn standard normal once and then frozen; only the
// linear readout y (K+1 entries, last one an intercept) is trained, by ridge
// least squares.  Pre-activations are standardized with per-feature
// statistics frozen on the training batch ("batch normalization" computed
// once, then treated as part of the fixed function).
//
// A and B are held behind shared_ptr<const ...>: copies of a net share the
// frozen hidden layer (the backward recursion keeps one net per time step,
// and at d = 10^4, K = 2000 duplicating A would cost 160 MB per step).

#include <cstdint>
#include <string>
#include <memory>

#include <Eigen/Dense>

#include "rng.hpp"

namespace jumpsplit {

enum class Activation { Tanh }; // single option today; the seam for more

struct RandomFeatureNet {
    int d = 0;
    int K = 0;
    std::shared_ptr<const Eigen::MatrixXd> A; // K x d, frozen
    std::shared_ptr<const Eigen::VectorXd> B; // K, frozen
    Eigen::VectorXd norm_mean; // K, set by freeze_norm
    Eigen::VectorXd norm_std;  // K, floored at 1e-8
    Eigen::VectorXd y;         // K+1 readout, last entry = intercept
    Activation activation = Activation::Tanh;
    bool frozen = false;
};

// Draw (A_k, B_k) i.i.d. standard normal.  Neuron k uses its own lane, so
// the first min(K, K') neurons of two nets with the same seed coincide.
RandomFeatureNet init_random_features(int d, int K, std::uint64_t master_seed);

// Freeze per-feature mean/std of the pre-activations A x_j - B over the batch
// X (J x d, one sample per row).  Population (1/J) variance convention, std
// floored at 1e-8.  J >= 2 required.
void freeze_norm(RandomFeatureNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X);

// Feature matrix R (J x (K+1)): column k < K is
// tanh((A_k x_j - B_k - norm_mean_k) / norm_std_k), column K is constant 1.
// Requires frozen stats.
Eigen::MatrixXd rf_features(const RandomFeatureNet& net,
                            const Eigen::Ref<const Eigen::MatrixXd>& X);

// freeze_norm + rf_features sharing one pass over the pre-activations (the
// X A^T product dominates at large d; computing it twice would double the
// cost of every backward step).
Eigen::MatrixXd freeze_norm_and_features(RandomFeatureNet& net,
                                         const Eigen::Ref<const Eigen::MatrixXd>& X);

// Ridge least squares readout via the normal equations and cholesky_solve:
// minimizes |R y - Q|^2 + ridge |y|^2 with base ridge
// 1e-8 trace(R^T R)/(K+1) (escalated by the numkit policy if factorization
// fails).  Reports the ridge actually used through ridge_used when non-null.
Eigen::VectorXd rf_fit_readout(const Eigen::Ref<const Eigen::MatrixXd>& features,
                               const Eigen::Ref<const Eigen::VectorXd>& targets,
                               double* ridge_used = nullptr);

// Scalar evaluation at one point (uses frozen stats + trained readout).
double rf_eval(const RandomFeatureNet& net, const double* x);

// Self-describing JSON snapshot (shapes + row-major arrays) for
// reproducibility records.
std::string to_json(const RandomFeatureNet& net);

} // namespace jumpsplit
