#pragma once

// Fully trained dense networks: tanh MLP with layer widths
// [d, K, ..., K, 1] (hidden_layers copies of K, linear output), trained by
// Adam on the mean-squared loss.  Backpropagation is closed-form; there is no
// autodiff here and none is needed for this fixed architecture.

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rng.hpp"

namespace jumpsplit {

struct DenseNet {
    int d = 0;
    int K = 0;
    int hidden_layers = 1;
    // W[l] has shape width_{l+1} x width_l, b[l] has length width_{l+1};
    // widths = [d, K, ..., K, 1].
    std::vector<Eigen::MatrixXd> W;
    std::vector<Eigen::VectorXd> b;
    // Frozen batch standardization (identity after init): evaluation maps x
    // through (x - in_mean) / in_std before the first layer and the core
    // output through out_shift + out_scale * ( . ).  Without this the pinned
    // Adam learning-rate schedule cannot move the output from its O(1) init
    // to data scale within the epoch budget; it is the dense counterpart of
    // the random-feature batch normalization.
    Eigen::VectorXd in_mean, in_std;
    double out_shift = 0.0;
    double out_scale = 1.0;
};

// Gradient of the mean-squared loss, shaped like the parameters.
struct DenseGrad {
    std::vector<Eigen::MatrixXd> dW;
    std::vector<Eigen::VectorXd> db;
};

struct AdamState {
    std::vector<Eigen::MatrixXd> mW, vW;
    std::vector<Eigen::VectorXd> mb, vb;
    long long step = 0;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

// Weights i.i.d. N(0, 1/fan_in) (std 1/sqrt(fan_in)), biases zero; keeps tanh
// pre-activations O(1) at init.  Layer l draws from its own lane.
// Standardization starts as the identity.
DenseNet init_dense_net(int d, int K, int hidden_layers, std::uint64_t master_seed);

// Freeze standardization statistics from a training batch: per-feature
// mean/std of X and mean/std of Q, stds floored at 1e-8.  Requires >= 2 rows.
void set_standardization(DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::VectorXd>& Q);

double dense_eval(const DenseNet& net, const double* x);

// Batched forward pass; X is J x d with one sample per row.
Eigen::VectorXd dense_eval_batch(const DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X);

// Exact gradient of (1/J) sum_j (net(x_j) - Q_j)^2.
DenseGrad dense_grad(const DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& Q);

// Loss value itself (shares the forward pass convention with dense_grad).
double dense_loss(const DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& Q);

AdamState make_adam_state(const DenseNet& net);

// One Adam update with bias correction; the caller supplies the learning rate
// (schedules live at the training-loop level).
void adam_step(DenseNet& net, AdamState& state, const DenseGrad& grad, double lr);

// Self-describing JSON snapshot (shapes + row-major arrays) for
// reproducibility records.
std::string to_json(const DenseNet& net);

} // namespace jumpsplit
