#include "dense_net.hpp"

#include <cmath>

#include <json.hpp>

#include "errors.hpp"

namespace jumpsplit {

namespace {

std::vector<int> layer_widths(const DenseNet& net) {
    std::vector<int> w;
    w.push_back(net.d);
    for (int l = 0; l < net.hidden_layers; ++l) w.push_back(net.K);
    w.push_back(1);
    return w;
}

Eigen::MatrixXd standardize_input(const DenseNet& net,
                                  const Eigen::Ref<const Eigen::MatrixXd>& X) {
    Eigen::MatrixXd Xs = X;
    Xs.rowwise() -= net.in_mean.transpose();
    Xs.array().rowwise() /= net.in_std.transpose().array();
    return Xs;
}

// Forward pass over the standardized inputs Xs, keeping the hidden
// activations H[l] (J x width_l) for reuse by backprop.  H[0] = Xs; the final
// entry is the linear core-output column (standardization not yet applied).
std::vector<Eigen::MatrixXd> forward(const DenseNet& net, Eigen::MatrixXd Xs) {
    const std::size_t layers = net.W.size();
    std::vector<Eigen::MatrixXd> H(layers + 1);
    H[0] = std::move(Xs);
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::MatrixXd Z = H[l] * net.W[l].transpose();
        Z.rowwise() += net.b[l].transpose();
        if (l + 1 < layers) {
            H[l + 1] = Z.array().tanh().matrix();
        } else {
            H[l + 1] = std::move(Z); // linear output layer
        }
    }
    return H;
}

} // namespace

DenseNet init_dense_net(int d, int K, int hidden_layers, std::uint64_t master_seed) {
    if (d < 1 || K < 1 || hidden_layers < 1) {
        throw ParameterError("init_dense_net: d, K, hidden_layers must be >= 1");
    }
    DenseNet net;
    net.d = d;
    net.K = K;
    net.hidden_layers = hidden_layers;
    const auto widths = layer_widths(net);
    for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
        const int fan_in = widths[l];
        const int fan_out = widths[l + 1];
        RngStream s = substream(master_seed, Lane{LANE_NET_INIT, static_cast<std::uint32_t>(l), 1});
        const double scale = 1.0 / std::sqrt(static_cast<double>(fan_in));
        Eigen::MatrixXd W(fan_out, fan_in);
        for (int r = 0; r < fan_out; ++r) {
            for (int c = 0; c < fan_in; ++c) W(r, c) = scale * s.next_normal();
        }
        net.W.push_back(std::move(W));
        net.b.push_back(Eigen::VectorXd::Zero(fan_out));
    }
    net.in_mean = Eigen::VectorXd::Zero(d);
    net.in_std = Eigen::VectorXd::Ones(d);
    return net;
}

void set_standardization(DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                         const Eigen::Ref<const Eigen::VectorXd>& Q) {
    if (X.rows() < 2) throw ParameterError("set_standardization: need at least 2 samples");
    if (X.cols() != net.d || X.rows() != Q.size())
        throw ParameterError("set_standardization: shape mismatch");
    const double J = static_cast<double>(X.rows());
    net.in_mean = X.colwise().mean().transpose();
    const Eigen::MatrixXd centered = X.rowwise() - net.in_mean.transpose();
    net.in_std =
        (centered.array().square().colwise().sum() / J).sqrt().transpose().matrix();
    for (int i = 0; i < net.d; ++i) net.in_std(i) = std::max(net.in_std(i), 1e-8);
    net.out_shift = Q.mean();
    const double var = (Q.array() - net.out_shift).square().sum() / J;
    net.out_scale = std::max(std::sqrt(var), 1e-8);
}

double dense_eval(const DenseNet& net, const double* x) {
    Eigen::Map<const Eigen::RowVectorXd> xv(x, net.d);
    Eigen::RowVectorXd h =
        ((xv - net.in_mean.transpose()).array() / net.in_std.transpose().array()).matrix();
    const std::size_t layers = net.W.size();
    for (std::size_t l = 0; l < layers; ++l) {
        Eigen::RowVectorXd z = h * net.W[l].transpose() + net.b[l].transpose();
        if (l + 1 < layers) {
            h = z.array().tanh().matrix();
        } else {
            return net.out_shift + net.out_scale * z(0);
        }
    }
    throw ParameterError("dense_eval: network has no layers");
}

Eigen::VectorXd dense_eval_batch(const DenseNet& net,
                                 const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (X.cols() != net.d) throw ParameterError("dense_eval_batch: dimension mismatch");
    Eigen::VectorXd core = forward(net, standardize_input(net, X)).back().col(0);
    return (net.out_shift + net.out_scale * core.array()).matrix();
}

DenseGrad dense_grad(const DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                     const Eigen::Ref<const Eigen::VectorXd>& Q) {
    if (X.rows() != Q.size()) throw ParameterError("dense_grad: row/target count mismatch");
    if (X.cols() != net.d) throw ParameterError("dense_grad: dimension mismatch");
    const std::size_t layers = net.W.size();
    const double J = static_cast<double>(X.rows());

    const std::vector<Eigen::MatrixXd> H = forward(net, standardize_input(net, X));

    DenseGrad grad;
    grad.dW.resize(layers);
    grad.db.resize(layers);

    // G = dLoss/dZ_l, starting from the linear core output; the chain rule
    // through out_shift + out_scale * ( . ) contributes one out_scale factor.
    Eigen::MatrixXd G =
        (2.0 * net.out_scale / J) *
        ((net.out_shift + net.out_scale * H[layers].col(0).array()).matrix() - Q);
    for (std::size_t l = layers; l-- > 0;) {
        grad.dW[l].noalias() = G.transpose() * H[l];
        grad.db[l] = G.colwise().sum().transpose();
        if (l > 0) {
            // H[l] = tanh(Z_l) for hidden layers, so dtanh = 1 - H[l]^2.
            G = ((G * net.W[l]).array() * (1.0 - H[l].array().square())).matrix();
        }
    }
    return grad;
}

double dense_loss(const DenseNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X,
                  const Eigen::Ref<const Eigen::VectorXd>& Q) {
    const Eigen::VectorXd out = dense_eval_batch(net, X);
    return (out - Q).squaredNorm() / static_cast<double>(X.rows());
}

AdamState make_adam_state(const DenseNet& net) {
    AdamState st;
    for (const auto& W : net.W) {
        st.mW.emplace_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
        st.vW.emplace_back(Eigen::MatrixXd::Zero(W.rows(), W.cols()));
    }
    for (const auto& b : net.b) {
        st.mb.emplace_back(Eigen::VectorXd::Zero(b.size()));
        st.vb.emplace_back(Eigen::VectorXd::Zero(b.size()));
    }
    return st;
}

void adam_step(DenseNet& net, AdamState& state, const DenseGrad& grad, double lr) {
    if (state.mW.size() != net.W.size() || grad.dW.size() != net.W.size()) {
        throw ParameterError("adam_step: state/gradient shape mismatch");
    }
    state.step += 1;
    const double bc1 = 1.0 - std::pow(state.beta1, static_cast<double>(state.step));
    const double bc2 = 1.0 - std::pow(state.beta2, static_cast<double>(state.step));
    for (std::size_t l = 0; l < net.W.size(); ++l) {
        state.mW[l] = state.beta1 * state.mW[l] + (1.0 - state.beta1) * grad.dW[l];
        state.vW[l] = (state.beta2 * state.vW[l].array() +
                       (1.0 - state.beta2) * grad.dW[l].array().square())
                          .matrix();
        net.W[l].array() -= lr * (state.mW[l].array() / bc1) /
                            ((state.vW[l].array() / bc2).sqrt() + state.eps);

        state.mb[l] = state.beta1 * state.mb[l] + (1.0 - state.beta1) * grad.db[l];
        state.vb[l] = (state.beta2 * state.vb[l].array() +
                       (1.0 - state.beta2) * grad.db[l].array().square())
                          .matrix();
        net.b[l].array() -= lr * (state.mb[l].array() / bc1) /
                            ((state.vb[l].array() / bc2).sqrt() + state.eps);
    }
}

std::string to_json(const DenseNet& net) {
    nlohmann::json doc;
    doc["type"] = "dense_net";
    doc["d"] = net.d;
    doc["K"] = net.K;
    doc["hidden_layers"] = net.hidden_layers;
    doc["activation"] = "tanh";
    nlohmann::json layers = nlohmann::json::array();
    for (std::size_t l = 0; l < net.W.size(); ++l) {
        nlohmann::json layer;
        layer["rows"] = net.W[l].rows();
        layer["cols"] = net.W[l].cols();
        std::vector<double> w;
        w.reserve(static_cast<std::size_t>(net.W[l].size()));
        for (Eigen::Index r = 0; r < net.W[l].rows(); ++r)
            for (Eigen::Index c = 0; c < net.W[l].cols(); ++c) w.push_back(net.W[l](r, c));
        layer["W"] = w;
        layer["b"] = std::vector<double>(net.b[l].data(), net.b[l].data() + net.b[l].size());
        layers.push_back(std::move(layer));
    }
    doc["layers"] = std::move(layers);
    doc["in_mean"] =
        std::vector<double>(net.in_mean.data(), net.in_mean.data() + net.in_mean.size());
    doc["in_std"] =
        std::vector<double>(net.in_std.data(), net.in_std.data() + net.in_std.size());
    doc["out_shift"] = net.out_shift;
    doc["out_scale"] = net.out_scale;
    return doc.dump();
}

} // namespace jumpsplit
