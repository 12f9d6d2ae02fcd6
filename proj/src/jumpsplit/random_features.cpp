#include "random_features.hpp"

#include <cmath>

#include <json.hpp>

#include "errors.hpp"
#include "linalg.hpp"
#include "parallel.hpp"

namespace jumpsplit {

namespace {

constexpr double kStdFloor = 1e-8;
// Fixed row-block size for the batched X A^T product.  Blocks are computed
// independently (possibly on different threads); a fixed size keeps the
// result bit-identical for every thread count.
constexpr std::size_t kRowBlock = 128;

// P = X A^T (J x K), row blocks in parallel.
Eigen::MatrixXd preactivations(const RandomFeatureNet& net,
                               const Eigen::Ref<const Eigen::MatrixXd>& X) {
    const std::size_t J = static_cast<std::size_t>(X.rows());
    Eigen::MatrixXd P(X.rows(), net.K);
    const std::size_t blocks = (J + kRowBlock - 1) / kRowBlock;
    const Eigen::MatrixXd& A = *net.A;
    parallel_for(blocks, [&](std::size_t b) {
        const std::size_t lo = b * kRowBlock;
        const std::size_t len = std::min(kRowBlock, J - lo);
        P.middleRows(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(len)).noalias() =
            X.middleRows(static_cast<Eigen::Index>(lo), static_cast<Eigen::Index>(len)) * A.transpose();
    });
    P.rowwise() -= net.B->transpose();
    return P;
}

// Normalize + activate P in place, then append the intercept column.
Eigen::MatrixXd features_from_preactivations(const RandomFeatureNet& net, Eigen::MatrixXd& P) {
    Eigen::MatrixXd R(P.rows(), net.K + 1);
    R.leftCols(net.K) = (((P.rowwise() - net.norm_mean.transpose()).array().rowwise() /
                          net.norm_std.transpose().array())
                             .tanh())
                            .matrix();
    R.col(net.K).setOnes();
    return R;
}

void freeze_from_preactivations(RandomFeatureNet& net, const Eigen::MatrixXd& P) {
    const double J = static_cast<double>(P.rows());
    net.norm_mean = P.colwise().mean();
    Eigen::VectorXd var =
        ((P.rowwise() - net.norm_mean.transpose()).array().square().colwise().sum() / J)
            .matrix()
            .transpose();
    net.norm_std = var.array().sqrt().max(kStdFloor).matrix();
    net.frozen = true;
}

} // namespace

RandomFeatureNet init_random_features(int d, int K, std::uint64_t master_seed) {
    if (d < 1 || K < 1) throw ParameterError("init_random_features: d and K must be >= 1");
    auto A = std::make_shared<Eigen::MatrixXd>(K, d);
    auto B = std::make_shared<Eigen::VectorXd>(K);
    for (int k = 0; k < K; ++k) {
        RngStream s = substream(master_seed, Lane{LANE_NET_INIT, static_cast<std::uint32_t>(k), 0});
        for (int i = 0; i < d; ++i) (*A)(k, i) = s.next_normal();
        (*B)(k) = s.next_normal();
    }
    RandomFeatureNet net;
    net.d = d;
    net.K = K;
    net.A = std::move(A);
    net.B = std::move(B);
    net.y = Eigen::VectorXd::Zero(K + 1);
    return net;
}

void freeze_norm(RandomFeatureNet& net, const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (X.rows() < 2) throw ParameterError("freeze_norm: batch must have J >= 2 rows");
    if (X.cols() != net.d) throw ParameterError("freeze_norm: batch dimension mismatch");
    Eigen::MatrixXd P = preactivations(net, X);
    freeze_from_preactivations(net, P);
}

Eigen::MatrixXd rf_features(const RandomFeatureNet& net,
                            const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (!net.frozen) throw ParameterError("rf_features: normalization stats not frozen");
    if (X.cols() != net.d) throw ParameterError("rf_features: batch dimension mismatch");
    Eigen::MatrixXd P = preactivations(net, X);
    return features_from_preactivations(net, P);
}

Eigen::MatrixXd freeze_norm_and_features(RandomFeatureNet& net,
                                         const Eigen::Ref<const Eigen::MatrixXd>& X) {
    if (X.rows() < 2) throw ParameterError("freeze_norm: batch must have J >= 2 rows");
    if (X.cols() != net.d) throw ParameterError("freeze_norm: batch dimension mismatch");
    Eigen::MatrixXd P = preactivations(net, X);
    freeze_from_preactivations(net, P);
    return features_from_preactivations(net, P);
}

Eigen::VectorXd rf_fit_readout(const Eigen::Ref<const Eigen::MatrixXd>& features,
                               const Eigen::Ref<const Eigen::VectorXd>& targets,
                               double* ridge_used) {
    if (features.rows() != targets.size()) {
        throw ParameterError("rf_fit_readout: row/target count mismatch");
    }
    const Eigen::Index k1 = features.cols();
    SpdSystem sys;
    sys.gram.setZero(k1, k1);
    sys.gram.selfadjointView<Eigen::Lower>().rankUpdate(features.transpose());
    sys.gram = sys.gram.selfadjointView<Eigen::Lower>();
    sys.rhs.noalias() = features.transpose() * targets;
    sys.ridge = 1e-8 * sys.gram.trace() / static_cast<double>(k1);
    CholeskySolveResult res = cholesky_solve_detailed(sys);
    if (ridge_used) *ridge_used = res.ridge_used;
    return std::move(res.y);
}

double rf_eval(const RandomFeatureNet& net, const double* x) {
    if (!net.frozen) throw ParameterError("rf_eval: normalization stats not frozen");
    if (net.y.size() != net.K + 1) throw ParameterError("rf_eval: readout not initialized");
    Eigen::Map<const Eigen::VectorXd> xv(x, net.d);
    Eigen::VectorXd p = (*net.A) * xv - *net.B;
    const Eigen::ArrayXd phi = ((p - net.norm_mean).array() / net.norm_std.array()).tanh();
    return (phi * net.y.head(net.K).array()).sum() + net.y(net.K);
}

std::string to_json(const RandomFeatureNet& net) {
    nlohmann::json doc;
    doc["type"] = "random_feature_net";
    doc["d"] = net.d;
    doc["K"] = net.K;
    doc["activation"] = "tanh";
    doc["frozen"] = net.frozen;
    nlohmann::json a;
    a["rows"] = net.A->rows();
    a["cols"] = net.A->cols();
    std::vector<double> w;
    w.reserve(static_cast<std::size_t>(net.A->size()));
    for (Eigen::Index r = 0; r < net.A->rows(); ++r)
        for (Eigen::Index c = 0; c < net.A->cols(); ++c) w.push_back((*net.A)(r, c));
    a["data"] = std::move(w);
    doc["A"] = std::move(a);
    doc["B"] = std::vector<double>(net.B->data(), net.B->data() + net.B->size());
    doc["norm_mean"] =
        std::vector<double>(net.norm_mean.data(), net.norm_mean.data() + net.norm_mean.size());
    doc["norm_std"] =
        std::vector<double>(net.norm_std.data(), net.norm_std.data() + net.norm_std.size());
    doc["y"] = std::vector<double>(net.y.data(), net.y.data() + net.y.size());
    return doc.dump();
}

} // namespace jumpsplit
