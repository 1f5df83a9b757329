#include "tmsnn/training.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/SVD>

#include "tmsnn/errors.hpp"

namespace tmsnn {

namespace {

Eigen::MatrixXd one_hot_targets(const Eigen::VectorXi& labels)
{
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(labels.size(), 2);
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] != -1 && labels[i] != +1)
            throw ParameterError("labels must be -1 or +1");
        y(i, labels[i] == -1 ? 0 : 1) = 1.0;
    }
    return y;
}

} // namespace

ReadoutWeights train_ols(const TrainingSet& train)
{
    if (train.raster.rows() < 1) throw ParameterError("training set is empty");
    if (train.raster.rows() != train.labels.size())
        throw ParameterError("raster row count does not match label count");

    ReadoutWeights weights;
    weights.method = TrainingMethod::ols;

    const Eigen::MatrixXd x = train.raster.cast<double>();
    const Eigen::MatrixXd y = one_hot_targets(train.labels);

    if (x.isZero(0.0)) {
        weights.w = Eigen::MatrixXd::Zero(x.cols(), 2);
        weights.warnings.push_back("all-zero training raster; weights set to zero");
        return weights;
    }

    Eigen::BDCSVD<Eigen::MatrixXd> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(1e-10); // relative singular-value cutoff
    weights.w = svd.solve(y);
    return weights;
}

SignificanceTable count_spikes(const TrainingSet& train)
{
    if (train.raster.rows() != train.labels.size())
        throw ParameterError("raster row count does not match label count");

    SignificanceTable table;
    table.counts = Eigen::MatrixXi::Zero(train.raster.cols(), 2);
    for (Eigen::Index r = 0; r < train.raster.rows(); ++r) {
        if (train.labels[r] != -1 && train.labels[r] != +1)
            throw ParameterError("labels must be -1 or +1");
        const int cls = train.labels[r] == -1 ? 0 : 1;
        for (Eigen::Index n = 0; n < train.raster.cols(); ++n)
            table.counts(n, cls) += train.raster(r, n);
    }
    return table;
}

SignificanceTable score(SignificanceTable table)
{
    table.scores.resize(table.counts.rows(), table.counts.cols());
    for (Eigen::Index n = 0; n < table.counts.rows(); ++n) {
        const double total = static_cast<double>(table.counts.row(n).sum());
        for (Eigen::Index c = 0; c < table.counts.cols(); ++c) {
            const double count = static_cast<double>(table.counts(n, c));
            table.scores(n, c) = total > 0.0 ? count * count / total : 0.0;
        }
    }
    return table;
}

ReadoutWeights select_top_nodes(const SignificanceTable& table, int n_n)
{
    if (table.scores.size() == 0) throw ParameterError("significance table has no scores");
    if (n_n < 1 || n_n > table.scores.rows())
        throw ParameterError("n_n must lie in [1, N_v]");

    ReadoutWeights weights;
    weights.method = TrainingMethod::significance;
    weights.n_n = n_n;
    weights.w = Eigen::MatrixXd::Zero(table.scores.rows(), 2);

    std::vector<Eigen::Index> order(static_cast<std::size_t>(table.scores.rows()));
    for (Eigen::Index c = 0; c < 2; ++c) {
        std::iota(order.begin(), order.end(), 0);
        // Highest score first; equal scores keep the lower node index.
        std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
            return table.scores(a, c) > table.scores(b, c);
        });
        int placed = 0;
        for (const Eigen::Index n : order) {
            if (placed == n_n) break;
            if (table.scores(n, c) <= 0.0) break; // silent nodes carry no evidence
            weights.w(n, c) = 1.0;
            ++placed;
        }
        if (placed < n_n)
            weights.warnings.push_back("class " + std::to_string(c == 0 ? -1 : +1) + ": only " +
                                       std::to_string(placed) + " of " + std::to_string(n_n) +
                                       " requested nodes have positive score");
    }
    return weights;
}

ReadoutWeights train_significance(const TrainingSet& train, int n_n)
{
    return select_top_nodes(score(count_spikes(train)), n_n);
}

Eigen::RowVector2d predict_scores(const Eigen::RowVector<std::uint8_t, Eigen::Dynamic>& s_row,
                                  const ReadoutWeights& weights)
{
    if (s_row.size() != weights.w.rows())
        throw ParameterError("raster row length does not match weight rows");
    return s_row.cast<double>() * weights.w;
}

int predict(const Eigen::RowVector<std::uint8_t, Eigen::Dynamic>& s_row, const ReadoutWeights& weights)
{
    const Eigen::RowVector2d scores = predict_scores(s_row, weights);
    return scores[1] > scores[0] ? weights.class_order[1] : weights.class_order[0];
}

} // namespace tmsnn
