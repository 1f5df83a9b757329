#include "tmsnn/eval.hpp"

#include <algorithm>
#include <numeric>

#include "tmsnn/errors.hpp"
#include "tmsnn/rng.hpp"

namespace tmsnn {

namespace {

std::array<std::vector<Eigen::Index>, 2> indices_by_class(const Eigen::VectorXi& labels)
{
    std::array<std::vector<Eigen::Index>, 2> by_class;
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] != -1 && labels[i] != +1) throw ParameterError("labels must be -1 or +1");
        by_class[labels[i] == -1 ? 0 : 1].push_back(i);
    }
    return by_class;
}

} // namespace

EvalResult cross_validate(const SpikeRaster& raster, const Eigen::VectorXi& labels,
                          TrainingMethod method, int n_t, std::optional<int> n_n, int repeats,
                          std::uint64_t seed)
{
    if (raster.n_points() != labels.size())
        throw ParameterError("raster rows do not match label count");
    if (repeats < 1) throw ParameterError("repeats must be >= 1");
    if (n_t < 1) throw ParameterError("n_t must be >= 1");
    if (method == TrainingMethod::significance && !n_n)
        throw ParameterError("the significance method requires n_n");

    const auto by_class = indices_by_class(labels);
    for (const auto& members : by_class)
        if (static_cast<Eigen::Index>(members.size()) < n_t + 1)
            throw ParameterError("n_t = " + std::to_string(n_t) +
                                 " leaves no test point for a class with " +
                                 std::to_string(members.size()) + " members");

    EvalResult result;
    result.n_t = n_t;
    result.n_n = method == TrainingMethod::significance ? n_n : std::nullopt;
    result.repeats = repeats;

    for (int rep = 0; rep < repeats; ++rep) {
        const std::uint64_t split_seed = derive_seed(seed, "cv-split", static_cast<std::uint64_t>(rep));
        Rng rng(split_seed);

        std::vector<Eigen::Index> train_rows;
        std::vector<bool> in_train(static_cast<std::size_t>(labels.size()), false);
        for (const auto& members : by_class) {
            std::vector<Eigen::Index> pool = members;
            rng.shuffle(pool);
            for (int k = 0; k < n_t; ++k) {
                train_rows.push_back(pool[k]);
                in_train[static_cast<std::size_t>(pool[k])] = true;
            }
        }
        std::sort(train_rows.begin(), train_rows.end());

        TrainingSet train;
        train.n_t = n_t;
        train.selection_seed = split_seed;
        train.raster.resize(static_cast<Eigen::Index>(train_rows.size()), raster.n_nodes());
        train.labels.resize(static_cast<Eigen::Index>(train_rows.size()));
        for (std::size_t i = 0; i < train_rows.size(); ++i) {
            train.raster.row(static_cast<Eigen::Index>(i)) = raster.bits.row(train_rows[i]);
            train.labels[static_cast<Eigen::Index>(i)] = labels[train_rows[i]];
        }

        const ReadoutWeights weights = method == TrainingMethod::ols
                                           ? train_ols(train)
                                           : train_significance(train, *n_n);

        Eigen::Index correct = 0;
        Eigen::Index tested = 0;
        for (Eigen::Index row = 0; row < labels.size(); ++row) {
            if (in_train[static_cast<std::size_t>(row)]) continue;
            const int predicted = predict(raster.bits.row(row), weights);
            const int truth = labels[row];
            result.confusion(truth == -1 ? 0 : 1, predicted == -1 ? 0 : 1) += 1;
            correct += predicted == truth ? 1 : 0;
            ++tested;
        }
        result.per_repeat_accuracies.push_back(static_cast<double>(correct) /
                                               static_cast<double>(tested));
    }

    result.accuracy = static_cast<double>(result.confusion.trace()) /
                      static_cast<double>(result.confusion.sum());
    return result;
}

SweepResult sweep(const SpikeRaster& raster, const Eigen::VectorXi& labels, TrainingMethod method,
                  const std::vector<int>& n_t_grid, const std::vector<int>& n_n_grid, int repeats,
                  std::uint64_t seed)
{
    if (n_t_grid.empty()) throw ParameterError("n_t grid must not be empty");
    if (method == TrainingMethod::significance && n_n_grid.empty())
        throw ParameterError("n_n grid must not be empty for the significance method");

    SweepResult result;
    result.n_t_grid = n_t_grid;
    result.n_n_grid = method == TrainingMethod::significance ? n_n_grid : std::vector<int>{};
    result.repeats = repeats;
    result.seed = seed;
    result.method = method;

    for (const int n_t : n_t_grid) {
        SweepRow row;
        row.n_t = n_t;
        bool first = true;
        const std::vector<int> effective_grid =
            method == TrainingMethod::significance ? n_n_grid : std::vector<int>{0};
        for (const int n_n : effective_grid) {
            const std::uint64_t cell_seed = derive_seed(seed, "sweep-cell",
                                                        static_cast<std::uint64_t>(n_t),
                                                        static_cast<std::uint64_t>(n_n));
            const std::optional<int> n_n_opt =
                method == TrainingMethod::significance ? std::optional<int>(n_n) : std::nullopt;
            const EvalResult cell_eval =
                cross_validate(raster, labels, method, n_t, n_n_opt, repeats, cell_seed);

            SweepCell cell;
            cell.n_t = n_t;
            cell.n_n = n_n_opt;
            cell.mean_accuracy = cell_eval.accuracy;
            cell.max_accuracy = *std::max_element(cell_eval.per_repeat_accuracies.begin(),
                                                  cell_eval.per_repeat_accuracies.end());
            result.cells.push_back(cell);

            // Ties keep the earlier (smaller) n_n.
            if (first || cell.mean_accuracy > row.best_mean_accuracy) {
                row.best_mean_accuracy = cell.mean_accuracy;
                row.best_n_n_mean = n_n_opt;
            }
            if (first || cell.max_accuracy > row.best_max_accuracy) {
                row.best_max_accuracy = cell.max_accuracy;
                row.best_n_n_max = n_n_opt;
            }
            first = false;
        }
        result.rows.push_back(row);
    }
    return result;
}

TemporalMap temporal_map(const SpikeRaster& raster, const Eigen::VectorXi& labels)
{
    if (raster.n_points() != labels.size())
        throw ParameterError("raster rows do not match label count");

    const auto by_class = indices_by_class(labels);
    TemporalMap map;
    map.class_boundary = static_cast<Eigen::Index>(by_class[0].size());
    map.row_order.reserve(static_cast<std::size_t>(labels.size()));
    for (const auto& members : by_class)
        map.row_order.insert(map.row_order.end(), members.begin(), members.end());

    map.bits.resize(raster.n_points(), raster.n_nodes());
    map.labels.resize(labels.size());
    for (Eigen::Index i = 0; i < raster.n_points(); ++i) {
        map.bits.row(i) = raster.bits.row(map.row_order[static_cast<std::size_t>(i)]);
        map.labels[i] = labels[map.row_order[static_cast<std::size_t>(i)]];
    }
    return map;
}

} // namespace tmsnn
