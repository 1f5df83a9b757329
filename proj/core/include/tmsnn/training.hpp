#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "tmsnn/reservoir.hpp"

namespace tmsnn {

enum class TrainingMethod {
    ols,          ///< minimum-norm least squares on one-hot targets
    significance, ///< binary weights on the top-scoring nodes per class
};

/// Raster rows and labels selected for training: n_t rows per class.
struct TrainingSet {
    RasterMatrix raster;    ///< 2*n_t x N_v
    Eigen::VectorXi labels; ///< 2*n_t entries in {-1, +1}
    int n_t = 0;
    std::uint64_t selection_seed = 0;
};

/// Readout weight matrix plus training metadata. Column 0 scores class -1,
/// column 1 scores class +1.
struct ReadoutWeights {
    Eigen::MatrixXd w; ///< N_v x 2
    TrainingMethod method = TrainingMethod::ols;
    std::optional<int> n_n;
    std::array<int, 2> class_order{-1, +1};
    std::vector<std::string> warnings;
};

/// Per-node per-class spike counts s and significance scores
/// z[n,i] = s[n,i]^2 / sum_i s[n,i] (0 when the node never spikes).
struct SignificanceTable {
    Eigen::MatrixXi counts; ///< N_v x 2
    Eigen::MatrixXd scores; ///< N_v x 2, empty until score() runs
};

/// W = pinv(X) Y with X the raster rows as reals and Y one-hot labels.
/// Minimum-norm solution via SVD with relative singular-value cutoff 1e-10.
/// An all-zero X yields W = 0 and a recorded warning.
ReadoutWeights train_ols(const TrainingSet& train);

/// Step 1: count spikes per node per class over the training rows.
SignificanceTable count_spikes(const TrainingSet& train);

/// Step 2: fill the significance scores from the counts.
SignificanceTable score(SignificanceTable table);

/// Step 3: per class, weight 1 on the n_n highest-scoring nodes (ties to the
/// lower node index), 0 elsewhere. Nodes with zero score are never selected;
/// if fewer than n_n qualify a warning is recorded.
ReadoutWeights select_top_nodes(const SignificanceTable& table, int n_n);

/// count_spikes + score + select_top_nodes.
ReadoutWeights train_significance(const TrainingSet& train, int n_n);

/// Per-class scores S . W for one raster row.
Eigen::RowVector2d predict_scores(const Eigen::RowVector<std::uint8_t, Eigen::Dynamic>& s_row,
                                  const ReadoutWeights& weights);

/// argmax(S . W) mapped through class_order; ties resolve to the first class.
int predict(const Eigen::RowVector<std::uint8_t, Eigen::Dynamic>& s_row,
            const ReadoutWeights& weights);

} // namespace tmsnn
