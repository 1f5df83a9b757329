#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "tmsnn/training.hpp"

namespace tmsnn {

/// Accuracy and confusion accumulated over cross-validation repeats.
/// Confusion rows = true class, columns = predicted, in class order [-1, +1];
/// entries sum to repeats * test-set size.
struct EvalResult {
    double accuracy = 0.0;
    Eigen::Matrix2i confusion = Eigen::Matrix2i::Zero();
    int n_t = 0;
    std::optional<int> n_n;
    int repeats = 0;
    std::vector<double> per_repeat_accuracies;
};

/// Random cross-validation: per repeat, draw n_t training rows per class
/// uniformly without replacement; every remaining row is a test point.
/// Requires at least one test point per class. Deterministic given seed; the
/// repeat splits come from derive_seed(seed, "cv-split", repeat).
EvalResult cross_validate(const SpikeRaster& raster, const Eigen::VectorXi& labels,
                          TrainingMethod method, int n_t, std::optional<int> n_n, int repeats,
                          std::uint64_t seed);

struct SweepCell {
    int n_t = 0;
    std::optional<int> n_n;
    double mean_accuracy = 0.0;
    double max_accuracy = 0.0;
};

struct SweepRow {
    int n_t = 0;
    double best_mean_accuracy = 0.0;
    std::optional<int> best_n_n_mean; ///< argmax of the mean, ties to smaller n_n
    double best_max_accuracy = 0.0;
    std::optional<int> best_n_n_max;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<SweepCell> cells;
    std::vector<int> n_t_grid;
    std::vector<int> n_n_grid;
    int repeats = 0;
    std::uint64_t seed = 0;
    TrainingMethod method = TrainingMethod::significance;
};

/// Full grid of cross_validate calls. Cell sub-seeds come from
/// derive_seed(seed, "sweep-cell", n_t, n_n). Both the mean-over-repeats and
/// the best-single-repeat accuracy are reported per cell; the per-n_t rows
/// maximise each over the n_n grid. For the ols method the n_n grid is
/// ignored (one cell per n_t).
SweepResult sweep(const SpikeRaster& raster, const Eigen::VectorXi& labels, TrainingMethod method,
                  const std::vector<int>& n_t_grid, const std::vector<int>& n_n_grid, int repeats,
                  std::uint64_t seed);

/// Raster with rows reordered so class -1 comes first, then class +1 (stable
/// within each class). class_boundary is the first class +1 row index.
struct TemporalMap {
    RasterMatrix bits;
    Eigen::VectorXi labels;
    std::vector<Eigen::Index> row_order; ///< output row i came from input row row_order[i]
    Eigen::Index class_boundary = 0;
};

TemporalMap temporal_map(const SpikeRaster& raster, const Eigen::VectorXi& labels);

} // namespace tmsnn
