#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tmsnn/dataset.hpp"

namespace tmsnn {

enum class MaskDistribution {
    uniform01,   ///< i.i.d. uniform [0, 1)
    uniform_pm1, ///< i.i.d. uniform [-1, 1)
    binary_pm1,  ///< i.i.d. {-1, +1}, equiprobable
};

/// Fixed random input mask mapping F features onto N_v virtual nodes.
struct Mask {
    Eigen::MatrixXd matrix; ///< F x N_v
    std::uint64_t seed = 0;
    MaskDistribution distribution = MaskDistribution::uniform_pm1;
};

Mask make_mask(Eigen::Index n_features, Eigen::Index n_nodes, MaskDistribution distribution,
               std::uint64_t seed);

/// Timing and range of the per-datapoint drive waveform.
struct DriveConfig {
    double theta_s = 250e-12; ///< virtual node duration
    int n_pad = 8;            ///< zero-drive reset nodes appended per datapoint
    double drive_min = 0.0;
    double drive_max = 1.0;
    double reset_level = 0.0;

    void validate() const;
};

/// Affine map applied to masked values: value -> gain * value + offset.
struct DriveScale {
    double gain = 1.0;
    double offset = 0.0;
};

/// Piecewise-constant waveform for one datapoint: N_v masked-and-scaled node
/// values followed by n_pad reset nodes.
struct DriveSignal {
    Eigen::VectorXd node_values;
    double theta_s = 250e-12;
    int n_pad = 8;
    double reset_level = 0.0;

    Eigen::Index n_nodes() const { return node_values.size() - n_pad; }
    double duration_s() const { return static_cast<double>(node_values.size()) * theta_s; }
};

/// features . mask (row vector times matrix), no scaling.
Eigen::VectorXd masked_projection(const Eigen::VectorXd& features, const Mask& mask);

/// Min-max fit of the affine scale so the masked values of `features` span
/// [drive_min, drive_max]. Fit once per experiment over the injected set.
DriveScale fit_drive_scale(const Eigen::MatrixXd& features, const Mask& mask,
                           const DriveConfig& cfg);

/// Scaled (and saturated to [drive_min, drive_max]) drive for one datapoint.
DriveSignal encode_datapoint(const Eigen::VectorXd& features, const Mask& mask,
                             const DriveScale& scale, const DriveConfig& cfg);

struct EncodedDataset {
    std::vector<DriveSignal> signals;
    DriveScale scale;
    DriveConfig config;
};

/// Per-datapoint encode with one shared scale fitted over the whole set.
EncodedDataset encode_dataset(const Dataset& ds, const Mask& mask, const DriveConfig& cfg);

} // namespace tmsnn
