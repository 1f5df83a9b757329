#include "tmsnn/encoding.hpp"

#include <algorithm>
#include <limits>

#include "tmsnn/errors.hpp"
#include "tmsnn/rng.hpp"

namespace tmsnn {

Mask make_mask(Eigen::Index n_features, Eigen::Index n_nodes, MaskDistribution distribution,
               std::uint64_t seed)
{
    if (n_features < 1 || n_nodes < 1)
        throw ParameterError("mask dimensions must be at least 1x1");

    Mask mask;
    mask.seed = seed;
    mask.distribution = distribution;
    mask.matrix.resize(n_features, n_nodes);
    Rng rng(seed);
    // Filled node by node (column-major), matching the storage order.
    for (Eigen::Index j = 0; j < n_nodes; ++j) {
        for (Eigen::Index i = 0; i < n_features; ++i) {
            switch (distribution) {
            case MaskDistribution::uniform01: mask.matrix(i, j) = rng.uniform01(); break;
            case MaskDistribution::uniform_pm1: mask.matrix(i, j) = rng.uniform(-1.0, 1.0); break;
            case MaskDistribution::binary_pm1:
                mask.matrix(i, j) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
                break;
            }
        }
    }
    return mask;
}

void DriveConfig::validate() const
{
    if (theta_s <= 0.0) throw ParameterError("theta_s must be positive");
    if (n_pad < 0) throw ParameterError("n_pad must be non-negative");
    if (!(drive_min < drive_max)) throw ParameterError("drive_min must be below drive_max");
}

Eigen::VectorXd masked_projection(const Eigen::VectorXd& features, const Mask& mask)
{
    if (features.size() != mask.matrix.rows())
        throw ParameterError("feature length " + std::to_string(features.size()) +
                             " does not match mask rows " + std::to_string(mask.matrix.rows()));
    return mask.matrix.transpose() * features;
}

DriveScale fit_drive_scale(const Eigen::MatrixXd& features, const Mask& mask, const DriveConfig& cfg)
{
    cfg.validate();
    if (features.rows() == 0) return DriveScale{};

    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    // Same per-row product as encode_datapoint so extrema match exactly.
    for (Eigen::Index p = 0; p < features.rows(); ++p) {
        const Eigen::VectorXd masked = masked_projection(features.row(p).transpose(), mask);
        lo = std::min(lo, masked.minCoeff());
        hi = std::max(hi, masked.maxCoeff());
    }
    if (!(hi > lo)) {
        // Degenerate input set: park everything mid-range.
        return DriveScale{0.0, 0.5 * (cfg.drive_min + cfg.drive_max)};
    }
    DriveScale scale;
    scale.gain = (cfg.drive_max - cfg.drive_min) / (hi - lo);
    scale.offset = cfg.drive_min - scale.gain * lo;
    return scale;
}

DriveSignal encode_datapoint(const Eigen::VectorXd& features, const Mask& mask,
                             const DriveScale& scale, const DriveConfig& cfg)
{
    cfg.validate();
    const Eigen::VectorXd masked = masked_projection(features, mask);

    DriveSignal signal;
    signal.theta_s = cfg.theta_s;
    signal.n_pad = cfg.n_pad;
    signal.reset_level = cfg.reset_level;
    signal.node_values.resize(masked.size() + cfg.n_pad);
    // Scale then saturate: the modulator maps drive into a bounded intensity.
    signal.node_values.head(masked.size()) =
        (scale.gain * masked.array() + scale.offset).cwiseMax(cfg.drive_min).cwiseMin(cfg.drive_max);
    signal.node_values.tail(cfg.n_pad).setConstant(cfg.reset_level);
    return signal;
}

EncodedDataset encode_dataset(const Dataset& ds, const Mask& mask, const DriveConfig& cfg)
{
    EncodedDataset out;
    out.config = cfg;
    out.scale = fit_drive_scale(ds.features, mask, cfg);
    out.signals.reserve(static_cast<std::size_t>(ds.n_points()));
    for (Eigen::Index p = 0; p < ds.n_points(); ++p)
        out.signals.push_back(encode_datapoint(ds.features.row(p).transpose(), mask, out.scale, cfg));
    return out;
}

} // namespace tmsnn
