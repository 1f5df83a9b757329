#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

#include "tmsnn/encoding.hpp"
#include "tmsnn/rng.hpp"

namespace tmsnn {

/// Leaky integrate-and-fire surrogate for the excitable spiking node.
///
/// Dynamics: v' = (-v + input_gain * u(t) + bias) / tau_s, explicit Euler at
/// dt_s. A threshold crossing outside the refractory window records a spike,
/// resets v to reset_value and starts an absolute refractory period during
/// which v is held at reset_value. input_gain may be negative to drive the
/// surrogate with the inverted waveform.
struct NeuronParams {
    double tau_s = 1e-9;
    double threshold = 0.6;
    double reset_value = 0.0;
    double refractory_s = 1e-9;
    double spike_width_s = 150e-12;
    double dt_s = 25e-12;
    double input_gain = 1.0;
    double bias = 0.0;
    double noise_sigma = 0.0;      ///< per-step Gaussian drive noise
    std::uint64_t noise_seed = 0;

    /// Throws ParameterError unless dt divides theta exactly, dt < spike
    /// width, tau > dt, refractory >= 0 and reset < threshold.
    void validate(double theta_s) const;

    int steps_per_node(double theta_s) const;
    int refractory_steps() const;
};

struct SimulationResult {
    std::vector<double> spike_times; ///< seconds from signal start
    Eigen::VectorXd trace_times;     ///< empty unless a trace was requested
    Eigen::VectorXd trace;           ///< membrane value per step
};

/// Integrate one datapoint's drive from rest. State does not carry across
/// datapoints; each call starts at reset_value.
SimulationResult simulate(const DriveSignal& signal, const NeuronParams& params,
                          bool keep_trace = false, Rng* noise_rng = nullptr);

using RasterMatrix = Eigen::Matrix<std::uint8_t, Eigen::Dynamic, Eigen::Dynamic>;

/// Binary per-node readout for a set of datapoints. Element (p, i) is 1 iff
/// datapoint p produced a spike inside node i's theta-long segment. Padding
/// nodes are excluded.
struct SpikeRaster {
    RasterMatrix bits; ///< P x N_v
    std::vector<std::vector<double>> spike_times; ///< optional, per datapoint

    Eigen::Index n_points() const { return bits.rows(); }
    Eigen::Index n_nodes() const { return bits.cols(); }
    double density() const
    {
        return bits.size() == 0 ? 0.0 : bits.cast<double>().sum() / static_cast<double>(bits.size());
    }
};

/// S[i] = 1 iff some spike lands in [i*theta, (i+1)*theta), i < N_v. Spikes in
/// the padding segments stay in spike_times but never reach S.
Eigen::Vector<std::uint8_t, Eigen::Dynamic> binarize(const std::vector<double>& spike_times,
                                                     const DriveSignal& signal);

/// simulate + binarize over a signal sequence; row order = input order.
SpikeRaster run_reservoir(const std::vector<DriveSignal>& signals, const NeuronParams& params,
                          bool keep_spike_times = false);

struct CalibrationResult {
    double threshold = 0.0;
    double density = 0.0; ///< spike density achieved on the calibration subset
};

/// Bisection search for the threshold whose raster density on (a subset of)
/// the drive hits target_density. Deterministic; the intended operating range
/// is a density in [0.05, 0.25].
CalibrationResult calibrate_threshold(const std::vector<DriveSignal>& signals, NeuronParams params,
                                      double target_density, Eigen::Index max_signals = 32);

/// Rectangular pulse train of unit height: value 1 within spike_width_s after
/// each spike instant. Sampled at dt over the signal duration.
void render_spike_waveform(const std::vector<double>& spike_times, const DriveSignal& signal,
                           const NeuronParams& params, Eigen::VectorXd& times,
                           Eigen::VectorXd& values);

} // namespace tmsnn
