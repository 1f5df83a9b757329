#include "tmsnn/reservoir.hpp"

#include <cmath>
#include <string>

#include "tmsnn/errors.hpp"

namespace tmsnn {

void NeuronParams::validate(double theta_s) const
{
    if (tau_s <= 0.0 || dt_s <= 0.0) throw ParameterError("tau_s and dt_s must be positive");
    const double ratio = theta_s / dt_s;
    if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1.0)
        throw ParameterError("dt_s must divide theta_s exactly");
    if (dt_s >= spike_width_s) throw ParameterError("dt_s must be below spike_width_s");
    if (tau_s <= dt_s) throw ParameterError("tau_s must exceed dt_s");
    if (refractory_s < 0.0) throw ParameterError("refractory_s must be non-negative");
    if (reset_value >= threshold) throw ParameterError("reset_value must be below threshold");
    if (noise_sigma < 0.0) throw ParameterError("noise_sigma must be non-negative");
}

int NeuronParams::steps_per_node(double theta_s) const
{
    return static_cast<int>(std::round(theta_s / dt_s));
}

int NeuronParams::refractory_steps() const
{
    return static_cast<int>(std::round(refractory_s / dt_s));
}

SimulationResult simulate(const DriveSignal& signal, const NeuronParams& params, bool keep_trace,
                          Rng* noise_rng)
{
    if (signal.node_values.size() == 0) throw ParameterError("empty drive signal");
    params.validate(signal.theta_s);
    if (!signal.node_values.allFinite()) throw InputError("drive signal contains a non-finite value");

    const int spn = params.steps_per_node(signal.theta_s);
    const int refr_steps = params.refractory_steps();
    const Eigen::Index total_steps = signal.node_values.size() * spn;
    const double leak = params.dt_s / params.tau_s;

    SimulationResult result;
    if (keep_trace) {
        result.trace.resize(total_steps);
        result.trace_times.resize(total_steps);
    }

    double v = params.reset_value;
    int refractory_left = 0;
    for (Eigen::Index step = 0; step < total_steps; ++step) {
        double u = signal.node_values[step / spn];
        if (params.noise_sigma > 0.0 && noise_rng) u += params.noise_sigma * noise_rng->normal();

        if (refractory_left > 0) {
            v = params.reset_value;
            --refractory_left;
        } else {
            v += leak * (-v + params.input_gain * u + params.bias);
            if (v >= params.threshold) {
                result.spike_times.push_back(static_cast<double>(step + 1) * params.dt_s);
                v = params.reset_value;
                refractory_left = refr_steps;
            }
        }
        if (keep_trace) {
            result.trace[step] = v;
            result.trace_times[step] = static_cast<double>(step + 1) * params.dt_s;
        }
    }
    return result;
}

Eigen::Vector<std::uint8_t, Eigen::Dynamic> binarize(const std::vector<double>& spike_times,
                                                     const DriveSignal& signal)
{
    Eigen::Vector<std::uint8_t, Eigen::Dynamic> s =
        Eigen::Vector<std::uint8_t, Eigen::Dynamic>::Zero(signal.n_nodes());
    for (const double t : spike_times) {
        const auto node = static_cast<Eigen::Index>(std::floor(t / signal.theta_s));
        if (node >= 0 && node < s.size()) s[node] = 1;
    }
    return s;
}

SpikeRaster run_reservoir(const std::vector<DriveSignal>& signals, const NeuronParams& params,
                          bool keep_spike_times)
{
    SpikeRaster raster;
    if (signals.empty()) {
        raster.bits.resize(0, 0);
        return raster;
    }
    const Eigen::Index n_nodes = signals.front().n_nodes();
    for (const auto& signal : signals)
        if (signal.n_nodes() != n_nodes)
            throw ParameterError("all drive signals must share the same node count");

    raster.bits.resize(static_cast<Eigen::Index>(signals.size()), n_nodes);
    if (keep_spike_times) raster.spike_times.resize(signals.size());

    for (std::size_t p = 0; p < signals.size(); ++p) {
        // Per-datapoint noise stream so datapoint-level parallelism would stay
        // bit-identical to sequential execution.
        Rng noise_rng(derive_seed(params.noise_seed, "neuron-noise", p));
        Rng* rng_ptr = params.noise_sigma > 0.0 ? &noise_rng : nullptr;
        SimulationResult sim = simulate(signals[p], params, false, rng_ptr);
        raster.bits.row(static_cast<Eigen::Index>(p)) =
            binarize(sim.spike_times, signals[p]).transpose();
        if (keep_spike_times) raster.spike_times[p] = std::move(sim.spike_times);
    }
    return raster;
}

CalibrationResult calibrate_threshold(const std::vector<DriveSignal>& signals, NeuronParams params,
                                      double target_density, Eigen::Index max_signals)
{
    if (signals.empty()) throw ParameterError("cannot calibrate on an empty signal set");
    if (!(target_density > 0.0 && target_density < 1.0))
        throw ParameterError("target_density must lie in (0, 1)");

    const auto count = std::min<std::size_t>(signals.size(), static_cast<std::size_t>(max_signals));
    const std::vector<DriveSignal> subset(signals.begin(), signals.begin() + count);

    // v cannot exceed the largest drive equilibrium, so that bounds the search.
    double drive_max = subset.front().node_values.maxCoeff();
    double drive_min = subset.front().node_values.minCoeff();
    for (const auto& s : subset) {
        drive_max = std::max(drive_max, s.node_values.maxCoeff());
        drive_min = std::min(drive_min, s.node_values.minCoeff());
    }
    const double eq_hi = std::max(params.input_gain * drive_max, params.input_gain * drive_min) +
                         params.bias;
    double lo = params.reset_value + 1e-12;
    double hi = std::max(eq_hi + 1.0, lo + 1.0);

    auto density_at = [&](double threshold) {
        params.threshold = threshold;
        return run_reservoir(subset, params).density();
    };

    for (int iter = 0; iter < 48; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (density_at(mid) > target_density)
            lo = mid;
        else
            hi = mid;
    }
    CalibrationResult result;
    result.threshold = 0.5 * (lo + hi);
    result.density = density_at(result.threshold);
    return result;
}

void render_spike_waveform(const std::vector<double>& spike_times, const DriveSignal& signal,
                           const NeuronParams& params, Eigen::VectorXd& times, Eigen::VectorXd& values)
{
    const int spn = params.steps_per_node(signal.theta_s);
    const Eigen::Index total_steps = signal.node_values.size() * spn;
    times.resize(total_steps);
    values.setZero(total_steps);
    for (Eigen::Index step = 0; step < total_steps; ++step)
        times[step] = static_cast<double>(step + 1) * params.dt_s;
    for (const double t : spike_times) {
        const auto first = static_cast<Eigen::Index>(std::floor(t / params.dt_s));
        const auto span = static_cast<Eigen::Index>(std::round(params.spike_width_s / params.dt_s));
        for (Eigen::Index k = first; k < first + span && k < total_steps; ++k)
            if (k >= 0) values[k] = 1.0;
    }
}

} // namespace tmsnn
