#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "tmsnn/dataset.hpp"
#include "tmsnn/encoding.hpp"
#include "tmsnn/eval.hpp"
#include "tmsnn/reservoir.hpp"

namespace tmsnn {

/// Shortest round-trip decimal representation (std::to_chars), locale-free.
std::string format_double(double value);

/// Strict double parse; `context` names the source for the error message.
double parse_double(std::string_view text, const std::string& context);

// --- dataset files (NIPS-2003 text format + key-value sidecar) ---

/// Writes <base>.data, <base>.labels and <base>.meta under `dir`.
void save_dataset(const std::filesystem::path& dir, const Dataset& ds,
                  const MadelonParams* params = nullptr, const std::string& base = "dataset");

/// Loads a directory written by save_dataset.
Dataset load_dataset(const std::filesystem::path& dir, const std::string& base = "dataset");

// --- raster and label files ---

void write_raster_csv(const std::filesystem::path& path, const RasterMatrix& bits);
RasterMatrix read_raster_csv(const std::filesystem::path& path);

void write_labels(const std::filesystem::path& path, const Eigen::VectorXi& labels);
Eigen::VectorXi read_labels(const std::filesystem::path& path);

// --- drive / trace exports (two-column time_s,value CSV) ---

/// One row per virtual node (segment start time). Signals are laid out
/// back-to-back on the time axis in sequence order.
void write_drive_csv(const std::filesystem::path& path, const std::vector<DriveSignal>& signals);

void write_trace_csv(const std::filesystem::path& path, const Eigen::VectorXd& times,
                     const Eigen::VectorXd& values);

// --- training exports ---

/// node,weight_-1,weight_+1 rows.
void write_weights_csv(const std::filesystem::path& path, const ReadoutWeights& weights);

/// node,count_-1,count_+1,score_-1,score_+1 rows.
void write_significance_csv(const std::filesystem::path& path, const SignificanceTable& table);

// --- evaluation exports ---

void write_eval_csv(const std::filesystem::path& path, const EvalResult& result,
                    const std::string& method);
void write_confusion_csv(const std::filesystem::path& path, const Eigen::Matrix2i& confusion);

/// Fixed-width text rendering, rows = true class, columns = predicted.
std::string render_confusion(const Eigen::Matrix2i& confusion);

void write_sweep_csv(const std::filesystem::path& rows_path,
                     const std::filesystem::path& cells_path, const SweepResult& result);

/// temporal_map.csv (reordered raster) next to temporal_map.info (boundary row
/// and the original row order).
void write_temporal_map(const std::filesystem::path& dir, const TemporalMap& map);

} // namespace tmsnn
