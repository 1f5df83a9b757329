#include "tmsnn/io.hpp"

#include <charconv>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <system_error>

#include "tmsnn/errors.hpp"

namespace tmsnn {

std::string format_double(double value)
{
    char buffer[64];
    const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, value);
    if (ec != std::errc{}) throw std::runtime_error("to_chars failed");
    return std::string(buffer, ptr);
}

double parse_double(std::string_view text, const std::string& context)
{
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size())
        throw FormatError(context + ": invalid number '" + std::string(text) + "'");
    return value;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path);
    if (!out) throw FormatError("cannot write " + path.string());
    return out;
}

std::ifstream open_in(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    return in;
}

const char* tag_name(FeatureTag tag)
{
    switch (tag) {
    case FeatureTag::informative: return "informative";
    case FeatureTag::combination: return "combination";
    case FeatureTag::distractor: return "distractor";
    default: return "unknown";
    }
}

const char* labeling_name(ClusterLabeling labeling)
{
    return labeling == ClusterLabeling::hyperplane ? "hyperplane" : "uniform_random";
}

} // namespace

void save_dataset(const std::filesystem::path& dir, const Dataset& ds, const MadelonParams* params,
                  const std::string& base)
{
    std::filesystem::create_directories(dir);

    auto data = open_out(dir / (base + ".data"));
    for (Eigen::Index i = 0; i < ds.n_points(); ++i) {
        for (Eigen::Index j = 0; j < ds.n_features(); ++j) {
            if (j) data << ' ';
            data << format_double(ds.features(i, j));
        }
        data << '\n';
    }

    auto labels = open_out(dir / (base + ".labels"));
    for (Eigen::Index i = 0; i < ds.labels.size(); ++i) labels << ds.labels[i] << '\n';

    auto meta = open_out(dir / (base + ".meta"));
    meta << "format_version 1\n";
    meta << "kind " << (params ? "generated" : "loaded") << '\n';
    meta << "seed " << ds.seed << '\n';
    meta << "n_points " << ds.n_points() << '\n';
    meta << "n_features " << ds.n_features() << '\n';
    if (params) {
        meta << "n_informative " << params->n_informative << '\n';
        meta << "n_combination " << params->n_combination << '\n';
        meta << "n_distractor " << params->n_distractor << '\n';
        meta << "n_clusters_per_class " << params->n_clusters_per_class << '\n';
        meta << "cluster_separation " << format_double(params->cluster_separation) << '\n';
        meta << "noise_sigma " << format_double(params->noise_sigma) << '\n';
        meta << "distractor_sigma " << format_double(params->distractor_sigma) << '\n';
        meta << "labeling " << labeling_name(params->labeling) << '\n';
        meta << "n_label_flips " << params->n_label_flips << '\n';
        meta << "max_class_imbalance " << params->max_class_imbalance << '\n';
    }
    meta << "feature_meta ";
    for (const FeatureTag tag : ds.feature_meta) meta << static_cast<char>(tag);
    meta << '\n';
}

Dataset load_dataset(const std::filesystem::path& dir, const std::string& base)
{
    Dataset ds = load_madelon_files(dir / (base + ".data"), dir / (base + ".labels"));

    const auto meta_path = dir / (base + ".meta");
    if (std::filesystem::exists(meta_path)) {
        auto meta = open_in(meta_path);
        std::string line;
        while (std::getline(meta, line)) {
            std::istringstream iss(line);
            std::string key, value;
            iss >> key >> value;
            if (key == "seed") ds.seed = std::stoull(value);
            if (key == "feature_meta") {
                if (static_cast<Eigen::Index>(value.size()) != ds.n_features())
                    throw FormatError(meta_path.string() + ": feature_meta length mismatch");
                for (Eigen::Index j = 0; j < ds.n_features(); ++j)
                    ds.feature_meta[static_cast<std::size_t>(j)] = static_cast<FeatureTag>(value[j]);
            }
        }
    }
    return ds;
}

void write_raster_csv(const std::filesystem::path& path, const RasterMatrix& bits)
{
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < bits.rows(); ++i) {
        for (Eigen::Index j = 0; j < bits.cols(); ++j) {
            if (j) out << ',';
            out << static_cast<int>(bits(i, j));
        }
        out << '\n';
    }
}

RasterMatrix read_raster_csv(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::vector<std::vector<std::uint8_t>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::uint8_t> row;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t comma = line.find(',', pos);
            const std::string_view token(line.data() + pos,
                                         (comma == std::string::npos ? line.size() : comma) - pos);
            if (token == "0")
                row.push_back(0);
            else if (token == "1")
                row.push_back(1);
            else
                throw FormatError(path.string() + ": raster entries must be 0 or 1, got '" +
                                  std::string(token) + "'");
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (!rows.empty() && rows.front().size() != row.size())
            throw FormatError(path.string() + ": ragged raster rows");
        rows.push_back(std::move(row));
    }
    RasterMatrix bits(static_cast<Eigen::Index>(rows.size()),
                      rows.empty() ? 0 : static_cast<Eigen::Index>(rows.front().size()));
    for (Eigen::Index i = 0; i < bits.rows(); ++i)
        for (Eigen::Index j = 0; j < bits.cols(); ++j)
            bits(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    return bits;
}

void write_labels(const std::filesystem::path& path, const Eigen::VectorXi& labels)
{
    auto out = open_out(path);
    for (Eigen::Index i = 0; i < labels.size(); ++i) out << labels[i] << '\n';
}

Eigen::VectorXi read_labels(const std::filesystem::path& path)
{
    auto in = open_in(path);
    std::vector<int> values;
    std::string line;
    while (std::getline(in, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream iss(line);
        std::string token;
        iss >> token;
        if (token == "-1")
            values.push_back(-1);
        else if (token == "1" || token == "+1")
            values.push_back(+1);
        else
            throw FormatError(path.string() + ": label must be -1 or +1, got '" + token + "'");
    }
    Eigen::VectorXi labels(static_cast<Eigen::Index>(values.size()));
    for (Eigen::Index i = 0; i < labels.size(); ++i) labels[i] = values[static_cast<std::size_t>(i)];
    return labels;
}

void write_drive_csv(const std::filesystem::path& path, const std::vector<DriveSignal>& signals)
{
    auto out = open_out(path);
    out << "time_s,value\n";
    double t0 = 0.0;
    for (const auto& signal : signals) {
        for (Eigen::Index i = 0; i < signal.node_values.size(); ++i)
            out << format_double(t0 + static_cast<double>(i) * signal.theta_s) << ','
                << format_double(signal.node_values[i]) << '\n';
        t0 += signal.duration_s();
    }
}

void write_trace_csv(const std::filesystem::path& path, const Eigen::VectorXd& times,
                     const Eigen::VectorXd& values)
{
    auto out = open_out(path);
    out << "time_s,value\n";
    for (Eigen::Index i = 0; i < times.size(); ++i)
        out << format_double(times[i]) << ',' << format_double(values[i]) << '\n';
}

void write_weights_csv(const std::filesystem::path& path, const ReadoutWeights& weights)
{
    auto out = open_out(path);
    out << "node,weight_-1,weight_+1\n";
    for (Eigen::Index n = 0; n < weights.w.rows(); ++n)
        out << n << ',' << format_double(weights.w(n, 0)) << ',' << format_double(weights.w(n, 1))
            << '\n';
}

void write_significance_csv(const std::filesystem::path& path, const SignificanceTable& table)
{
    auto out = open_out(path);
    out << "node,count_-1,count_+1,score_-1,score_+1\n";
    for (Eigen::Index n = 0; n < table.counts.rows(); ++n) {
        out << n << ',' << table.counts(n, 0) << ',' << table.counts(n, 1) << ',';
        if (table.scores.size()) {
            out << format_double(table.scores(n, 0)) << ',' << format_double(table.scores(n, 1));
        } else {
            out << ',';
        }
        out << '\n';
    }
}

void write_eval_csv(const std::filesystem::path& path, const EvalResult& result,
                    const std::string& method)
{
    auto out = open_out(path);
    out << "method,n_t,n_n,repeats,accuracy\n";
    out << method << ',' << result.n_t << ',';
    if (result.n_n) out << *result.n_n;
    out << ',' << result.repeats << ',' << format_double(result.accuracy) << '\n';
    out << "\nrepeat,accuracy\n";
    for (std::size_t r = 0; r < result.per_repeat_accuracies.size(); ++r)
        out << r << ',' << format_double(result.per_repeat_accuracies[r]) << '\n';
}

void write_confusion_csv(const std::filesystem::path& path, const Eigen::Matrix2i& confusion)
{
    auto out = open_out(path);
    out << "true\\pred,-1,+1\n";
    out << "-1," << confusion(0, 0) << ',' << confusion(0, 1) << '\n';
    out << "+1," << confusion(1, 0) << ',' << confusion(1, 1) << '\n';
}

std::string render_confusion(const Eigen::Matrix2i& confusion)
{
    std::ostringstream out;
    out << std::setw(10) << ' ' << std::setw(10) << "pred -1" << std::setw(10) << "pred +1" << '\n';
    out << std::setw(10) << "true -1" << std::setw(10) << confusion(0, 0) << std::setw(10)
        << confusion(0, 1) << '\n';
    out << std::setw(10) << "true +1" << std::setw(10) << confusion(1, 0) << std::setw(10)
        << confusion(1, 1) << '\n';
    return out.str();
}

void write_sweep_csv(const std::filesystem::path& rows_path, const std::filesystem::path& cells_path,
                     const SweepResult& result)
{
    auto rows = open_out(rows_path);
    rows << "n_t,best_mean_accuracy,best_n_n_mean,best_max_accuracy,best_n_n_max\n";
    for (const auto& row : result.rows) {
        rows << row.n_t << ',' << format_double(row.best_mean_accuracy) << ',';
        if (row.best_n_n_mean) rows << *row.best_n_n_mean;
        rows << ',' << format_double(row.best_max_accuracy) << ',';
        if (row.best_n_n_max) rows << *row.best_n_n_max;
        rows << '\n';
    }

    auto cells = open_out(cells_path);
    cells << "n_t,n_n,mean_accuracy,max_accuracy\n";
    for (const auto& cell : result.cells) {
        cells << cell.n_t << ',';
        if (cell.n_n) cells << *cell.n_n;
        cells << ',' << format_double(cell.mean_accuracy) << ',' << format_double(cell.max_accuracy)
              << '\n';
    }
}

void write_temporal_map(const std::filesystem::path& dir, const TemporalMap& map)
{
    std::filesystem::create_directories(dir);
    write_raster_csv(dir / "temporal_map.csv", map.bits);
    auto info = open_out(dir / "temporal_map.info");
    info << "class_boundary_row " << map.class_boundary << '\n';
    info << "row_order";
    for (const Eigen::Index r : map.row_order) info << ' ' << r;
    info << '\n';
}

} // namespace tmsnn
