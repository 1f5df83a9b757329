#include "tmsnn/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string>

#include "tmsnn/errors.hpp"
#include "tmsnn/io.hpp"
#include "tmsnn/rng.hpp"

namespace tmsnn {

std::array<Eigen::Index, 2> Dataset::class_counts() const
{
    std::array<Eigen::Index, 2> counts{0, 0};
    for (Eigen::Index i = 0; i < labels.size(); ++i) {
        if (labels[i] == -1)
            ++counts[0];
        else
            ++counts[1];
    }
    return counts;
}

void MadelonParams::validate() const
{
    if (n_clusters_per_class < 1) throw ParameterError("n_clusters_per_class must be >= 1");
    if (n_informative < 1) throw ParameterError("n_informative must be >= 1");
    if (n_combination < 0 || n_distractor < 0)
        throw ParameterError("feature counts must be non-negative");
    if (n_informative > 24 ||
        static_cast<long long>(n_clusters()) > (1LL << n_informative))
        throw ParameterError("2*n_clusters_per_class clusters must fit on the 2^n_informative "
                             "hypercube vertices without reuse");
    if (cluster_separation <= 0.0) throw ParameterError("cluster_separation must be positive");
    if (noise_sigma < 0.0 || distractor_sigma < 0.0)
        throw ParameterError("sigmas must be non-negative");
    if (n_label_flips < 0 || n_label_flips % 2 != 0 || n_label_flips > n_clusters_per_class * 2)
        throw ParameterError("n_label_flips must be even, non-negative and at most the cluster count");
    if (max_class_imbalance < 0) throw ParameterError("max_class_imbalance must be non-negative");
    if (n_points < 1) throw ParameterError("n_points must be >= 1");
    if (n_points % 2 != 0 && max_class_imbalance == 0)
        throw ParameterError("n_points must be even when classes are exactly balanced");
}

namespace {

// All 2^d vertices of the d-cube with edge `separation`, centred on the origin.
Eigen::MatrixXd hypercube_vertices(int dims, double separation)
{
    const Eigen::Index count = Eigen::Index{1} << dims;
    const double half = separation / 2.0;
    Eigen::MatrixXd vertices(count, dims);
    for (Eigen::Index v = 0; v < count; ++v)
        for (int d = 0; d < dims; ++d)
            vertices(v, d) = ((v >> d) & 1) ? half : -half;
    return vertices;
}

Eigen::VectorXi label_clusters(const Eigen::MatrixXd& centres, const MadelonParams& params, Rng& rng)
{
    const Eigen::Index n = centres.rows();
    Eigen::VectorXi labels(n);
    if (params.labeling == ClusterLabeling::uniform_random) {
        std::vector<Eigen::Index> order(n);
        std::iota(order.begin(), order.end(), 0);
        rng.shuffle(order);
        for (Eigen::Index i = 0; i < n; ++i)
            labels[order[i]] = i < n / 2 ? -1 : +1;
        return labels;
    }

    Eigen::VectorXd normal(centres.cols());
    for (Eigen::Index d = 0; d < normal.size(); ++d) normal[d] = rng.normal();
    const Eigen::VectorXd margin = centres * normal;
    for (Eigen::Index i = 0; i < n; ++i) labels[i] = margin[i] > 0.0 ? +1 : -1;

    // When the cluster set is not the full antisymmetric vertex set the split
    // can come out uneven; rebalance by flipping the smallest-margin clusters
    // of the majority side.
    auto count_plus = [&] { return (labels.array() == 1).count(); };
    while (count_plus() * 2 != n) {
        const int majority = count_plus() * 2 > n ? +1 : -1;
        Eigen::Index best = -1;
        for (Eigen::Index i = 0; i < n; ++i)
            if (labels[i] == majority && (best < 0 || std::abs(margin[i]) < std::abs(margin[best])))
                best = i;
        labels[best] = -majority;
    }

    // Swap random cluster pairs across the classes to break linearity.
    std::vector<Eigen::Index> minus, plus;
    for (Eigen::Index i = 0; i < n; ++i) (labels[i] == -1 ? minus : plus).push_back(i);
    rng.shuffle(minus);
    rng.shuffle(plus);
    const int pairs = params.n_label_flips / 2;
    for (int k = 0; k < pairs && k < static_cast<int>(std::min(minus.size(), plus.size())); ++k) {
        labels[minus[k]] = +1;
        labels[plus[k]] = -1;
    }
    return labels;
}

} // namespace

Dataset generate_madelon(const MadelonParams& params) { return generate_madelon(params, nullptr); }

Dataset generate_madelon(const MadelonParams& params, MadelonBlueprint* blueprint)
{
    params.validate();
    Rng rng(params.seed);

    const int n_inf = params.n_informative;
    const int n_comb = params.n_combination;
    const int n_dist = params.n_distractor;
    const Eigen::Index n_points = params.n_points;
    const Eigen::Index n_features = params.n_features();

    // Cluster centres: the full vertex set when it fits exactly, otherwise a
    // seeded sample of distinct vertices.
    const Eigen::MatrixXd all_vertices = hypercube_vertices(n_inf, params.cluster_separation);
    Eigen::MatrixXd centres;
    if (params.n_clusters() == all_vertices.rows()) {
        centres = all_vertices;
    } else {
        std::vector<Eigen::Index> pick(all_vertices.rows());
        std::iota(pick.begin(), pick.end(), 0);
        rng.shuffle(pick);
        centres.resize(params.n_clusters(), n_inf);
        for (Eigen::Index i = 0; i < centres.rows(); ++i) centres.row(i) = all_vertices.row(pick[i]);
    }

    const Eigen::VectorXi cluster_labels = label_clusters(centres, params, rng);

    // Class sizes: exact halves, odd remainder (when allowed) goes to class -1.
    const Eigen::Index n_minus = (n_points + 1) / 2;
    const Eigen::Index n_plus = n_points - n_minus;

    // Points round-robin over their class's clusters, class -1 block first.
    Eigen::VectorXi point_clusters(n_points);
    Eigen::VectorXi labels(n_points);
    {
        Eigen::Index row = 0;
        for (const int cls : {-1, +1}) {
            std::vector<Eigen::Index> cls_clusters;
            for (Eigen::Index c = 0; c < cluster_labels.size(); ++c)
                if (cluster_labels[c] == cls) cls_clusters.push_back(c);
            const Eigen::Index quota = cls == -1 ? n_minus : n_plus;
            for (Eigen::Index i = 0; i < quota; ++i, ++row) {
                point_clusters[row] = static_cast<int>(cls_clusters[i % cls_clusters.size()]);
                labels[row] = cls;
            }
        }
    }

    Eigen::MatrixXd informative(n_points, n_inf);
    for (Eigen::Index p = 0; p < n_points; ++p)
        for (int d = 0; d < n_inf; ++d)
            informative(p, d) = centres(point_clusters[p], d) + params.noise_sigma * rng.normal();

    // Combination columns: mix * informative plus small recorded noise.
    Eigen::MatrixXd coeffs(n_inf, n_comb);
    for (int j = 0; j < n_comb; ++j)
        for (int d = 0; d < n_inf; ++d)
            coeffs(d, j) = rng.uniform(-1.0, 1.0);
    Eigen::MatrixXd combination = informative * coeffs;
    Eigen::MatrixXd comb_noise(n_points, n_comb);
    for (int j = 0; j < n_comb; ++j) {
        const double mean = combination.col(j).mean();
        const double var = (combination.col(j).array() - mean).square().mean();
        const double noise_sigma = 0.05 * std::sqrt(var);
        for (Eigen::Index p = 0; p < n_points; ++p) comb_noise(p, j) = noise_sigma * rng.normal();
    }
    combination += comb_noise;

    Eigen::MatrixXd features(n_points, n_features);
    features.leftCols(n_inf) = informative;
    features.middleCols(n_inf, n_comb) = combination;
    for (int j = 0; j < n_dist; ++j)
        for (Eigen::Index p = 0; p < n_points; ++p)
            features(p, n_inf + n_comb + j) = params.distractor_sigma * rng.normal();

    std::vector<FeatureTag> meta(n_features);
    for (Eigen::Index f = 0; f < n_features; ++f)
        meta[f] = f < n_inf                ? FeatureTag::informative
                  : f < n_inf + n_comb     ? FeatureTag::combination
                                           : FeatureTag::distractor;

    // Scatter informative and combination columns among the distractors, then
    // shuffle the rows so the classes interleave.
    std::vector<Eigen::Index> column_order(n_features);
    std::iota(column_order.begin(), column_order.end(), 0);
    rng.shuffle(column_order);
    std::vector<Eigen::Index> row_order(n_points);
    std::iota(row_order.begin(), row_order.end(), 0);
    rng.shuffle(row_order);

    Dataset ds;
    ds.seed = params.seed;
    ds.features.resize(n_points, n_features);
    ds.labels.resize(n_points);
    ds.feature_meta.resize(n_features);
    for (Eigen::Index j = 0; j < n_features; ++j) ds.feature_meta[j] = meta[column_order[j]];
    for (Eigen::Index i = 0; i < n_points; ++i) {
        ds.labels[i] = labels[row_order[i]];
        for (Eigen::Index j = 0; j < n_features; ++j)
            ds.features(i, j) = features(row_order[i], column_order[j]);
    }

    if (blueprint) {
        blueprint->cluster_centres = centres;
        blueprint->cluster_labels = cluster_labels;
        blueprint->combination_coeffs = coeffs;
        blueprint->column_order = column_order;
        blueprint->row_order = row_order;
        blueprint->point_clusters.resize(n_points);
        blueprint->combination_noise.resize(n_points, n_comb);
        for (Eigen::Index i = 0; i < n_points; ++i) {
            blueprint->point_clusters[i] = point_clusters[row_order[i]];
            blueprint->combination_noise.row(i) = comb_noise.row(row_order[i]);
        }
    }
    return ds;
}

Dataset load_madelon_files(const std::filesystem::path& data_path,
                           const std::filesystem::path& labels_path)
{
    std::ifstream data_file(data_path);
    if (!data_file) throw FormatError("cannot open data file: " + data_path.string());
    std::ifstream labels_file(labels_path);
    if (!labels_file) throw FormatError("cannot open labels file: " + labels_path.string());

    std::vector<std::vector<double>> rows;
    std::string line;
    Eigen::Index width = -1;
    while (std::getline(data_file, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::vector<double> row;
        std::size_t pos = 0;
        while (pos < line.size()) {
            while (pos < line.size() && (line[pos] == ' ' || line[pos] == '\t' || line[pos] == '\r')) ++pos;
            if (pos >= line.size()) break;
            std::size_t end = pos;
            while (end < line.size() && line[end] != ' ' && line[end] != '\t' && line[end] != '\r') ++end;
            row.push_back(parse_double(line.substr(pos, end - pos),
                                       data_path.string() + " line " + std::to_string(rows.size() + 1)));
            pos = end;
        }
        if (width < 0) width = static_cast<Eigen::Index>(row.size());
        if (static_cast<Eigen::Index>(row.size()) != width)
            throw FormatError(data_path.string() + ": inconsistent feature count at line " +
                              std::to_string(rows.size() + 1));
        rows.push_back(std::move(row));
    }

    std::vector<int> labels;
    while (std::getline(labels_file, line)) {
        if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
        std::istringstream iss(line);
        std::string token;
        iss >> token;
        int value = 0;
        if (token == "-1")
            value = -1;
        else if (token == "1" || token == "+1")
            value = +1;
        else
            throw FormatError(labels_path.string() + ": label must be -1 or +1, got '" + token + "'");
        labels.push_back(value);
    }

    if (rows.size() != labels.size())
        throw FormatError("row/label count mismatch: " + std::to_string(rows.size()) + " datapoints vs " +
                          std::to_string(labels.size()) + " labels");
    if (rows.empty()) throw FormatError(data_path.string() + ": no datapoints");

    Dataset ds;
    ds.features.resize(static_cast<Eigen::Index>(rows.size()), width);
    ds.labels.resize(static_cast<Eigen::Index>(labels.size()));
    for (Eigen::Index i = 0; i < ds.features.rows(); ++i) {
        ds.labels[i] = labels[i];
        for (Eigen::Index j = 0; j < width; ++j) ds.features(i, j) = rows[i][j];
    }
    ds.feature_meta.assign(width, FeatureTag::unknown);
    return ds;
}

Dataset standardize(const Dataset& ds, std::vector<std::string>* warnings)
{
    Dataset out = ds;
    for (Eigen::Index j = 0; j < ds.features.cols(); ++j) {
        const double mean = ds.features.col(j).mean();
        const double var = (ds.features.col(j).array() - mean).square().mean();
        if (var <= 0.0) {
            out.features.col(j).setZero();
            if (warnings)
                warnings->push_back("column " + std::to_string(j) + " has zero variance; set to zeros");
            continue;
        }
        out.features.col(j) = (ds.features.col(j).array() - mean) / std::sqrt(var);
    }
    return out;
}

} // namespace tmsnn
