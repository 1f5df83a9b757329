#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace tmsnn {

enum class FeatureTag : char {
    informative = 'i',
    combination = 'c',
    distractor = 'd',
    unknown = 'u',
};

/// Labelled feature matrix with per-feature provenance tags.
struct Dataset {
    Eigen::MatrixXd features;             ///< P x F
    Eigen::VectorXi labels;               ///< P entries, each -1 or +1
    std::vector<FeatureTag> feature_meta; ///< F entries
    std::uint64_t seed = 0;

    Eigen::Index n_points() const { return features.rows(); }
    Eigen::Index n_features() const { return features.cols(); }

    /// {count of -1 labels, count of +1 labels}
    std::array<Eigen::Index, 2> class_counts() const;
};

/// How cluster labels are assigned on the hypercube vertices.
///
/// `hyperplane` draws a random hyperplane through the cube centre, labels each
/// cluster by its side, then swaps `n_label_flips` random cluster pairs across
/// the classes. The flips keep the task non-linearly separable while the
/// hyperplane core keeps the classes learnable. `uniform_random` labels the
/// clusters by a uniformly random balanced assignment.
enum class ClusterLabeling {
    hyperplane,
    uniform_random,
};

struct MadelonParams {
    int n_clusters_per_class = 16;
    int n_informative = 5;
    int n_combination = 15;
    int n_distractor = 480;
    double cluster_separation = 2.0; ///< hypercube edge length
    double noise_sigma = 0.4;        ///< isotropic cluster standard deviation
    double distractor_sigma = 0.1;   ///< distractor column standard deviation
    ClusterLabeling labeling = ClusterLabeling::hyperplane;
    int n_label_flips = 2;           ///< cluster pairs swapped across classes (even)
    int max_class_imbalance = 0;     ///< allowed | #(-1) - #(+1) |
    int n_points = 300;
    std::uint64_t seed = 7;

    int n_features() const { return n_informative + n_combination + n_distractor; }
    int n_clusters() const { return 2 * n_clusters_per_class; }

    /// Throws ParameterError when any invariant is violated.
    void validate() const;
};

/// Generation internals, fully determined by the seed. Lets tests reconstruct
/// every combination column as coefficients * informative + recorded noise.
struct MadelonBlueprint {
    Eigen::MatrixXd cluster_centres;    ///< n_clusters x n_informative
    Eigen::VectorXi cluster_labels;     ///< n_clusters
    Eigen::VectorXi point_clusters;     ///< n_points, in output row order
    Eigen::MatrixXd combination_coeffs; ///< n_informative x n_combination
    Eigen::MatrixXd combination_noise;  ///< n_points x n_combination, output row order
    std::vector<Eigen::Index> column_order; ///< output col j came from pre-shuffle col column_order[j]
    std::vector<Eigen::Index> row_order;    ///< output row i came from pre-shuffle row row_order[i]
};

/// Generate a MADELON-style dataset: Gaussian clusters on hypercube vertices,
/// linear combination features, label-independent distractors, seeded column
/// and row shuffles.
Dataset generate_madelon(const MadelonParams& params);
Dataset generate_madelon(const MadelonParams& params, MadelonBlueprint* blueprint);

/// Load the NIPS-2003 text distribution: whitespace-separated numbers, one
/// datapoint per line, labels one per line in {-1, +1}.
Dataset load_madelon_files(const std::filesystem::path& data_path,
                           const std::filesystem::path& labels_path);

/// Column-wise zero-mean unit-variance scaling (population variance).
/// Zero-variance columns map to all zeros and append a warning.
Dataset standardize(const Dataset& ds, std::vector<std::string>* warnings = nullptr);

} // namespace tmsnn
