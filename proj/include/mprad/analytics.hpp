#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace mprad::analytics {

// Labels throughout are 1 (positive) and 0 (negative).

// ---------------------------------------------------------------------------
// Group comparison and ROC

struct TTest {
    double t = 0.0;
    double p = 1.0;
    double dof = 0.0;
};

/// Unequal-variance two-sample t-test, two-sided.
TTest welch_t_test(std::span<const double> a, std::span<const double> b);

/// Two-sided tail probability of Student's t with `dof` degrees of freedom.
double student_t_two_sided(double t, double dof);

struct RocPoint {
    double threshold;  // classify positive when score >= threshold
    double fpr;
    double tpr;
};

struct Roc {
    double auc = 0.5;
    std::vector<RocPoint> points;  // from (0,0) to (1,1)
    double best_threshold = 0.0;   // Youden's J
    double sensitivity = 0.0;
    double specificity = 0.0;
};

/// AUC by midranks (Mann-Whitney), plus the empirical ROC curve.
Roc roc_auc(std::span<const double> scores, std::span<const int> labels);

struct Logistic {
    double coef = 0.0;
    double intercept = 0.0;
    double auc = 0.5;
    bool separated = false;  // (quasi-)complete separation: coef is +-inf
    int iterations = 0;
};

Logistic univariate_logistic(std::span<const double> x, std::span<const int> labels);

// ---------------------------------------------------------------------------
// Feature tables

struct FeatureTable {
    std::vector<std::string> subject_ids;
    std::vector<int> labels;
    std::vector<std::string> feature_names;
    std::vector<std::vector<double>> rows;  // rows[subject][feature]

    std::size_t size() const noexcept { return rows.size(); }
    std::vector<double> column(std::string_view name) const;
    Eigen::MatrixXd matrix() const;  // subjects x features
};

/// CSV with a header. `id_column` may be absent (ids become row numbers);
/// `label_column` accepts 1/0, positive/negative, pos/neg, true/false.
/// Every other column is a feature and must parse as a finite number.
FeatureTable read_feature_table(const std::filesystem::path& path, std::string_view label_column = "label",
                                std::string_view id_column = "subject_id");
FeatureTable parse_feature_table(std::string_view csv, std::string_view label_column = "label",
                                 std::string_view id_column = "subject_id");
std::string feature_table_csv(const FeatureTable& table);

int parse_label(std::string_view text);

// ---------------------------------------------------------------------------
// Isomap

struct Isomap {
    int k = 0;
    int dims = 0;
    Eigen::MatrixXd points;       // training points, one per row
    Eigen::MatrixXd geodesic;     // n x n shortest-path distances
    Eigen::VectorXd sq_mean;      // column means of squared geodesics
    Eigen::VectorXd eigenvalues;  // top `dims`, descending
    Eigen::MatrixXd eigenvectors; // n x dims, unit columns
    Eigen::MatrixXd embedding;    // n x dims, eigenvectors scaled by sqrt(eigenvalue)
};

/// Symmetrised k-nearest-neighbour graph with Euclidean edge weights,
/// all-pairs shortest paths, classical MDS. Throws Errc::disconnected_graph
/// naming the component sizes, Errc::invalid_argument when k >= n.
Isomap isomap_fit(const Eigen::MatrixXd& points, int k, int dims);

/// Embeds a new point through its k nearest training points.
Eigen::VectorXd isomap_transform(const Isomap& model, const Eigen::VectorXd& x);

/// Connected component sizes of the symmetrised k-NN graph, largest first.
std::vector<int> knn_components(const Eigen::MatrixXd& points, int k);

// ---------------------------------------------------------------------------
// Linear SVM

struct SvmOptions {
    double c_positive = 1.0;
    double cost_ratio = 3.0;  // C_negative / C_positive
    double tolerance = 1e-6;  // maximal KKT violation at exit
    long max_iterations = 10'000'000;
};

struct LinearSvm {
    Eigen::VectorXd w;
    double b = 0.0;
    long iterations = 0;
    double kkt_gap = 0.0;

    double decision(const Eigen::VectorXd& x) const { return w.dot(x) + b; }
};

/// Soft-margin dual solved by SMO with second-order working-set selection.
LinearSvm train_linear_svm(const Eigen::MatrixXd& x, std::span<const int> labels, const SvmOptions& opt = {});

// ---------------------------------------------------------------------------
// IsoSVM

struct IsoSvmOptions {
    int k = 20;
    int dims = 1;
    SvmOptions svm{};
    bool standardize = true;  // z-score input features on the training set
};

struct Standardizer {
    Eigen::VectorXd mean;
    Eigen::VectorXd scale;

    static Standardizer fit(const Eigen::MatrixXd& x);
    Eigen::MatrixXd apply(const Eigen::MatrixXd& x) const;
    Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
};

struct IsoSvmModel {
    IsoSvmOptions options;
    Standardizer input;
    Isomap isomap;
    Standardizer embedded;
    LinearSvm svm;
};

struct Prediction {
    double score = 0.0;
    int label = 0;
};

IsoSvmModel isosvm_train(const Eigen::MatrixXd& x, std::span<const int> labels, const IsoSvmOptions& opt = {});
Prediction isosvm_predict(const IsoSvmModel& model, const Eigen::VectorXd& x);

struct Loocv {
    std::vector<double> scores;  // held-out decision values
    std::vector<int> predicted;
    Roc roc;
    double sensitivity = 0.0;  // at decision threshold 0
    double specificity = 0.0;
    int k_used = 0;
    std::vector<std::string> warnings;
};

/// Leave-one-out IsoSVM. k is clamped to the training-set size minus one
/// (with a warning) when the cohort is too small. Folds run in parallel;
/// `threads` = 0 uses the OpenMP default.
Loocv loocv(const Eigen::MatrixXd& x, std::span<const int> labels, const IsoSvmOptions& opt = {}, int threads = 0);

/// Leave-one-out linear SVM on the (standardised) raw features.
Loocv loocv_linear(const Eigen::MatrixXd& x, std::span<const int> labels, const SvmOptions& opt = {},
                   bool standardize = true, int threads = 0);

}  // namespace mprad::analytics
