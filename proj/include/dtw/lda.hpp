#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

namespace dtw {

struct FeatureRow {
  std::size_t class_index = 0;
  std::string sample_id;
  std::vector<double> values;
};

/// Labelled feature rows sharing one dimension. Class indices are dense and
/// index into `classes`.
struct FeatureMatrix {
  std::vector<std::string> classes;
  std::vector<FeatureRow> rows;
  std::size_t dimension = 0;

  /// Throws DataError on ragged rows, out-of-range labels, or fewer than two classes.
  void validate() const;
  [[nodiscard]] std::vector<std::size_t> class_sizes() const;
};

/// Parses the feature CSV (`class,sample,f1..fD`). Classes are indexed in
/// order of first appearance. Throws DataError citing the offending line.
FeatureMatrix read_feature_csv(std::istream& in);
FeatureMatrix load_feature_csv(const std::filesystem::path& path);

/// Shared-covariance Gaussian discriminant.
struct LdaModel {
  Eigen::MatrixXd class_means;      // C x D
  Eigen::MatrixXd pooled_precision; // D x D, inverse of the regularized pooled covariance
  Eigen::VectorXd log_priors;       // C

  // Cached linear form: score_c(x) = weights.row(c) . x + offsets(c)
  Eigen::MatrixXd weights;          // C x D, means * precision
  Eigen::VectorXd offsets;          // C

  [[nodiscard]] std::size_t dimension() const noexcept { return static_cast<std::size_t>(class_means.cols()); }
  [[nodiscard]] std::size_t class_count() const noexcept { return static_cast<std::size_t>(class_means.rows()); }
};

inline constexpr double kDefaultRidge = 1e-4;

/// Pooled covariance S = scatter / (n - C), regularized as S + ridge * (tr(S)/D) * I
/// (ridge * I when tr(S) == 0). Every class needs at least two rows.
/// Throws DataError for degenerate input and InvariantError if the
/// regularized covariance is still not positive definite.
LdaModel fit_lda(const FeatureMatrix& train, double ridge = kDefaultRidge);

/// Builds the cached linear form from means, precision and priors.
LdaModel make_lda_model(Eigen::MatrixXd class_means, Eigen::MatrixXd pooled_precision, Eigen::VectorXd log_priors);

/// Per-class discriminant scores.
Eigen::VectorXd discriminants(const LdaModel& model, std::span<const double> x);

/// argmax of the discriminants; ties go to the lowest class index.
std::size_t predict(const LdaModel& model, std::span<const double> x);

} // namespace dtw
