#include "dtw/lda.hpp"

#include "dtw/error.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace dtw {

void FeatureMatrix::validate() const {
  if (classes.size() < 2) throw DataError("need at least two classes, got " + std::to_string(classes.size()));
  for (const auto& r : rows) {
    if (r.values.size() != dimension)
      throw DataError("sample " + r.sample_id + " has " + std::to_string(r.values.size()) + " features, expected " +
                      std::to_string(dimension));
    if (r.class_index >= classes.size()) throw DataError("sample " + r.sample_id + " has an unknown class index");
  }
}

std::vector<std::size_t> FeatureMatrix::class_sizes() const {
  std::vector<std::size_t> sizes(classes.size(), 0);
  for (const auto& r : rows) ++sizes.at(r.class_index);
  return sizes;
}

namespace {

std::vector<std::string_view> split_commas(std::string_view line) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = line.find(',');
    out.push_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

} // namespace

FeatureMatrix read_feature_csv(std::istream& in) {
  FeatureMatrix fm;
  std::map<std::string, std::size_t, std::less<>> class_ids;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_commas(line);
    const auto where = "feature CSV line " + std::to_string(lineno) + ": ";
    if (!header_seen) {
      if (fields.size() < 3 || fields[0] != "class" || fields[1] != "sample")
        throw DataError(where + "expected header 'class,sample,f1,...'");
      fm.dimension = fields.size() - 2;
      header_seen = true;
      continue;
    }
    if (fields.size() != fm.dimension + 2)
      throw DataError(where + "expected " + std::to_string(fm.dimension + 2) + " fields, got " +
                      std::to_string(fields.size()));
    if (fields[0].empty()) throw DataError(where + "empty class name");

    FeatureRow row;
    auto [it, inserted] = class_ids.try_emplace(std::string(fields[0]), fm.classes.size());
    if (inserted) fm.classes.emplace_back(fields[0]);
    row.class_index = it->second;
    row.sample_id = std::string(fields[1]);
    row.values.reserve(fm.dimension);
    for (std::size_t i = 2; i < fields.size(); ++i) {
      const auto f = fields[i];
      double v = 0;
      const auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (f.empty() || ec != std::errc() || ptr != f.data() + f.size() || !std::isfinite(v))
        throw DataError(where + "invalid number '" + std::string(f) + "' in column " + std::to_string(i + 1));
      row.values.push_back(v);
    }
    fm.rows.push_back(std::move(row));
  }
  if (!header_seen) throw DataError("feature CSV is empty");
  return fm;
}

FeatureMatrix load_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open");
  try {
    return read_feature_csv(in);
  } catch (const DataError& e) {
    throw DataError(path.string() + ": " + e.what());
  }
}

LdaModel make_lda_model(Eigen::MatrixXd class_means, Eigen::MatrixXd pooled_precision, Eigen::VectorXd log_priors) {
  LdaModel model;
  model.class_means = std::move(class_means);
  model.pooled_precision = std::move(pooled_precision);
  model.log_priors = std::move(log_priors);
  model.weights = model.class_means * model.pooled_precision;
  model.offsets = model.log_priors;
  for (Eigen::Index c = 0; c < model.class_means.rows(); ++c)
    model.offsets(c) -= 0.5 * model.weights.row(c).dot(model.class_means.row(c));
  return model;
}

LdaModel fit_lda(const FeatureMatrix& train, double ridge) {
  train.validate();
  const auto n_classes = static_cast<Eigen::Index>(train.classes.size());
  const auto dim = static_cast<Eigen::Index>(train.dimension);
  if (dim == 0) throw DataError("cannot fit LDA on zero-dimensional features");

  for (const auto& r : train.rows)
    for (double v : r.values)
      if (!std::isfinite(v)) throw DataError("non-finite feature value in sample '" + r.sample_id + "'");

  const auto sizes = train.class_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] < 2)
      throw DataError("class '" + train.classes[c] + "' has " + std::to_string(sizes[c]) +
                      " training samples; LDA needs at least 2");

  Eigen::MatrixXd means = Eigen::MatrixXd::Zero(n_classes, dim);
  for (const auto& r : train.rows)
    means.row(static_cast<Eigen::Index>(r.class_index)) += Eigen::Map<const Eigen::RowVectorXd>(r.values.data(), dim);
  for (Eigen::Index c = 0; c < n_classes; ++c) means.row(c) /= static_cast<double>(sizes[static_cast<std::size_t>(c)]);

  Eigen::MatrixXd scatter = Eigen::MatrixXd::Zero(dim, dim);
  for (const auto& r : train.rows) {
    const Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(r.values.data(), dim) -
                              means.row(static_cast<Eigen::Index>(r.class_index)).transpose();
    scatter.selfadjointView<Eigen::Lower>().rankUpdate(d);
  }
  Eigen::MatrixXd cov = scatter.selfadjointView<Eigen::Lower>();
  cov /= static_cast<double>(train.rows.size() - train.classes.size());

  const double trace = cov.trace();
  const double shrink = trace > 0.0 ? ridge * trace / static_cast<double>(dim) : ridge;
  cov.diagonal().array() += shrink;

  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  if (llt.info() != Eigen::Success)
    throw InvariantError("regularized pooled covariance is not positive definite");
  Eigen::MatrixXd precision = llt.solve(Eigen::MatrixXd::Identity(dim, dim));
  precision = 0.5 * (precision + precision.transpose()).eval();

  Eigen::VectorXd log_priors(n_classes);
  for (Eigen::Index c = 0; c < n_classes; ++c)
    log_priors(c) = std::log(static_cast<double>(sizes[static_cast<std::size_t>(c)]) /
                             static_cast<double>(train.rows.size()));
  return make_lda_model(std::move(means), std::move(precision), std::move(log_priors));
}

Eigen::VectorXd discriminants(const LdaModel& model, std::span<const double> x) {
  if (x.size() != model.dimension())
    throw std::invalid_argument("feature dimension " + std::to_string(x.size()) + " does not match model dimension " +
                                std::to_string(model.dimension()));
  const Eigen::Map<const Eigen::VectorXd> v(x.data(), static_cast<Eigen::Index>(x.size()));
  return model.weights * v + model.offsets;
}

std::size_t predict(const LdaModel& model, std::span<const double> x) {
  const auto scores = discriminants(model, x);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < scores.size(); ++c)
    if (scores(c) > scores(best)) best = c;
  return static_cast<std::size_t>(best);
}

} // namespace dtw
