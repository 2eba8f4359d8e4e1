#pragma once

#include "dtw/dataset.hpp"
#include "dtw/distribution.hpp"
#include "dtw/sampling.hpp"

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

namespace dtw {

/// What one feature position measures: h(length) of the (rule, mu) distribution.
struct FeatureSlot {
  Rule rule;
  std::size_t mu;
  std::size_t length; // transient + period

  friend bool operator==(const FeatureSlot&, const FeatureSlot&) = default;
};

struct FeatureVector {
  std::vector<Fraction> values;
  std::vector<FeatureSlot> layout;

  [[nodiscard]] std::size_t size() const noexcept { return values.size(); }
  [[nodiscard]] std::vector<double> to_doubles() const;
};

struct ExtractionConfig {
  std::vector<std::size_t> mu_list{0, 1, 2, 3, 4, 5, 6};
  std::vector<Rule> rules{Rule::Min, Rule::Max};
  std::size_t m = 4;
  KSpec k_spec = KSpec::all();

  /// Throws std::invalid_argument when mu_list is empty, unsorted or has
  /// duplicates, rules is empty or repeats, or m == 0.
  void validate() const;
  [[nodiscard]] std::size_t dimension() const noexcept { return mu_list.size() * rules.size() * m; }
  /// Slot for every output position: rules Min before Max, ascending mu,
  /// lengths mu+1 .. mu+m.
  [[nodiscard]] std::vector<FeatureSlot> layout() const;
};

/// Mass of walks whose transient + period equals `length`, attractors only.
Fraction histogram(const JointDistribution& dist, std::size_t length);

/// [h(mu+1), ..., h(mu+m)]. Throws std::invalid_argument if `mu` differs from dist.mu().
std::vector<Fraction> feature_slice(const JointDistribution& dist, std::size_t mu, std::size_t m);

/// Concatenated per-(rule, mu) slices over the starts chosen by config.k_spec.
FeatureVector extract(const GrayImage& image, const ExtractionConfig& config, int threads = 1);

/// One vector per sample, in dataset order. Samples are spread across threads;
/// results do not depend on the thread count.
std::vector<FeatureVector> extract_dataset(const LabeledDataset& dataset, const ExtractionConfig& config,
                                           int threads = 1);

/// "class,sample,f1,...,fD".
std::string feature_csv_header(std::size_t dimension);

/// Header plus one row per sample; values with 9 fractional digits.
/// Throws DataError if a class or sample name contains ',' or a newline.
void write_feature_csv(std::ostream& out, const LabeledDataset& dataset, const std::vector<FeatureVector>& features);

/// "0-6", "0,2,5" or mixtures such as "0-2,5". Sorted, deduplicated.
std::vector<std::size_t> parse_mu_list(std::string_view text);

/// "min", "max", "min,max". Returned in canonical order (min first).
std::vector<Rule> parse_rules(std::string_view text);

} // namespace dtw
