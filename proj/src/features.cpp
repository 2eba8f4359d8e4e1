#include "dtw/features.hpp"

#include "dtw/batch.hpp"
#include "dtw/error.hpp"

#include <algorithm>
#include <charconv>
#include <ostream>
#include <stdexcept>

namespace dtw {

std::vector<double> FeatureVector::to_doubles() const {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.to_double());
  return out;
}

void ExtractionConfig::validate() const {
  if (mu_list.empty()) throw std::invalid_argument("mu list is empty");
  for (std::size_t i = 1; i < mu_list.size(); ++i)
    if (mu_list[i] <= mu_list[i - 1]) throw std::invalid_argument("mu list must be strictly ascending");
  if (rules.empty()) throw std::invalid_argument("no movement rule selected");
  if (rules.size() > 2 || (rules.size() == 2 && rules[0] == rules[1]))
    throw std::invalid_argument("movement rules repeat");
  if (m == 0) throw std::invalid_argument("m must be at least 1");
}

namespace {

std::vector<Rule> canonical_rules(const std::vector<Rule>& rules) {
  std::vector<Rule> out;
  for (auto r : {Rule::Min, Rule::Max})
    if (std::find(rules.begin(), rules.end(), r) != rules.end()) out.push_back(r);
  return out;
}

} // namespace

std::vector<FeatureSlot> ExtractionConfig::layout() const {
  std::vector<FeatureSlot> out;
  out.reserve(dimension());
  for (auto rule : canonical_rules(rules))
    for (auto mu : mu_list)
      for (std::size_t i = 1; i <= m; ++i) out.push_back({rule, mu, mu + i});
  return out;
}

Fraction histogram(const JointDistribution& dist, std::size_t length) {
  if (dist.total() == 0) throw std::logic_error("histogram of an empty distribution");
  std::uint64_t n = 0;
  for (const auto& [key, count] : dist.counts()) {
    const auto [transient, period] = key;
    if (period >= 1 && transient + period == length) n += count;
  }
  return {n, dist.total()};
}

std::vector<Fraction> feature_slice(const JointDistribution& dist, std::size_t mu, std::size_t m) {
  if (mu != dist.mu())
    throw std::invalid_argument("feature slice for mu=" + std::to_string(mu) + " requested from a mu=" +
                                std::to_string(dist.mu()) + " distribution");
  std::vector<Fraction> out;
  out.reserve(m);
  for (std::size_t i = 1; i <= m; ++i) out.push_back(histogram(dist, mu + i));
  return out;
}

FeatureVector extract(const GrayImage& image, const ExtractionConfig& config, int threads) {
  config.validate();
  const auto starts = select_starts(image, config.k_spec);
  FeatureVector fv;
  fv.layout = config.layout();
  fv.values.reserve(fv.layout.size());
  for (auto rule : canonical_rules(config.rules)) {
    for (auto mu : config.mu_list) {
      const auto dist = run_batch(image, starts, WalkConfig{mu, rule, std::nullopt}, threads);
      const auto slice = feature_slice(dist, mu, config.m);
      fv.values.insert(fv.values.end(), slice.begin(), slice.end());
    }
  }
  return fv;
}

std::vector<FeatureVector> extract_dataset(const LabeledDataset& dataset, const ExtractionConfig& config,
                                           int threads) {
  config.validate();
  const auto n = static_cast<std::ptrdiff_t>(dataset.samples.size());
  std::vector<FeatureVector> out(dataset.samples.size());
#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto idx = static_cast<std::size_t>(i);
    out[idx] = extract(dataset.samples[idx].image, config, 1);
  }
  return out;
}

std::string feature_csv_header(std::size_t dimension) {
  std::string h = "class,sample";
  for (std::size_t i = 1; i <= dimension; ++i) h += ",f" + std::to_string(i);
  return h;
}

void write_feature_csv(std::ostream& out, const LabeledDataset& dataset, const std::vector<FeatureVector>& features) {
  if (features.size() != dataset.samples.size())
    throw std::invalid_argument("feature count does not match sample count");
  const auto bad = [](const std::string& s) { return s.find_first_of(",\n\r\"") != std::string::npos; };
  const std::size_t dim = features.empty() ? 0 : features.front().size();
  out << feature_csv_header(dim) << '\n';
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto& sample = dataset.samples[i];
    const auto& cls = dataset.classes.at(sample.class_index);
    if (bad(cls) || bad(sample.id)) throw DataError("class or sample name not CSV-safe: " + cls + "/" + sample.id);
    if (features[i].size() != dim) throw std::invalid_argument("feature vectors differ in length");
    out << cls << ',' << sample.id;
    for (const auto& v : features[i].values) out << ',' << format_fixed(v, 9);
    out << '\n';
  }
}

namespace {

std::size_t parse_uint(std::string_view tok, std::string_view whole) {
  std::size_t v = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
    throw std::invalid_argument("invalid memory list '" + std::string(whole) + "'");
  return v;
}

} // namespace

std::vector<std::size_t> parse_mu_list(std::string_view text) {
  std::vector<std::size_t> out;
  const auto whole = text;
  while (true) {
    const auto comma = text.find(',');
    const auto item = text.substr(0, comma);
    const auto dash = item.find('-');
    if (dash == std::string_view::npos) {
      out.push_back(parse_uint(item, whole));
    } else {
      const auto lo = parse_uint(item.substr(0, dash), whole);
      const auto hi = parse_uint(item.substr(dash + 1), whole);
      if (hi < lo) throw std::invalid_argument("descending memory range '" + std::string(item) + "'");
      for (auto v = lo; v <= hi; ++v) out.push_back(v);
    }
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<Rule> parse_rules(std::string_view text) {
  std::vector<Rule> rules;
  while (true) {
    const auto comma = text.find(',');
    rules.push_back(parse_rule(text.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return canonical_rules(rules);
}

} // namespace dtw
