#include "dtw/cross_validation.hpp"

#include "dtw/error.hpp"

#include <algorithm>
#include <iomanip>
#include <limits>
#include <ostream>
#include <random>

namespace dtw {

namespace {

// Uniform draw in [0, bound) by rejection; mt19937_64 output is fixed by the
// standard, std::uniform_int_distribution is not.
std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

} // namespace

std::vector<std::size_t> stratified_folds(const FeatureMatrix& data, std::size_t folds, std::uint64_t seed) {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  const auto sizes = data.class_sizes();
  for (std::size_t c = 0; c < sizes.size(); ++c)
    if (sizes[c] < folds)
      throw DataError("class '" + data.classes[c] + "' has " + std::to_string(sizes[c]) + " samples, fewer than " +
                      std::to_string(folds) + " folds");

  std::vector<std::vector<std::size_t>> members(sizes.size());
  for (std::size_t i = 0; i < data.rows.size(); ++i) members[data.rows[i].class_index].push_back(i);

  std::mt19937_64 rng(seed);
  std::vector<std::size_t> assignment(data.rows.size(), 0);
  std::size_t next_fold = 0;
  for (auto& idx : members) {
    for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[uniform_below(rng, i)]);
    for (auto row : idx) {
      assignment[row] = next_fold;
      next_fold = (next_fold + 1) % folds;
    }
  }
  return assignment;
}

CvReport cross_validate(const FeatureMatrix& data, std::size_t folds, std::uint64_t seed, int threads) {
  data.validate();
  const auto assignment = stratified_folds(data, folds, seed);
  const auto n_classes = data.classes.size();

  std::vector<std::vector<std::pair<std::size_t, std::size_t>>> outcomes(folds); // (true, predicted)
  std::vector<std::string> errors(folds);

#pragma omp parallel for schedule(dynamic, 1) num_threads(threads > 0 ? threads : 1)
  for (std::ptrdiff_t f = 0; f < static_cast<std::ptrdiff_t>(folds); ++f) {
    const auto fold = static_cast<std::size_t>(f);
    try {
      FeatureMatrix train{data.classes, {}, data.dimension};
      std::vector<const FeatureRow*> test;
      for (std::size_t i = 0; i < data.rows.size(); ++i) {
        if (assignment[i] == fold)
          test.push_back(&data.rows[i]);
        else
          train.rows.push_back(data.rows[i]);
      }
      const auto model = fit_lda(train);
      for (const auto* row : test) outcomes[fold].emplace_back(row->class_index, predict(model, row->values));
    } catch (const std::exception& e) {
      errors[fold] = e.what();
    }
  }
  for (std::size_t f = 0; f < folds; ++f)
    if (!errors[f].empty()) throw DataError("fold " + std::to_string(f + 1) + ": " + errors[f]);

  CvReport report;
  report.classes = data.classes;
  report.folds = folds;
  report.seed = seed;
  report.confusion.assign(n_classes, std::vector<std::uint64_t>(n_classes, 0));
  std::uint64_t correct_total = 0;
  for (const auto& fold : outcomes) {
    std::uint64_t correct = 0;
    for (const auto& [truth, pred] : fold) {
      ++report.confusion[truth][pred];
      if (truth == pred) ++correct;
    }
    report.fold_accuracies.push_back({correct, fold.size()});
    correct_total += correct;
  }
  report.ccr = {correct_total, data.rows.size()};
  return report;
}

std::string format_ccr_percent(const CvReport& report) {
  return format_fixed(Fraction{report.ccr.num * 100, report.ccr.den}, 2);
}

void write_report_text(std::ostream& out, const CvReport& report) {
  out << "fold  accuracy\n";
  for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f) {
    const auto& a = report.fold_accuracies[f];
    out << std::setw(4) << (f + 1) << "  " << format_fixed({a.num * 100, a.den}, 2) << "%  (" << a.num << "/" << a.den
        << ")\n";
  }
  out << "seed " << report.seed << ", " << report.folds << " folds, " << report.classes.size() << " classes\n";
  out << "CCR " << format_ccr_percent(report) << '\n';
}

void write_report_csv(std::ostream& out, const CvReport& report) {
  out << "fold,accuracy\n";
  for (std::size_t f = 0; f < report.fold_accuracies.size(); ++f)
    out << (f + 1) << ',' << format_fixed(report.fold_accuracies[f], 9) << '\n';
  out << "overall," << format_fixed(report.ccr, 9) << '\n';
}

void write_confusion_csv(std::ostream& out, const CvReport& report) {
  out << "true\\predicted";
  for (const auto& c : report.classes) out << ',' << c;
  out << '\n';
  for (std::size_t t = 0; t < report.confusion.size(); ++t) {
    out << report.classes[t];
    for (auto n : report.confusion[t]) out << ',' << n;
    out << '\n';
  }
}

} // namespace dtw
