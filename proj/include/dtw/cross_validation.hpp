#pragma once

#include "dtw/fraction.hpp"
#include "dtw/lda.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace dtw {

struct CvReport {
  std::vector<std::string> classes;
  std::vector<Fraction> fold_accuracies;               // correct / tested, per fold
  Fraction ccr;                                        // total correct / total samples
  std::vector<std::vector<std::uint64_t>> confusion;   // [true][predicted]
  std::size_t folds = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const CvReport&, const CvReport&) = default;
};

inline constexpr std::uint64_t kDefaultSeed = 42;

/// Fold index for every row. Each class is shuffled with a seeded
/// Fisher-Yates and dealt round-robin, continuing where the previous class
/// stopped, so per-class and total fold sizes differ by at most one.
/// Throws DataError naming any class with fewer rows than folds.
std::vector<std::size_t> stratified_folds(const FeatureMatrix& data, std::size_t folds, std::uint64_t seed);

/// Stratified k-fold LDA evaluation. Folds run concurrently when threads > 1;
/// the report is identical either way.
CvReport cross_validate(const FeatureMatrix& data, std::size_t folds = 10, std::uint64_t seed = kDefaultSeed,
                        int threads = 1);

/// Percentage with two decimals, e.g. "89.72".
std::string format_ccr_percent(const CvReport& report);

void write_report_text(std::ostream& out, const CvReport& report);
/// `fold,accuracy` rows then `overall,<ccr>`.
void write_report_csv(std::ostream& out, const CvReport& report);
/// Header `true\predicted,<classes...>`, one row per true class.
void write_confusion_csv(std::ostream& out, const CvReport& report);

} // namespace dtw
