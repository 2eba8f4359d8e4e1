#pragma once

#include "dtw/image.hpp"
#include "dtw/sampling.hpp"
#include "dtw/walk.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace dtw {

struct NamedImage {
  std::string id;
  GrayImage image;
};

/// One timed repetition of one (image, spec, mu, rule) cell.
struct BenchRecord {
  std::string image_id;
  std::string k_spec;
  double kept_pct = 0;
  std::size_t mu = 0;
  Rule rule = Rule::Min;
  std::size_t rep = 0;
  double wall_time_ms = 0;
  std::uint64_t walks = 0;

  friend bool operator==(const BenchRecord&, const BenchRecord&) = default;
};

struct BenchSuite {
  std::vector<BenchRecord> records;
  std::size_t repetitions = 0;
  std::string environment;
};

struct BenchOptions {
  std::vector<KSpec> specs;
  std::vector<std::size_t> mu_list{0, 1, 2, 3, 4, 5, 6};
  std::vector<Rule> rules{Rule::Min};
  std::size_t repetitions = 3; // at least 3
  int threads = 1;
};

/// Times the walk stage (run_batch) for every cell. Start selection happens
/// outside the timed region; one untimed warm-up run precedes the repetitions.
/// Throws std::invalid_argument for empty inputs or fewer than 3 repetitions.
BenchSuite run_bench(const std::vector<NamedImage>& images, const BenchOptions& options);

/// Timing summary for one (k_spec, mu) pair across images and rules.
struct BenchAggregate {
  std::string k_spec;
  double kept_pct = 0;    // mean over images
  std::size_t mu = 0;
  double median_ms = 0;   // median over cells of each cell's median repetition
  double mean_ms = 0;     // mean of the same cell medians
  std::uint64_t walks = 0;
  std::size_t cells = 0;
};

/// Rows in first-seen (k_spec, mu) order.
std::vector<BenchAggregate> aggregate(const BenchSuite& suite);

double median(std::vector<double> values);

void write_bench_csv(std::ostream& out, const BenchSuite& suite);
void write_aggregate_csv(std::ostream& out, const std::vector<BenchAggregate>& rows);
void write_bench_json(std::ostream& out, const BenchSuite& suite);
/// Inverse of write_bench_csv. Throws DataError.
std::vector<BenchRecord> read_bench_csv(std::istream& in);

/// Writes `path` (per-repetition CSV, or JSON when `json`) plus a sibling
/// `<stem>_agg.csv`. Throws DataError on unwritable paths.
void emit_report(const BenchSuite& suite, const std::filesystem::path& path, bool json = false);

} // namespace dtw
