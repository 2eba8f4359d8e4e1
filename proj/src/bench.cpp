#include "dtw/bench.hpp"

#include "dtw/batch.hpp"
#include "dtw/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <map>
#include <numeric>
#include <ostream>
#include <thread>

namespace dtw {

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::string environment_note(int threads) {
  std::string note = "threads=" + std::to_string(threads) +
                     " hardware_concurrency=" + std::to_string(std::thread::hardware_concurrency());
#if defined(__VERSION__)
  note += " compiler=" __VERSION__;
#endif
  return note;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  return out;
}

} // namespace

double median(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty set");
  std::sort(values.begin(), values.end());
  const auto n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

BenchSuite run_bench(const std::vector<NamedImage>& images, const BenchOptions& options) {
  if (images.empty()) throw std::invalid_argument("benchmark needs at least one image");
  if (options.specs.empty()) throw std::invalid_argument("benchmark needs at least one k-spec");
  if (options.mu_list.empty()) throw std::invalid_argument("benchmark needs at least one memory size");
  if (options.rules.empty()) throw std::invalid_argument("benchmark needs at least one rule");
  if (options.repetitions < 3) throw std::invalid_argument("benchmark needs at least 3 repetitions");

  using clock = std::chrono::steady_clock;
  BenchSuite suite;
  suite.repetitions = options.repetitions;
  suite.environment = environment_note(options.threads);

  for (const auto& img : images) {
    for (const auto& spec : options.specs) {
      const auto starts = select_starts(img.image, spec);
      const double kept_pct = 100.0 * starts.kept_fraction.to_double();
      for (auto mu : options.mu_list) {
        for (auto rule : options.rules) {
          const WalkConfig config{mu, rule, std::nullopt};
          auto warm = run_batch(img.image, starts, config, options.threads);
          for (std::size_t rep = 0; rep < options.repetitions; ++rep) {
            const auto t0 = clock::now();
            const auto dist = run_batch(img.image, starts, config, options.threads);
            const auto t1 = clock::now();
            if (dist.total() != starts.points.size()) throw InvariantError("benchmark walk count mismatch");
            suite.records.push_back(BenchRecord{img.id, spec.to_string(), kept_pct, mu, rule, rep,
                                                std::chrono::duration<double, std::milli>(t1 - t0).count(),
                                                dist.total()});
          }
        }
      }
    }
  }
  return suite;
}

std::vector<BenchAggregate> aggregate(const BenchSuite& suite) {
  struct Cell {
    std::vector<double> times;
    double kept_pct;
    std::uint64_t walks;
  };
  // (k_spec, mu) -> (image, rule) -> repetitions
  std::vector<std::pair<std::string, std::size_t>> order;
  std::map<std::pair<std::string, std::size_t>, std::map<std::pair<std::string, Rule>, Cell>> groups;
  for (const auto& r : suite.records) {
    const auto key = std::make_pair(r.k_spec, r.mu);
    auto [it, inserted] = groups.try_emplace(key);
    if (inserted) order.push_back(key);
    auto& cell = it->second[{r.image_id, r.rule}];
    cell.times.push_back(r.wall_time_ms);
    cell.kept_pct = r.kept_pct;
    cell.walks = r.walks;
  }

  std::vector<BenchAggregate> out;
  for (const auto& key : order) {
    const auto& cells = groups.at(key);
    std::vector<double> medians;
    double pct = 0;
    std::uint64_t walks = 0;
    for (const auto& [id, cell] : cells) {
      medians.push_back(median(cell.times));
      pct += cell.kept_pct;
      walks += cell.walks;
    }
    BenchAggregate agg;
    agg.k_spec = key.first;
    agg.mu = key.second;
    agg.cells = cells.size();
    agg.kept_pct = pct / static_cast<double>(cells.size());
    agg.walks = walks;
    agg.median_ms = median(medians);
    agg.mean_ms = std::accumulate(medians.begin(), medians.end(), 0.0) / static_cast<double>(medians.size());
    out.push_back(std::move(agg));
  }
  return out;
}

void write_bench_csv(std::ostream& out, const BenchSuite& suite) {
  out << "image,k_spec,kept_pct,mu,rule,rep,wall_time_ms,walks\n";
  for (const auto& r : suite.records) {
    out << r.image_id << ",\"" << r.k_spec << "\"," << shortest(r.kept_pct) << ',' << r.mu << ',' << to_string(r.rule)
        << ',' << r.rep << ',' << shortest(r.wall_time_ms) << ',' << r.walks << '\n';
  }
}

void write_aggregate_csv(std::ostream& out, const std::vector<BenchAggregate>& rows) {
  out << "k_spec,kept_pct,mu,median_ms,mean_ms,walks,cells\n";
  for (const auto& a : rows)
    out << '"' << a.k_spec << "\"," << shortest(a.kept_pct) << ',' << a.mu << ',' << shortest(a.median_ms) << ','
        << shortest(a.mean_ms) << ',' << a.walks << ',' << a.cells << '\n';
}

void write_bench_json(std::ostream& out, const BenchSuite& suite) {
  nlohmann::json j;
  j["repetitions"] = suite.repetitions;
  j["environment"] = suite.environment;
  auto& recs = j["records"] = nlohmann::json::array();
  for (const auto& r : suite.records)
    recs.push_back({{"image", r.image_id},
                    {"k_spec", r.k_spec},
                    {"kept_pct", r.kept_pct},
                    {"mu", r.mu},
                    {"rule", std::string(to_string(r.rule))},
                    {"rep", r.rep},
                    {"wall_time_ms", r.wall_time_ms},
                    {"walks", r.walks}});
  auto& agg = j["aggregate"] = nlohmann::json::array();
  for (const auto& a : aggregate(suite))
    agg.push_back({{"k_spec", a.k_spec},
                   {"kept_pct", a.kept_pct},
                   {"mu", a.mu},
                   {"median_ms", a.median_ms},
                   {"mean_ms", a.mean_ms},
                   {"walks", a.walks},
                   {"cells", a.cells}});
  out << j.dump(2) << '\n';
}

namespace {

// Splits one CSV line, honouring double-quoted fields (k-specs contain commas).
std::vector<std::string> csv_fields(const std::string& line) {
  std::vector<std::string> out(1);
  bool quoted = false;
  for (char c : line) {
    if (c == '"') {
      quoted = !quoted;
    } else if (c == ',' && !quoted) {
      out.emplace_back();
    } else {
      out.back().push_back(c);
    }
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s, std::size_t lineno) {
  T v{};
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
    throw DataError("bench CSV line " + std::to_string(lineno) + ": invalid number '" + s + "'");
  return v;
}

} // namespace

std::vector<BenchRecord> read_bench_csv(std::istream& in) {
  std::vector<BenchRecord> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (lineno == 1 || line.empty()) continue;
    const auto f = csv_fields(line);
    if (f.size() != 8) throw DataError("bench CSV line " + std::to_string(lineno) + ": expected 8 fields");
    BenchRecord r;
    r.image_id = f[0];
    r.k_spec = f[1];
    r.kept_pct = parse_number<double>(f[2], lineno);
    r.mu = parse_number<std::size_t>(f[3], lineno);
    r.rule = parse_rule(f[4]);
    r.rep = parse_number<std::size_t>(f[5], lineno);
    r.wall_time_ms = parse_number<double>(f[6], lineno);
    r.walks = parse_number<std::uint64_t>(f[7], lineno);
    out.push_back(std::move(r));
  }
  return out;
}

void emit_report(const BenchSuite& suite, const std::filesystem::path& path, bool json) {
  if (suite.records.empty()) throw std::invalid_argument("empty benchmark suite");
  {
    auto out = open_out(path);
    if (json)
      write_bench_json(out, suite);
    else
      write_bench_csv(out, suite);
    if (!out) throw DataError(path.string() + ": write failed");
  }
  auto agg_path = path;
  agg_path.replace_filename(path.stem().string() + "_agg.csv");
  auto out = open_out(agg_path);
  write_aggregate_csv(out, aggregate(suite));
  if (!out) throw DataError(agg_path.string() + ": write failed");
}

} // namespace dtw
