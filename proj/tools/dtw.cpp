// dtw: deterministic tourist walk texture features, LDA evaluation and
// start-point subsampling benchmarks.

#include "dtw/batch.hpp"
#include "dtw/bench.hpp"
#include "dtw/cross_validation.hpp"
#include "dtw/error.hpp"
#include "dtw/features.hpp"
#include "dtw/synthetic.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace fs = std::filesystem;

namespace {

enum ExitCode : int { kOk = 0, kUsage = 2, kData = 3, kInternal = 4 };

struct ExtractArgs {
  fs::path input, out;
  std::string k_spec = "all", mu = "0-6", rules = "min,max";
  std::size_t m = 4;
  int threads = dtw::available_threads();
};

struct ClassifyArgs {
  fs::path features, out, confusion;
  std::size_t folds = 10;
  std::uint64_t seed = dtw::kDefaultSeed;
  int threads = 1;
};

struct BenchArgs {
  fs::path input, out;
  std::vector<std::string> k_specs{"all", "10", "5", "2", "2,3"};
  std::string mu = "0-6", rules = "min";
  std::size_t reps = 3;
  int threads = 1;
  bool json = false;
};

struct WalkArgs {
  fs::path image, out;
  std::string start, rule = "min";
  std::size_t mu = 0;
  std::size_t step_cap = 0;
};

struct MaskArgs {
  fs::path image, out;
  std::string k_spec;
};

struct SynthArgs {
  fs::path out;
  std::size_t classes = 10, samples = 16, size = 64;
  std::uint64_t seed = 1;
};

std::ofstream open_out(const fs::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dtw::DataError(path.string() + ": cannot open for writing");
  return out;
}

dtw::PixelCoord parse_coord(const std::string& text) {
  const auto comma = text.find(',');
  if (comma == std::string::npos) throw std::invalid_argument("--start expects 'x,y', got '" + text + "'");
  try {
    std::size_t used = 0;
    const auto x = std::stoull(text.substr(0, comma), &used);
    if (used != comma) throw std::invalid_argument("");
    const auto tail = text.substr(comma + 1);
    const auto y = std::stoull(tail, &used);
    if (used != tail.size()) throw std::invalid_argument("");
    return {x, y};
  } catch (const std::logic_error&) {
    throw std::invalid_argument("--start expects 'x,y', got '" + text + "'");
  }
}

// Each value may itself hold several specs separated by ';'.
std::vector<dtw::KSpec> parse_spec_list(const std::vector<std::string>& values) {
  std::vector<dtw::KSpec> specs;
  for (const auto& v : values) {
    std::string_view rest = v;
    while (true) {
      const auto semi = rest.find(';');
      specs.push_back(dtw::KSpec::parse(rest.substr(0, semi)));
      if (semi == std::string_view::npos) break;
      rest.remove_prefix(semi + 1);
    }
  }
  return specs;
}

int run_extract(const ExtractArgs& a) {
  dtw::ExtractionConfig config;
  config.k_spec = dtw::KSpec::parse(a.k_spec);
  config.mu_list = dtw::parse_mu_list(a.mu);
  config.rules = dtw::parse_rules(a.rules);
  config.m = a.m;
  config.validate();
  if (a.threads < 1) throw std::invalid_argument("--threads must be at least 1");

  const auto dataset = dtw::load_dataset(a.input);
  const auto features = dtw::extract_dataset(dataset, config, a.threads);
  auto out = open_out(a.out);
  dtw::write_feature_csv(out, dataset, features);
  std::cerr << "extracted " << features.size() << " samples x " << config.dimension() << " features from "
            << dataset.classes.size() << " classes -> " << a.out.string() << '\n';
  return kOk;
}

int run_classify(const ClassifyArgs& a) {
  if (a.threads < 1) throw std::invalid_argument("--threads must be at least 1");
  if (a.folds < 2) throw std::invalid_argument("--folds must be at least 2");
  const auto data = dtw::load_feature_csv(a.features);
  const auto report = dtw::cross_validate(data, a.folds, a.seed, a.threads);
  dtw::write_report_text(std::cout, report);
  if (!a.out.empty()) {
    auto out = open_out(a.out);
    dtw::write_report_csv(out, report);
  }
  if (!a.confusion.empty()) {
    auto out = open_out(a.confusion);
    dtw::write_confusion_csv(out, report);
  }
  return kOk;
}

int run_bench(const BenchArgs& a) {
  dtw::BenchOptions options;
  options.specs = parse_spec_list(a.k_specs);
  options.mu_list = dtw::parse_mu_list(a.mu);
  options.rules = dtw::parse_rules(a.rules);
  options.repetitions = a.reps;
  options.threads = a.threads;
  if (a.reps < 3) throw std::invalid_argument("--reps must be at least 3");
  if (a.threads < 1) throw std::invalid_argument("--threads must be at least 1");

  std::vector<dtw::NamedImage> images;
  for (const auto& path : dtw::list_images(a.input))
    images.push_back({path.stem().string(), dtw::load_image(path)});

  const auto suite = dtw::run_bench(images, options);
  dtw::emit_report(suite, a.out, a.json);
  std::cout << "k_spec  kept%   mu  median_ms\n";
  for (const auto& row : dtw::aggregate(suite))
    std::cout << row.k_spec << "  " << row.kept_pct << "  " << row.mu << "  " << row.median_ms << '\n';
  std::cout << suite.environment << '\n';
  return kOk;
}

int run_walk(const WalkArgs& a) {
  const auto start = parse_coord(a.start);
  dtw::WalkConfig config{a.mu, dtw::parse_rule(a.rule), std::nullopt};
  if (a.step_cap > 0) config.step_cap = a.step_cap;
  const auto image = dtw::load_image(a.image);
  if (!image.contains(start))
    throw std::invalid_argument("start (" + std::to_string(start.x) + "," + std::to_string(start.y) +
                                ") outside the " + std::to_string(image.height()) + "x" +
                                std::to_string(image.width()) + " image (rows x columns)");
  const auto text = dtw::format_trajectory(dtw::run_walk(image, start, config, true), image);
  if (a.out.empty()) {
    std::cout << text;
  } else {
    auto out = open_out(a.out);
    out << text;
  }
  return kOk;
}

int run_mask(const MaskArgs& a) {
  const auto spec = dtw::KSpec::parse(a.k_spec);
  const auto image = dtw::load_image(a.image);
  dtw::export_mask(image, spec, a.out);
  const auto sel = dtw::select_starts(image, spec);
  std::cout << sel.points.size() << " of " << image.size() << " pixels kept ("
            << dtw::format_fixed({sel.kept_fraction.num * 100, sel.kept_fraction.den}, 2) << "%)\n";
  return kOk;
}

int run_synth(const SynthArgs& a) {
  if (a.size < 2) throw std::invalid_argument("--size must be at least 2");
  if (a.classes < 1 || a.samples < 1) throw std::invalid_argument("--classes and --samples must be positive");
  dtw::write_dataset(dtw::synth_dataset(a.classes, a.samples, a.size, a.seed), a.out);
  return kOk;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic tourist walk texture features with start-point subsampling"};
  app.require_subcommand(1);

  ExtractArgs ex;
  auto* extract = app.add_subcommand("extract", "Extract walk features for a class-per-directory dataset");
  extract->add_option("--input", ex.input, "Dataset root: <root>/<class>/<sample>.{pgm,png}")->required();
  extract->add_option("--out", ex.out, "Feature CSV to write")->required();
  extract->add_option("--k-spec", ex.k_spec, "Start points: 'all' or divisor list such as '2' or '2,9'")
      ->capture_default_str();
  extract->add_option("--mu", ex.mu, "Memory sizes: range 'a-b' and/or comma list")->capture_default_str();
  extract->add_option("--rules", ex.rules, "Movement rules: min, max or min,max")->capture_default_str();
  extract->add_option("--m", ex.m, "Histogram bins kept per (rule, mu)")->capture_default_str();
  extract->add_option("--threads", ex.threads, "Worker threads")->capture_default_str();

  ClassifyArgs cl;
  auto* classify = app.add_subcommand("classify", "Stratified k-fold LDA evaluation of a feature CSV");
  classify->add_option("--features", cl.features, "Feature CSV from 'extract'")->required();
  classify->add_option("--folds", cl.folds, "Number of folds")->capture_default_str();
  classify->add_option("--seed", cl.seed, "Fold shuffle seed")->capture_default_str();
  classify->add_option("--out", cl.out, "Report CSV (fold,accuracy rows and overall,ccr)");
  classify->add_option("--confusion", cl.confusion, "Confusion matrix CSV");
  classify->add_option("--threads", cl.threads, "Folds evaluated concurrently")->capture_default_str();

  BenchArgs be;
  auto* bench = app.add_subcommand("bench", "Time the walk stage for several start-point specs");
  bench->add_option("--input", be.input, "Directory of .pgm/.png images")->required();
  bench->add_option("--out", be.out, "Per-repetition CSV (or JSON with --json); aggregate goes to <stem>_agg.csv")
      ->required();
  bench->add_option("--k-specs", be.k_specs,
                    "Specs separated by spaces or ';', each 'all' or a divisor list, e.g. all 10 5 2 2,3")
      ->capture_default_str();
  bench->add_option("--mu", be.mu, "Memory sizes")->capture_default_str();
  bench->add_option("--rules", be.rules, "Movement rules")->capture_default_str();
  bench->add_option("--reps", be.reps, "Timed repetitions per cell (>= 3)")->capture_default_str();
  bench->add_option("--threads", be.threads, "Threads inside the timed region")->capture_default_str();
  bench->add_flag("--json", be.json, "Write JSON instead of CSV");

  WalkArgs wa;
  auto* walk = app.add_subcommand("walk", "Trace a single walk");
  walk->add_option("--image", wa.image, "Input image")->required();
  walk->add_option("--start", wa.start, "Start pixel 'row,column'")->required();
  walk->add_option("--mu", wa.mu, "Memory size")->capture_default_str();
  walk->add_option("--rule", wa.rule, "min or max")->capture_default_str();
  walk->add_option("--step-cap", wa.step_cap, "Maximum steps (default: pixel count)");
  walk->add_option("--out", wa.out, "Write the trace here instead of stdout");

  MaskArgs ma;
  auto* mask = app.add_subcommand("mask", "Write a PGM marking selected start points (255) and skipped ones (128)");
  mask->add_option("--image", ma.image, "Input image")->required();
  mask->add_option("--k-spec", ma.k_spec, "Start-point spec")->required();
  mask->add_option("--out", ma.out, "Mask PGM")->required();

  SynthArgs sy;
  auto* synth = app.add_subcommand("synth", "Generate a synthetic correlated-noise texture dataset");
  synth->add_option("--out", sy.out, "Output root directory")->required();
  synth->add_option("--classes", sy.classes, "Number of classes")->capture_default_str();
  synth->add_option("--samples", sy.samples, "Samples per class")->capture_default_str();
  synth->add_option("--size", sy.size, "Image side length")->capture_default_str();
  synth->add_option("--seed", sy.seed, "Generator seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*extract) return run_extract(ex);
    if (*classify) return run_classify(cl);
    if (*bench) return run_bench(be);
    if (*walk) return run_walk(wa);
    if (*mask) return run_mask(ma);
    if (*synth) return run_synth(sy);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const dtw::InvariantError& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternal;
  }
  return kUsage;
}
