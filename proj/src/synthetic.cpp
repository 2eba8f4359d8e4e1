#include "dtw/synthetic.hpp"

#include "dtw/error.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace dtw {

namespace {

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double gaussian(std::mt19937_64& rng) {
  const double u1 = 1.0 - unit(rng); // (0, 1]
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

std::string two_digits(std::size_t i) { return (i < 10 ? "0" : "") + std::to_string(i); }

} // namespace

TextureParams texture_class_params(std::size_t class_index, std::uint64_t seed) {
  std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ULL + class_index + 1);
  TextureParams p;
  p.sigma_along = 0.6 + 3.0 * unit(rng);
  p.sigma_across = 0.6 + 1.5 * unit(rng);
  p.angle = std::numbers::pi * unit(rng);
  p.mean = 90.0 + 80.0 * unit(rng);
  p.contrast = 15.0 + 45.0 * unit(rng);
  p.wave_amplitude = unit(rng) < 0.5 ? 0.0 : 10.0 + 30.0 * unit(rng);
  p.wave_period = 4.0 + 12.0 * unit(rng);
  return p;
}

GrayImage synth_texture(const TextureParams& params, std::size_t width, std::size_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto radius = static_cast<std::ptrdiff_t>(std::ceil(3.0 * std::max(params.sigma_along, params.sigma_across)));
  const auto pw = width + 2 * static_cast<std::size_t>(radius);
  const auto ph = height + 2 * static_cast<std::size_t>(radius);
  std::vector<double> noise(pw * ph);
  for (auto& v : noise) v = gaussian(rng);

  const double ca = std::cos(params.angle), sa = std::sin(params.angle);
  std::vector<double> kernel;
  for (std::ptrdiff_t dx = -radius; dx <= radius; ++dx) {
    for (std::ptrdiff_t dy = -radius; dy <= radius; ++dy) {
      const double u = ca * static_cast<double>(dx) + sa * static_cast<double>(dy);
      const double v = -sa * static_cast<double>(dx) + ca * static_cast<double>(dy);
      kernel.push_back(std::exp(-0.5 * (u * u / (params.sigma_along * params.sigma_along) +
                                        v * v / (params.sigma_across * params.sigma_across))));
    }
  }

  std::vector<double> field(width * height);
  const auto side = 2 * radius + 1;
  for (std::size_t x = 0; x < height; ++x) {
    for (std::size_t y = 0; y < width; ++y) {
      double acc = 0;
      for (std::ptrdiff_t i = 0; i < side; ++i) {
        const double* row = &noise[(x + static_cast<std::size_t>(i)) * pw + y];
        const double* k = &kernel[static_cast<std::size_t>(i * side)];
        for (std::ptrdiff_t j = 0; j < side; ++j) acc += row[j] * k[j];
      }
      field[x * width + y] = acc;
    }
  }

  double mean = 0, sq = 0;
  for (double v : field) mean += v;
  mean /= static_cast<double>(field.size());
  for (double v : field) sq += (v - mean) * (v - mean);
  const double sd = std::sqrt(sq / static_cast<double>(field.size()));

  const double phase = 2.0 * std::numbers::pi * unit(rng);
  std::vector<std::uint8_t> px(field.size());
  for (std::size_t x = 0; x < height; ++x) {
    for (std::size_t y = 0; y < width; ++y) {
      const double along = ca * static_cast<double>(x) + sa * static_cast<double>(y);
      double v = params.mean + params.contrast * (field[x * width + y] - mean) / (sd > 0 ? sd : 1.0) +
                 params.wave_amplitude * std::sin(2.0 * std::numbers::pi * along / params.wave_period + phase);
      px[x * width + y] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
    }
  }
  return GrayImage(width, height, std::move(px));
}

GrayImage random_image(std::size_t width, std::size_t height, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> px(width * height);
  for (auto& v : px) v = static_cast<std::uint8_t>(rng() >> 56);
  return GrayImage(width, height, std::move(px));
}

LabeledDataset synth_dataset(std::size_t classes, std::size_t samples_per_class, std::size_t size,
                             std::uint64_t seed) {
  LabeledDataset ds;
  for (std::size_t c = 0; c < classes; ++c) {
    ds.classes.push_back("c" + two_digits(c));
    const auto params = texture_class_params(c, seed);
    for (std::size_t s = 0; s < samples_per_class; ++s) {
      const std::uint64_t sample_seed = (seed << 20) ^ (c << 10) ^ s;
      ds.samples.push_back(Sample{c, "s" + two_digits(s), synth_texture(params, size, size, sample_seed)});
    }
  }
  return ds;
}

void write_dataset(const LabeledDataset& dataset, const std::filesystem::path& root) {
  std::error_code ec;
  for (const auto& cls : dataset.classes) {
    std::filesystem::create_directories(root / cls, ec);
    if (ec) throw DataError((root / cls).string() + ": " + ec.message());
  }
  for (const auto& s : dataset.samples) save_pgm(s.image, root / dataset.classes.at(s.class_index) / (s.id + ".pgm"));
}

} // namespace dtw
