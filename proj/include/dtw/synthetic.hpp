#pragma once

#include "dtw/dataset.hpp"

#include <cstdint>
#include <filesystem>

namespace dtw {

/// Oriented correlated-noise texture, optionally with a sinusoidal grating.
struct TextureParams {
  double sigma_along = 1.0;  // Gaussian smoothing along `angle`, pixels
  double sigma_across = 1.0; // and across it
  double angle = 0.0;        // radians
  double mean = 128.0;
  double contrast = 40.0;    // std-dev of the final intensities before clamping
  double wave_amplitude = 0.0;
  double wave_period = 8.0;  // pixels, measured along `angle`
};

/// Deterministic parameters for class `class_index` of a family drawn from `seed`.
TextureParams texture_class_params(std::size_t class_index, std::uint64_t seed);

/// One realization of `params`. Identical seeds give identical images.
GrayImage synth_texture(const TextureParams& params, std::size_t width, std::size_t height, std::uint64_t seed);

/// Uniform random intensities.
GrayImage random_image(std::size_t width, std::size_t height, std::uint64_t seed);

/// `classes` x `samples_per_class` square textures named c00, c01, ... / s00, s01, ...
LabeledDataset synth_dataset(std::size_t classes, std::size_t samples_per_class, std::size_t size,
                             std::uint64_t seed);

/// Writes `root/<class>/<sample>.pgm`, creating directories. Throws DataError.
void write_dataset(const LabeledDataset& dataset, const std::filesystem::path& root);

} // namespace dtw
