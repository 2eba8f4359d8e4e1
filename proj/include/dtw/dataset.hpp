#pragma once

#include "dtw/image.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace dtw {

struct Sample {
  std::size_t class_index = 0;
  std::string id; // file name without extension
  GrayImage image;
};

/// Class-per-directory image collection. Classes are sorted by name and
/// samples by file name, so ordering is stable across platforms.
struct LabeledDataset {
  std::vector<std::string> classes;
  std::vector<Sample> samples;
};

/// Loads `root/<class>/<sample>.{pgm,png}`. Files with other extensions are
/// ignored. Throws DataError listing every unreadable file.
LabeledDataset load_dataset(const std::filesystem::path& root);

/// Sorted .pgm/.png files directly under `dir`. Throws DataError if none.
std::vector<std::filesystem::path> list_images(const std::filesystem::path& dir);

} // namespace dtw
