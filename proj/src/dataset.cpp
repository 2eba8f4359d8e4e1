#include "dtw/dataset.hpp"

#include "dtw/error.hpp"

#include <algorithm>
#include <cctype>

namespace fs = std::filesystem;

namespace dtw {

namespace {

bool is_image_file(const fs::path& p) {
  auto ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".pgm" || ext == ".png";
}

std::vector<fs::path> sorted_image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });
  return files;
}

} // namespace

std::vector<fs::path> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw DataError(dir.string() + ": not a directory");
  auto files = sorted_image_files(dir);
  if (files.empty()) throw DataError(dir.string() + ": no .pgm or .png images");
  return files;
}

LabeledDataset load_dataset(const fs::path& root) {
  if (!fs::is_directory(root)) throw DataError(root.string() + ": not a directory");

  std::vector<fs::path> class_dirs;
  for (const auto& entry : fs::directory_iterator(root))
    if (entry.is_directory()) class_dirs.push_back(entry.path());
  if (class_dirs.empty()) throw DataError(root.string() + ": no class directories");
  std::sort(class_dirs.begin(), class_dirs.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename().string() < b.filename().string(); });

  LabeledDataset ds;
  std::string failures;
  for (const auto& dir : class_dirs) {
    const auto files = sorted_image_files(dir);
    if (files.empty()) throw DataError(dir.string() + ": empty class directory");
    const auto class_index = ds.classes.size();
    ds.classes.push_back(dir.filename().string());
    for (const auto& file : files) {
      try {
        ds.samples.push_back(Sample{class_index, file.stem().string(), load_image(file)});
      } catch (const std::exception& e) {
        failures += "\n  ";
        failures += e.what();
      }
    }
  }
  if (!failures.empty()) throw DataError("unreadable images:" + failures);
  return ds;
}

} // namespace dtw
