#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

namespace dtw {

/// Zero-based pixel position. `x` is the row, `y` the column, so that the
/// row-major code W*x + y enumerates [0, W*H) exactly once.
struct PixelCoord {
  std::size_t x = 0;
  std::size_t y = 0;

  friend bool operator==(const PixelCoord&, const PixelCoord&) = default;
};

/// Rectangular 8-bit grayscale raster, row-major. Immutable once built.
class GrayImage {
public:
  GrayImage(std::size_t width, std::size_t height, std::vector<std::uint8_t> intensities);

  [[nodiscard]] std::size_t width() const noexcept { return width_; }
  [[nodiscard]] std::size_t height() const noexcept { return height_; }
  [[nodiscard]] std::size_t size() const noexcept { return pixels_.size(); }
  [[nodiscard]] std::span<const std::uint8_t> pixels() const noexcept { return pixels_; }

  [[nodiscard]] bool contains(PixelCoord p) const noexcept { return p.x < height_ && p.y < width_; }
  [[nodiscard]] std::uint8_t at(PixelCoord p) const;
  [[nodiscard]] std::uint8_t at_code(std::size_t code) const noexcept { return pixels_[code]; }
  [[nodiscard]] PixelCoord coord_of(std::size_t code) const noexcept { return {code / width_, code % width_}; }

private:
  std::size_t width_;
  std::size_t height_;
  std::vector<std::uint8_t> pixels_;
};

/// Row-major pixel code W*x + y. Throws std::out_of_range for coordinates outside the image.
std::size_t pixel_code(PixelCoord p, const GrayImage& image);

/// Neighbour directions in tie-break order. Self comes first, then the
/// 8-connected ring clockwise from north.
enum class Direction : std::uint8_t { Self, N, NE, E, SE, S, SW, W, NW };

struct Offset {
  int dx;
  int dy;
};

inline constexpr std::array<Offset, 9> kNeighborOffsets{{
    {0, 0}, {-1, 0}, {-1, 1}, {0, 1}, {1, 1}, {1, 0}, {1, -1}, {0, -1}, {-1, -1},
}};

/// Up to nine coordinates, in-bounds only, kept in `kNeighborOffsets` order.
class Neighborhood {
public:
  void push(PixelCoord p) noexcept { items_[count_++] = p; }
  [[nodiscard]] std::span<const PixelCoord> items() const noexcept { return {items_.data(), count_}; }
  [[nodiscard]] std::size_t size() const noexcept { return count_; }
  [[nodiscard]] auto begin() const noexcept { return items_.begin(); }
  [[nodiscard]] auto end() const noexcept { return items_.begin() + static_cast<std::ptrdiff_t>(count_); }
  const PixelCoord& operator[](std::size_t i) const noexcept { return items_[i]; }

private:
  std::array<PixelCoord, 9> items_{};
  std::size_t count_ = 0;
};

/// Pixels within Euclidean distance sqrt(2) of `p`, the pixel itself included.
Neighborhood neighbors(PixelCoord p, const GrayImage& image);

/// |I(i) - I(j)|.
std::uint8_t weight(PixelCoord i, PixelCoord j, const GrayImage& image);

/// Reads an 8-bit binary PGM (P5) or an 8-bit PNG. Color PNGs are reduced
/// with the integer luma (299R + 587G + 114B + 500) / 1000. Throws DataError.
GrayImage load_image(const std::filesystem::path& path);

/// Writes an 8-bit binary PGM (P5, maxval 255). Throws DataError.
void save_pgm(const GrayImage& image, const std::filesystem::path& path);

} // namespace dtw
