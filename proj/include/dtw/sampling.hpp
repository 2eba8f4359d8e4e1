#pragma once

#include "dtw/fraction.hpp"
#include "dtw/image.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace dtw {

/// Set of divisors selecting walk start points. A pixel is kept when its code
/// is divisible by none of the divisors. An empty set means every pixel.
class KSpec {
public:
  /// Every pixel is a start point.
  static KSpec all() { return KSpec(); }

  /// Throws std::invalid_argument for an empty set, a divisor below 2, more
  /// than 16 divisors, or a divisor set whose lcm exceeds 2^62.
  explicit KSpec(std::vector<std::uint64_t> divisors);

  /// `all`, a single divisor `5`, or a comma list `2,9`.
  static KSpec parse(std::string_view text);

  [[nodiscard]] bool is_all() const noexcept { return divisors_.empty(); }
  [[nodiscard]] const std::vector<std::uint64_t>& divisors() const noexcept { return divisors_; }
  [[nodiscard]] bool keeps(std::uint64_t code) const noexcept;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const KSpec&, const KSpec&) = default;

private:
  KSpec() = default;
  std::vector<std::uint64_t> divisors_; // sorted, unique
};

struct StartSelection {
  KSpec spec;
  std::vector<PixelCoord> points; // ascending pixel code
  Fraction kept_fraction;          // |points| / (W*H)
};

StartSelection select_starts(const GrayImage& image, const KSpec& spec);

/// Limit of the kept fraction over code ranges that are multiples of
/// lcm(divisors), by inclusion-exclusion. Reduced.
Fraction fraction_for_spec(const KSpec& spec);

/// Same-size mask: 255 where a walk starts, 128 where the pixel is skipped.
GrayImage start_mask(const GrayImage& image, const KSpec& spec);

/// Writes `start_mask` as PGM. Throws DataError when the path is unwritable.
void export_mask(const GrayImage& image, const KSpec& spec, const std::filesystem::path& path);

} // namespace dtw
