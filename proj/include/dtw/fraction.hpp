#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace dtw {

/// Non-negative exact ratio of two counts. Not reduced unless asked.
struct Fraction {
  std::uint64_t num = 0;
  std::uint64_t den = 1;

  [[nodiscard]] double to_double() const noexcept {
    return static_cast<double>(num) / static_cast<double>(den);
  }

  [[nodiscard]] Fraction reduced() const noexcept {
    const auto g = std::gcd(num, den);
    return g == 0 ? *this : Fraction{num / g, den / g};
  }

  // Cross-multiplied comparison; exact for any 64-bit operands.
  friend bool operator==(const Fraction& a, const Fraction& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den ==
           static_cast<unsigned __int128>(b.num) * a.den;
  }
  friend bool operator<(const Fraction& a, const Fraction& b) noexcept {
    return static_cast<unsigned __int128>(a.num) * b.den <
           static_cast<unsigned __int128>(b.num) * a.den;
  }
};

/// Decimal rendering with `digits` fractional digits, rounded half up using
/// integer arithmetic only, so output is identical on every platform.
inline std::string format_fixed(const Fraction& f, int digits = 9) {
  if (f.den == 0) throw std::invalid_argument("format_fixed: zero denominator");
  unsigned __int128 scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  const unsigned __int128 scaled =
      (static_cast<unsigned __int128>(f.num) * scale * 2 + f.den) / (2 * static_cast<unsigned __int128>(f.den));
  auto whole = static_cast<std::uint64_t>(scaled / scale);
  auto frac = scaled % scale;
  std::string out = std::to_string(whole);
  if (digits > 0) {
    std::string tail(static_cast<std::size_t>(digits), '0');
    for (int i = digits - 1; i >= 0; --i) {
      tail[static_cast<std::size_t>(i)] = static_cast<char>('0' + static_cast<int>(frac % 10));
      frac /= 10;
    }
    out += '.';
    out += tail;
  }
  return out;
}

} // namespace dtw
