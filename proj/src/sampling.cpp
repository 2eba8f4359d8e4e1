#include "dtw/sampling.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace dtw {

namespace {

constexpr std::uint64_t kMaxLcm = std::uint64_t{1} << 62;
constexpr std::size_t kMaxDivisors = 16;

// lcm, or 0 once the result would exceed kMaxLcm.
std::uint64_t bounded_lcm(std::uint64_t a, std::uint64_t b) {
  const auto l = static_cast<unsigned __int128>(a / std::gcd(a, b)) * b;
  return l > kMaxLcm ? 0 : static_cast<std::uint64_t>(l);
}

} // namespace

KSpec::KSpec(std::vector<std::uint64_t> divisors) : divisors_(std::move(divisors)) {
  if (divisors_.empty()) throw std::invalid_argument("k-spec needs at least one divisor (use 'all' for every pixel)");
  std::sort(divisors_.begin(), divisors_.end());
  divisors_.erase(std::unique(divisors_.begin(), divisors_.end()), divisors_.end());
  if (divisors_.size() > kMaxDivisors)
    throw std::invalid_argument("k-spec accepts at most " + std::to_string(kMaxDivisors) + " divisors");
  if (divisors_.front() < 2)
    throw std::invalid_argument("k-spec divisor " + std::to_string(divisors_.front()) + " is below 2");
  std::uint64_t l = 1;
  for (auto d : divisors_) {
    l = bounded_lcm(l, d);
    if (l == 0) throw std::invalid_argument("k-spec divisors have an lcm above 2^62");
  }
}

KSpec KSpec::parse(std::string_view text) {
  if (text == "all" || text == "ALL") return all();
  std::vector<std::uint64_t> divs;
  while (true) {
    const auto comma = text.find(',');
    const auto tok = text.substr(0, comma);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
      throw std::invalid_argument("invalid k-spec token '" + std::string(tok) + "'");
    divs.push_back(v);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return KSpec(std::move(divs));
}

bool KSpec::keeps(std::uint64_t code) const noexcept {
  return std::none_of(divisors_.begin(), divisors_.end(), [code](std::uint64_t k) { return code % k == 0; });
}

std::string KSpec::to_string() const {
  if (is_all()) return "all";
  std::string s;
  for (auto d : divisors_) {
    if (!s.empty()) s += ',';
    s += std::to_string(d);
  }
  return s;
}

StartSelection select_starts(const GrayImage& image, const KSpec& spec) {
  StartSelection sel{spec, {}, {}};
  const auto n = image.size();
  if (spec.is_all()) {
    sel.points.reserve(n);
  } else {
    sel.points.reserve(static_cast<std::size_t>(static_cast<double>(n) * fraction_for_spec(spec).to_double()) + 1);
  }
  for (std::size_t code = 0; code < n; ++code)
    if (spec.keeps(code)) sel.points.push_back(image.coord_of(code));
  sel.kept_fraction = Fraction{sel.points.size(), n};
  return sel;
}

Fraction fraction_for_spec(const KSpec& spec) {
  if (spec.is_all()) return {1, 1};
  const auto& divs = spec.divisors();
  std::uint64_t period = 1;
  for (auto d : divs) period = bounded_lcm(period, d);

  // Count residues in [0, period) divisible by none: sum over subsets S of
  // (-1)^|S| * period / lcm(S).
  __int128 kept = 0;
  const std::size_t subsets = std::size_t{1} << divs.size();
  for (std::size_t mask = 0; mask < subsets; ++mask) {
    std::uint64_t l = 1;
    int bits = 0;
    for (std::size_t i = 0; i < divs.size(); ++i) {
      if (mask & (std::size_t{1} << i)) {
        l = bounded_lcm(l, divs[i]);
        ++bits;
      }
    }
    const __int128 term = period / l;
    kept += (bits % 2 == 0) ? term : -term;
  }
  return Fraction{static_cast<std::uint64_t>(kept), period}.reduced();
}

GrayImage start_mask(const GrayImage& image, const KSpec& spec) {
  std::vector<std::uint8_t> px(image.size());
  for (std::size_t code = 0; code < px.size(); ++code) px[code] = spec.keeps(code) ? 255 : 128;
  return GrayImage(image.width(), image.height(), std::move(px));
}

void export_mask(const GrayImage& image, const KSpec& spec, const std::filesystem::path& path) {
  save_pgm(start_mask(image, spec), path);
}

} // namespace dtw
