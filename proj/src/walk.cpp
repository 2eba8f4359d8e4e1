#include "dtw/walk.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace dtw {

std::string_view to_string(Rule rule) noexcept { return rule == Rule::Min ? "min" : "max"; }

Rule parse_rule(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  if (lower == "min") return Rule::Min;
  if (lower == "max") return Rule::Max;
  throw std::invalid_argument("unknown rule '" + std::string(text) + "' (expected min or max)");
}

std::optional<PixelCoord> next_step(const WalkState& state, const GrayImage& image, const WalkConfig& config) {
  if (!image.contains(state.current)) throw std::out_of_range("next_step: current pixel outside image");
  if (state.memory.size() > config.mu) throw std::invalid_argument("next_step: memory longer than mu");

  const int here = image.at(state.current);
  std::optional<PixelCoord> best;
  int best_w = 0;
  for (const auto& q : neighbors(state.current, image)) {
    if (std::find(state.memory.begin(), state.memory.end(), q) != state.memory.end()) continue;
    const int w = std::abs(here - static_cast<int>(image.at(q)));
    if (!best || (config.rule == Rule::Min ? w < best_w : w > best_w)) {
      best = q;
      best_w = w;
    }
  }
  return best;
}

Walker::Walker(const GrayImage& image, const WalkConfig& config)
    : image_(image),
      config_(config),
      window_(std::max<std::size_t>(config.mu, 1)),
      cap_(config.cap_for(image)),
      last_visit_(image.size(), -1) {
  if (cap_ == 0) throw std::invalid_argument("step cap must be at least 1");
}

void Walker::push(std::size_t code) {
  prev_visit_.push_back(last_visit_[code]);
  last_visit_[code] = static_cast<std::ptrdiff_t>(path_.size());
  path_.push_back(code);
}

std::optional<std::size_t> Walker::choose_next(std::size_t step) const noexcept {
  const auto width = image_.width();
  const auto height = image_.height();
  const auto pixels = image_.pixels();
  const auto cur = path_[step];
  const auto x = static_cast<std::ptrdiff_t>(cur / width);
  const auto y = static_cast<std::ptrdiff_t>(cur % width);
  const int here = pixels[cur];
  const std::size_t remembered = std::min(config_.mu, step + 1);
  const bool minimize = config_.rule == Rule::Min;

  std::optional<std::size_t> best;
  int best_w = 0;
  for (const auto& off : kNeighborOffsets) {
    const auto nx = x + off.dx;
    const auto ny = y + off.dy;
    if (nx < 0 || ny < 0 || nx >= static_cast<std::ptrdiff_t>(height) || ny >= static_cast<std::ptrdiff_t>(width))
      continue;
    const auto q = static_cast<std::size_t>(nx) * width + static_cast<std::size_t>(ny);
    bool forbidden = false;
    for (std::size_t i = 0; i < remembered; ++i) {
      if (path_[step - i] == q) {
        forbidden = true;
        break;
      }
    }
    if (forbidden) continue;
    const int w = std::abs(here - static_cast<int>(pixels[q]));
    if (!best || (minimize ? w < best_w : w > best_w)) {
      best = q;
      best_w = w;
    }
  }
  return best;
}

// States at steps a < b, both ending on the same pixel.
bool Walker::same_state(std::size_t a, std::size_t b) const noexcept {
  const auto len_a = std::min(window_, a + 1);
  const auto len_b = std::min(window_, b + 1);
  if (len_a != len_b) return false;
  for (std::size_t i = 1; i < len_a; ++i)
    if (path_[a - i] != path_[b - i]) return false;
  return true;
}

Trajectory Walker::walk(std::size_t start_code, bool keep_path) {
  path_.clear();
  prev_visit_.clear();

  Trajectory out;
  out.start = image_.coord_of(start_code);
  push(start_code);

  std::size_t step = 0;
  while (true) {
    const auto next = choose_next(step);
    if (!next) {
      out.transient = step;
      out.end = Termination::DeadEnd;
      break;
    }
    push(*next);
    ++step;

    bool repeated = false;
    for (auto j = prev_visit_[step]; j >= 0; j = prev_visit_[static_cast<std::size_t>(j)]) {
      if (same_state(static_cast<std::size_t>(j), step)) {
        out.transient = static_cast<std::size_t>(j);
        out.period = step - static_cast<std::size_t>(j);
        out.end = Termination::Attractor;
        repeated = true;
        break;
      }
    }
    if (repeated) break;
    if (step >= cap_) {
      out.transient = step;
      out.end = Termination::StepCap;
      break;
    }
  }

  if (keep_path) {
    out.path.reserve(path_.size());
    for (auto code : path_) out.path.push_back(image_.coord_of(code));
  }
  for (auto code : path_) last_visit_[code] = -1;
  return out;
}

Trajectory run_walk(const GrayImage& image, PixelCoord start, const WalkConfig& config, bool keep_path) {
  const auto code = pixel_code(start, image);
  Walker walker(image, config);
  return walker.walk(code, keep_path);
}

std::string format_trajectory(const Trajectory& trajectory, const GrayImage& image) {
  std::ostringstream os;
  for (std::size_t i = 0; i < trajectory.path.size(); ++i) {
    const auto& p = trajectory.path[i];
    os << i << ' ' << p.x << ' ' << p.y << ' ' << pixel_code(p, image) << ' ' << static_cast<int>(image.at(p))
       << '\n';
  }
  os << "tau=" << trajectory.transient << " rho=" << trajectory.period << '\n';
  return os.str();
}

} // namespace dtw
