#pragma once

#include "dtw/image.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace dtw {

/// Movement rule: step to the admissible neighbour with the smallest (Min) or
/// largest (Max) intensity difference.
enum class Rule : std::uint8_t { Min, Max };

std::string_view to_string(Rule rule) noexcept;
/// Accepts "min" / "max" in any case. Throws std::invalid_argument.
Rule parse_rule(std::string_view text);

struct WalkConfig {
  std::size_t mu = 0;                   // memory window, current pixel included
  Rule rule = Rule::Min;
  std::optional<std::size_t> step_cap;  // defaults to W*H of the walked image

  [[nodiscard]] std::size_t cap_for(const GrayImage& image) const noexcept {
    return step_cap.value_or(image.size());
  }
};

enum class Termination : std::uint8_t { Attractor, StepCap, DeadEnd };

/// Outcome of one walk. period == 0 means no attractor was found; transient
/// then holds the number of steps taken.
struct Trajectory {
  PixelCoord start;
  std::size_t transient = 0;
  std::size_t period = 0;
  Termination end = Termination::Attractor;
  std::vector<PixelCoord> path; // filled only on request
};

/// Walker position plus the pixels it may not revisit, most recent first.
/// memory[0] == current whenever mu >= 1.
struct WalkState {
  PixelCoord current;
  std::vector<PixelCoord> memory;
};

/// Next pixel under `config`, or nullopt when every neighbour is in memory.
/// Candidates are scanned self first, then clockwise from north; the first
/// extreme weight wins.
std::optional<PixelCoord> next_step(const WalkState& state, const GrayImage& image, const WalkConfig& config);

/// Reusable per-thread walk kernel for one image. Keeps the scratch buffers
/// alive between walks so batch runs do not reallocate.
///
/// The attractor is the first repeat of the walker state (current pixel plus
/// memory window). Earlier visits are chained per pixel, so only visits to
/// the same pixel are ever compared.
class Walker {
public:
  Walker(const GrayImage& image, const WalkConfig& config);

  /// `start_code` must be < image.size().
  Trajectory walk(std::size_t start_code, bool keep_path = false);

private:
  std::optional<std::size_t> choose_next(std::size_t step) const noexcept;
  bool same_state(std::size_t a, std::size_t b) const noexcept;
  void push(std::size_t code);

  const GrayImage& image_;
  WalkConfig config_;
  std::size_t window_;     // max(mu, 1)
  std::size_t cap_;
  std::vector<std::size_t> path_;
  std::vector<std::ptrdiff_t> prev_visit_; // per step: previous step at same pixel, or -1
  std::vector<std::ptrdiff_t> last_visit_; // per pixel: latest step, or -1
};

/// Single walk from `start`. Throws std::out_of_range for a start outside the image.
Trajectory run_walk(const GrayImage& image, PixelCoord start, const WalkConfig& config, bool keep_path = false);

/// Text dump: `step x y code intensity` per visited pixel, then `tau=<t> rho=<r>`.
/// Requires a trajectory produced with keep_path.
std::string format_trajectory(const Trajectory& trajectory, const GrayImage& image);

} // namespace dtw
