#include "dtw/batch.hpp"

#include <omp.h>

#include <stdexcept>

namespace dtw {

void JointDistribution::add(std::size_t transient, std::size_t period, std::uint64_t n) {
  counts_[{transient, period}] += n;
  total_ += n;
}

void JointDistribution::merge(const JointDistribution& other) {
  if (other.mu_ != mu_ || other.rule_ != rule_)
    throw std::invalid_argument("merging distributions from different walk configurations");
  for (const auto& [key, n] : other.counts_) counts_[key] += n;
  total_ += other.total_;
}

std::uint64_t JointDistribution::count(std::size_t transient, std::size_t period) const {
  const auto it = counts_.find({transient, period});
  return it == counts_.end() ? 0 : it->second;
}

Fraction JointDistribution::mass(std::size_t transient, std::size_t period) const {
  if (total_ == 0) throw std::logic_error("mass of an empty distribution");
  return {count(transient, period), total_};
}

namespace {

std::vector<std::size_t> start_codes(const GrayImage& image, const StartSelection& starts) {
  std::vector<std::size_t> codes;
  codes.reserve(starts.points.size());
  for (const auto& p : starts.points) codes.push_back(pixel_code(p, image));
  return codes;
}

} // namespace

JointDistribution run_batch_serial(const GrayImage& image, const StartSelection& starts, const WalkConfig& config) {
  JointDistribution dist(config.mu, config.rule);
  Walker walker(image, config);
  for (auto code : start_codes(image, starts)) dist.add(walker.walk(code));
  return dist;
}

JointDistribution run_batch_parallel(const GrayImage& image, const StartSelection& starts, const WalkConfig& config,
                                     int threads) {
  const auto codes = start_codes(image, starts);
  const auto n = static_cast<std::ptrdiff_t>(codes.size());
  JointDistribution dist(config.mu, config.rule);

#pragma omp parallel num_threads(threads > 0 ? threads : 1)
  {
    JointDistribution local(config.mu, config.rule);
    Walker walker(image, config);
#pragma omp for schedule(dynamic, 512) nowait
    for (std::ptrdiff_t i = 0; i < n; ++i) local.add(walker.walk(codes[static_cast<std::size_t>(i)]));
#pragma omp critical(dtw_batch_merge)
    dist.merge(local);
  }
  return dist;
}

JointDistribution run_batch(const GrayImage& image, const StartSelection& starts, const WalkConfig& config,
                            int threads) {
  return threads <= 1 ? run_batch_serial(image, starts, config) : run_batch_parallel(image, starts, config, threads);
}

int available_threads() noexcept {
  const int n = omp_get_max_threads();
  return n > 0 ? n : 1;
}

} // namespace dtw
