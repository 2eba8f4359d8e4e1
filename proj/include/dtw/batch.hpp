#pragma once

#include "dtw/distribution.hpp"
#include "dtw/sampling.hpp"

namespace dtw {

/// Walks from every start in `starts` and accumulates the joint distribution.
/// threads <= 1 runs `run_batch_serial`; otherwise `run_batch_parallel`.
JointDistribution run_batch(const GrayImage& image, const StartSelection& starts, const WalkConfig& config,
                            int threads = 1);

/// Reference kernel: one Walker, starts in ascending code order.
JointDistribution run_batch_serial(const GrayImage& image, const StartSelection& starts, const WalkConfig& config);

/// OpenMP kernel: per-thread Walker and partial counts, merged at the end.
/// Produces exactly the serial result for any thread count.
JointDistribution run_batch_parallel(const GrayImage& image, const StartSelection& starts, const WalkConfig& config,
                                     int threads);

/// omp_get_max_threads(), at least 1.
int available_threads() noexcept;

} // namespace dtw
