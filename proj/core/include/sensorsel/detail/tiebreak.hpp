#pragma once

#include <cstddef>
#include <span>

namespace sensorsel::detail {

/// Greedy argmax with the repo-wide tie rule: the lowest candidate index
/// whose score falls within a small noise band of the maximum. The band,
/// 1e-8·best + 1e-12·scale, matches the accuracy to which the incremental
/// and the direct evaluation routes are required to agree, so scores
/// closer than that are indistinguishable and both routes break the tie
/// the same way (scale is the natural objective magnitude, ‖Y‖_F² for the
/// selection objective). candidates[i] is scored by scores[i]; candidates
/// must be in ascending index order. Returns the position in `candidates`
/// of the winner, or −1 when empty.
inline int argmax_lowest_tie(std::span<const int> candidates, std::span<const double> scores,
                             double scale) {
  if (candidates.empty()) return -1;
  double best = scores[0];
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > best) best = scores[i];
  }
  const double band = 1e-8 * (best > 0.0 ? best : -best) + 1e-12 * scale;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i] >= best - band) return static_cast<int>(i);
  }
  return 0;
}

}  // namespace sensorsel::detail
