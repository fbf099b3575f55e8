#pragma once

#include "koreg/model.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace koreg {

/// Strictly positive W values in ascending order with their covariate indices.
struct SortedPositiveW {
  std::vector<double> values;
  std::vector<Eigen::Index> indices;

  static SortedPositiveW from(const Vector& W);

  std::size_t size() const noexcept { return values.size(); }
  /// e_j = values[j+1] - values[j]
  std::vector<double> gaps() const;
};

enum class ThresholdMethod { WStats, Gaps, Manual };
enum class ThresholdStatus {
  Ok,
  Empty,       // no positive statistic: nothing can be selected
  Degenerate,  // one or two positive statistics: all of them kept
};

std::string to_string(ThresholdMethod m);
std::string to_string(ThresholdStatus s);
ThresholdMethod parse_threshold_method(const std::string& name);

struct ThresholdResult {
  double s = 0.0;  // +inf when status == Empty
  ThresholdMethod method = ThresholdMethod::WStats;
  ThresholdStatus status = ThresholdStatus::Ok;
  std::optional<double> cusum_candidate;
  std::optional<double> dp_candidate;
};

/// argmax_k |sum_{i<=k}(x_i - mean)| over k = 1..m-1, smallest k on ties.
/// Returns the 1-based size of the left segment.
std::size_t cusum_breakpoint(std::span<const double> x);

/// Exact two-segment least-squares split, smallest index on ties.
/// Returns the 1-based size of the left segment.
std::size_t dp_breakpoint(std::span<const double> x);

/// Both detectors on the sorted values; s = min of W_(b+1) candidates.
ThresholdResult w_threshold(const SortedPositiveW& sorted);

/// Both detectors on the gaps; s = min of W_(b+2) candidates.
ThresholdResult gaps_threshold(const SortedPositiveW& sorted);

/// User-chosen s (must be > 0).
ThresholdResult manual_threshold(double s);

ThresholdResult threshold(const SortedPositiveW& sorted, ThresholdMethod method);

}  // namespace koreg
