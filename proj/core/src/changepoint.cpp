#include "koreg/changepoint.hpp"

#include "koreg/error.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace koreg {

SortedPositiveW SortedPositiveW::from(const Vector& W) {
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < W.size(); ++i) {
    if (W[i] > 0) idx.push_back(i);
  }
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return W[a] < W[b]; });
  SortedPositiveW out;
  out.indices = idx;
  out.values.reserve(idx.size());
  for (auto i : idx) out.values.push_back(W[i]);
  return out;
}

std::vector<double> SortedPositiveW::gaps() const {
  std::vector<double> e;
  for (std::size_t j = 1; j < values.size(); ++j) e.push_back(values[j] - values[j - 1]);
  return e;
}

std::string to_string(ThresholdMethod m) {
  switch (m) {
    case ThresholdMethod::WStats: return "stats";
    case ThresholdMethod::Gaps: return "gaps";
    case ThresholdMethod::Manual: return "manual";
  }
  return "unknown";
}

std::string to_string(ThresholdStatus s) {
  switch (s) {
    case ThresholdStatus::Ok: return "ok";
    case ThresholdStatus::Empty: return "empty";
    case ThresholdStatus::Degenerate: return "degenerate";
  }
  return "unknown";
}

ThresholdMethod parse_threshold_method(const std::string& name) {
  if (name == "stats") return ThresholdMethod::WStats;
  if (name == "gaps") return ThresholdMethod::Gaps;
  if (name == "manual") return ThresholdMethod::Manual;
  throw InvalidArgument(fmt::format("unknown threshold method '{}' (expected stats, gaps or manual)", name));
}

std::size_t cusum_breakpoint(std::span<const double> x) {
  const std::size_t m = x.size();
  if (m < 2) throw InvalidArgument(fmt::format("CUSUM needs at least 2 points, got {}", m));
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(m);
  double spread = 0.0;
  for (double v : x) spread += std::abs(v - mean);
  // Partial sums within a tiny fraction of the total spread count as ties.
  const double tie = 1e-12 * spread;
  double cum = x[0] - mean;
  double best = std::abs(cum);
  std::size_t arg = 1;
  for (std::size_t k = 2; k < m; ++k) {
    cum += x[k - 1] - mean;
    if (std::abs(cum) > best + tie) {
      best = std::abs(cum);
      arg = k;
    }
  }
  return arg;
}

std::size_t dp_breakpoint(std::span<const double> x) {
  const std::size_t m = x.size();
  if (m < 2) throw InvalidArgument(fmt::format("segmentation needs at least 2 points, got {}", m));
  // Prefix sums of the data shifted by its first value: SSE is shift
  // invariant and the shift limits cancellation.
  const double shift = x[0];
  std::vector<double> s(m + 1, 0.0), s2(m + 1, 0.0);
  for (std::size_t i = 0; i < m; ++i) {
    const double v = x[i] - shift;
    s[i + 1] = s[i] + v;
    s2[i + 1] = s2[i] + v * v;
  }
  auto sse = [&](std::size_t from, std::size_t to) {
    const double len = static_cast<double>(to - from);
    const double sum = s[to] - s[from];
    return std::max(0.0, (s2[to] - s2[from]) - sum * sum / len);
  };
  // Costs within a tiny fraction of the total variation count as ties.
  const double tie = 1e-12 * sse(0, m);
  double best = sse(0, 1) + sse(1, m);
  std::size_t arg = 1;
  for (std::size_t b = 2; b < m; ++b) {
    const double cost = sse(0, b) + sse(b, m);
    if (cost < best - tie) {
      best = cost;
      arg = b;
    }
  }
  return arg;
}

namespace {

// One or two positive statistics cannot be segmented.
bool small_sample(const SortedPositiveW& sorted, ThresholdMethod method, ThresholdResult& out) {
  out.method = method;
  if (sorted.size() == 0) {
    out.status = ThresholdStatus::Empty;
    out.s = std::numeric_limits<double>::infinity();
    return true;
  }
  if (sorted.size() < 3) {
    out.status = ThresholdStatus::Degenerate;
    out.s = sorted.values.front();
    return true;
  }
  return false;
}

}  // namespace

ThresholdResult w_threshold(const SortedPositiveW& sorted) {
  ThresholdResult out;
  if (small_sample(sorted, ThresholdMethod::WStats, out)) return out;
  const std::span<const double> v(sorted.values);
  out.cusum_candidate = sorted.values[cusum_breakpoint(v)];
  out.dp_candidate = sorted.values[dp_breakpoint(v)];
  out.s = std::min(*out.cusum_candidate, *out.dp_candidate);
  return out;
}

ThresholdResult gaps_threshold(const SortedPositiveW& sorted) {
  ThresholdResult out;
  if (small_sample(sorted, ThresholdMethod::Gaps, out)) return out;
  const auto e = sorted.gaps();
  out.cusum_candidate = sorted.values[cusum_breakpoint(e) + 1];
  out.dp_candidate = sorted.values[dp_breakpoint(e) + 1];
  out.s = std::min(*out.cusum_candidate, *out.dp_candidate);
  return out;
}

ThresholdResult manual_threshold(double s) {
  if (!(s > 0)) throw InvalidArgument(fmt::format("manual threshold must be > 0, got {}", s));
  ThresholdResult out;
  out.method = ThresholdMethod::Manual;
  out.s = s;
  return out;
}

ThresholdResult threshold(const SortedPositiveW& sorted, ThresholdMethod method) {
  switch (method) {
    case ThresholdMethod::WStats: return w_threshold(sorted);
    case ThresholdMethod::Gaps: return gaps_threshold(sorted);
    case ThresholdMethod::Manual: break;
  }
  throw InvalidArgument("manual thresholds need an explicit value; use manual_threshold()");
}

}  // namespace koreg
