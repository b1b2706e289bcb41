#include "lexforge/posvec.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

#include "lexforge/error.hpp"

namespace lexforge {

DiffVector diff_vector(const PositionVector& p) {
  if (p.count() < 2)
    throw InsufficientFrequency(
        fmt::format("'{}' occurs {} time(s); a difference vector needs 2", p.word, p.count()));
  DiffVector v;
  v.word = p.word;
  v.start = p.positions.front();
  v.values.reserve(p.count() - 1);
  for (std::size_t k = 0; k + 1 < p.count(); ++k) {
    if (p.positions[k + 1] <= p.positions[k])
      throw InvariantViolation(fmt::format("positions of '{}' are not increasing", p.word));
    v.values.push_back(p.positions[k + 1] - p.positions[k]);
  }
  return v;
}

PositionVector cumulative_positions(const DiffVector& v) {
  PositionVector p;
  p.word = v.word;
  p.positions.reserve(v.count());
  Offset at = v.start;
  p.positions.push_back(at);
  for (auto gap : v.values) p.positions.push_back(at += gap);
  return p;
}

DiffMap diff_vectors(const PositionMap& positions, std::size_t min_count) {
  DiffMap out;
  min_count = std::max<std::size_t>(min_count, 2);
  for (const auto& [key, pv] : positions)
    if (pv.count() >= min_count) out.emplace(key, diff_vector(pv));
  return out;
}

VectorStats stats(const DiffVector& v) {
  if (v.values.empty()) throw PreconditionError(fmt::format("'{}' has an empty signal", v.word));
  const double n = static_cast<double>(v.dim());
  double sum = 0.0;
  for (auto x : v.values) sum += static_cast<double>(x);
  const double mean = sum / n;
  double ss = 0.0;
  for (auto x : v.values) {
    const double d = static_cast<double>(x) - mean;
    ss += d * d;
  }
  return {mean, std::sqrt(ss / n)};
}

double euclid_distance(const VectorStats& a, const VectorStats& b) {
  return std::hypot(a.mean - b.mean, a.std - b.std);
}

PrefilterVerdict check_pair(const DiffVector& a, std::size_t len_a, const DiffVector& b,
                            std::size_t len_b, const PrefilterConfig& cfg) {
  const auto ca = a.count(), cb = b.count();
  if (ca < cfg.min_frequency || cb < cfg.min_frequency) return PrefilterVerdict::kFrequency;
  const double ratio =
      static_cast<double>(std::max(ca, cb)) / static_cast<double>(std::min(ca, cb));
  if (ratio > cfg.max_freq_ratio) return PrefilterVerdict::kFrequencyRatio;
  const double sa = static_cast<double>(a.start) / static_cast<double>(std::max<std::size_t>(len_a, 1));
  const double sb = static_cast<double>(b.start) / static_cast<double>(std::max<std::size_t>(len_b, 1));
  if (std::abs(sa - sb) > cfg.max_start_offset_ratio) return PrefilterVerdict::kStartOffset;
  if (euclid_distance(stats(a), stats(b)) > cfg.euclid_threshold) return PrefilterVerdict::kEuclid;
  return PrefilterVerdict::kPass;
}

std::vector<WordPair> candidate_pairs(const SignalSet& source, const SignalSet& target,
                                      const PrefilterConfig& cfg, PrefilterCounts* counts) {
  std::map<std::string, VectorStats> target_stats;
  for (const auto& [key, v] : target.vectors)
    if (v.count() >= cfg.min_frequency) target_stats.emplace(key, stats(v));

  PrefilterCounts tally;
  tally.considered = source.vectors.size() * target.vectors.size();
  std::vector<WordPair> out;
  for (const auto& [skey, sv] : source.vectors) {
    if (sv.count() < cfg.min_frequency) continue;
    const auto sstats = stats(sv);
    const double sstart =
        static_cast<double>(sv.start) / static_cast<double>(std::max<std::size_t>(source.text_length, 1));
    for (const auto& [tkey, ts] : target_stats) {
      const auto& tv = target.vectors.at(tkey);
      const auto ca = sv.count(), cb = tv.count();
      const double ratio =
          static_cast<double>(std::max(ca, cb)) / static_cast<double>(std::min(ca, cb));
      if (ratio > cfg.max_freq_ratio) continue;
      const double tstart =
          static_cast<double>(tv.start) / static_cast<double>(std::max<std::size_t>(target.text_length, 1));
      if (std::abs(sstart - tstart) > cfg.max_start_offset_ratio) continue;
      ++tally.after_frequency;
      if (euclid_distance(sstats, ts) > cfg.euclid_threshold) continue;
      ++tally.after_euclid;
      out.emplace_back(skey, tkey);
    }
  }
  // Both maps iterate in key order, so `out` is already lexicographic.
  if (counts) *counts = tally;
  return out;
}

}  // namespace lexforge
