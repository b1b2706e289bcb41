#include "lexforge/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <utility>

#include <fmt/format.h>

#include "lexforge/error.hpp"

namespace lexforge {

std::vector<PathPoint> collect_path_points(const Lexicon& primary,
                                           const std::vector<ScoredPair>& scored,
                                           const PositionMap& source_positions,
                                           const PositionMap& target_positions,
                                           const PathPointOptions& options) {
  std::map<std::pair<std::string_view, std::string_view>, const ScoredPair*> index;
  for (const auto& sp : scored) index.emplace(std::pair{std::string_view(sp.source_word), std::string_view(sp.target_word)}, &sp);

  std::vector<PathPoint> points;
  for (const auto& entry : primary) {
    for (const auto& c : entry.candidates) {
      if (c.rank > options.max_rank) break;
      auto it = index.find({entry.source_word, c.target_word});
      if (it == index.end())
        throw LookupError(
            fmt::format("no warp path for pair ('{}', '{}')", entry.source_word, c.target_word));
      const ScoredPair& sp = *it->second;
      auto s = source_positions.find(sp.source);
      auto t = target_positions.find(sp.target);
      if (s == source_positions.end() || t == target_positions.end())
        throw LookupError(fmt::format("no positions for pair ('{}', '{}')", sp.source, sp.target));
      const auto& sp_pos = s->second.positions;
      const auto& tp_pos = t->second.positions;
      for (const auto& cell : sp.result.path) {
        if (cell.i >= sp_pos.size() || cell.j >= tp_pos.size())
          throw InvariantViolation(fmt::format("warp cell ({}, {}) outside the positions of ('{}', '{}')",
                                               cell.i, cell.j, sp.source, sp.target));
        points.push_back({sp_pos[cell.i], tp_pos[cell.j]});
      }
    }
  }
  return points;
}

AnchorConfig resolve_anchor_config(AnchorConfig cfg, std::size_t source_len, std::size_t target_len) {
  if (cfg.min_gap_source == 0) cfg.min_gap_source = std::max<std::size_t>(5, source_len / 4000);
  if (cfg.max_jump_target == 0) cfg.max_jump_target = std::max<std::size_t>(1, target_len / 200);
  if (cfg.resync_gap == 0) cfg.resync_gap = 20 * cfg.min_gap_source;
  return cfg;
}

std::vector<std::size_t> local_support(const std::vector<PathPoint>& points, std::size_t source_len,
                                       std::size_t target_len, std::size_t window, std::size_t tolerance) {
  // |dj - di * M/N| <= tol, scaled by N to stay in integers.
  const auto n = static_cast<std::int64_t>(std::max<std::size_t>(source_len, 1));
  const auto m = static_cast<std::int64_t>(source_len == 0 ? 0 : target_len);
  const auto tol = static_cast<std::int64_t>(tolerance) * n;
  std::vector<std::size_t> support(points.size(), 0);
  std::size_t lo = 0;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    while (points[lo].i + window < p.i) ++lo;
    for (std::size_t q = lo; q < points.size() && points[q].i <= p.i + window; ++q) {
      if (q == k) continue;
      const auto di = static_cast<std::int64_t>(points[q].i) - static_cast<std::int64_t>(p.i);
      const auto dj = static_cast<std::int64_t>(points[q].j) - static_cast<std::int64_t>(p.j);
      if (std::abs(dj * n - di * m) <= tol) ++support[k];
    }
  }
  return support;
}

AnchorSet filter_anchor_points(std::vector<PathPoint> points, std::size_t source_len,
                               std::size_t target_len, const AnchorConfig& config,
                               std::vector<bool>* kept) {
  const AnchorConfig cfg = resolve_anchor_config(config, source_len, target_len);
  std::sort(points.begin(), points.end());
  if (kept) kept->assign(points.size(), false);
  std::vector<std::size_t> support;
  if (cfg.min_support > 0)
    support = local_support(points, source_len, target_len, 4 * cfg.min_gap_source, cfg.min_gap_source);

  const double slope =
      source_len == 0 ? 0.0 : static_cast<double>(target_len) / static_cast<double>(source_len);
  const double band = cfg.slope_band * static_cast<double>(target_len);

  AnchorSet out;
  for (std::size_t k = 0; k < points.size(); ++k) {
    const auto& p = points[k];
    if (std::abs(static_cast<double>(p.j) - slope * static_cast<double>(p.i)) > band) continue;
    if (cfg.min_support > 0 && support[k] < cfg.min_support) continue;
    if (!out.points.empty()) {
      const auto& prev = out.points.back();
      if (p.i < prev.i + cfg.min_gap_source) continue;
      if (p.j <= prev.j) continue;
      if (p.j - prev.j > cfg.max_jump_target && p.i < prev.i + cfg.resync_gap) continue;
    }
    out.points.push_back(p);
    if (kept) (*kept)[k] = true;
  }
  return out;
}

Segmentation::Segmentation(std::vector<Offset> source_cuts, std::vector<Offset> target_cuts,
                           std::size_t source_length, std::size_t target_length)
    : source_cuts_(std::move(source_cuts)),
      target_cuts_(std::move(target_cuts)),
      source_length_(source_length),
      target_length_(target_length) {
  if (source_cuts_.size() != target_cuts_.size())
    throw InvariantViolation("source and target cut lists differ in length");
  auto check = [](const std::vector<Offset>& cuts, std::size_t len, const char* side) {
    for (std::size_t k = 0; k < cuts.size(); ++k) {
      if (cuts[k] >= len)
        throw InvariantViolation(fmt::format("{} cut {} at {} lies outside the text ({} tokens)", side,
                                             k, cuts[k], len));
      if (k > 0 && cuts[k] < cuts[k - 1])
        throw InvariantViolation(fmt::format("{} cuts decrease at anchor {}", side, k));
    }
  };
  check(source_cuts_, source_length_, "source");
  check(target_cuts_, target_length_, "target");
}

namespace {

std::size_t locate(const std::vector<Offset>& cuts, std::size_t len, Offset offset, const char* side) {
  if (offset >= len)
    throw InvariantViolation(fmt::format("{} offset {} is outside the text ({} tokens)", side, offset, len));
  return static_cast<std::size_t>(std::lower_bound(cuts.begin(), cuts.end(), offset) - cuts.begin());
}

Span span_of(const std::vector<Offset>& cuts, std::size_t len, std::size_t k) {
  const Offset begin = k == 0 ? 0 : cuts[k - 1] + 1;
  const Offset end = k < cuts.size() ? cuts[k] + 1 : len;
  return {std::min(begin, end), end};
}

}  // namespace

std::size_t Segmentation::source_segment(Offset offset) const {
  return locate(source_cuts_, source_length_, offset, "source");
}

std::size_t Segmentation::target_segment(Offset offset) const {
  return locate(target_cuts_, target_length_, offset, "target");
}

Span Segmentation::source_span(std::size_t k) const { return span_of(source_cuts_, source_length_, k); }

Span Segmentation::target_span(std::size_t k) const { return span_of(target_cuts_, target_length_, k); }

bool Segmentation::is_noise(std::size_t k) const {
  return source_span(k).empty() || target_span(k).empty();
}

Segmentation segment_texts(const AnchorSet& anchors, std::size_t source_len, std::size_t target_len) {
  std::vector<Offset> source_cuts, target_cuts;
  source_cuts.reserve(anchors.count());
  target_cuts.reserve(anchors.count());
  for (const auto& p : anchors.points) {
    source_cuts.push_back(p.i);
    target_cuts.push_back(p.j);
  }
  return Segmentation(std::move(source_cuts), std::move(target_cuts), source_len, target_len);
}

}  // namespace lexforge
