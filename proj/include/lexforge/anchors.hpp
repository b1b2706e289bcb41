#pragma once

#include <cstddef>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/dtw.hpp"
#include "lexforge/lexicon.hpp"

namespace lexforge {

/// A correspondence between a source token offset and a target token offset.
struct PathPoint {
  Offset i = 0;
  Offset j = 0;
  friend bool operator==(const PathPoint&, const PathPoint&) = default;
  friend auto operator<=>(const PathPoint&, const PathPoint&) = default;
};

/// Which candidates of each primary entry contribute their warp paths.
struct PathPointOptions {
  std::size_t max_rank = 1;
};

/// Maps every warp-path cell (a, b) of a primary pair to the offsets
/// (source positions[a], target positions[b]), i.e. the occurrences that
/// close gap a and gap b. Pairs are visited in lexicon order; duplicates are
/// kept. Throws LookupError when a lexicon pair has no DTW result.
std::vector<PathPoint> collect_path_points(const Lexicon& primary,
                                           const std::vector<ScoredPair>& scored,
                                           const PositionMap& source_positions,
                                           const PositionMap& target_positions,
                                           const PathPointOptions& options = {});

struct AnchorConfig {
  double slope_band = 0.1;            // allowed |j - i*M/N|, as a fraction of the target length
  std::size_t min_gap_source = 0;     // 0: max(5, source_len / 4000)
  std::size_t max_jump_target = 0;    // 0: max(1, target_len / 200)
  // A point needs this many other points within min_gap_source tokens of its
  // local diagonal, no further than 4 * min_gap_source away in the source.
  // 0 disables the check.
  std::size_t min_support = 2;
  // After this many source tokens without a kept point the jump limit is
  // waived once. 0: 20 * min_gap_source.
  std::size_t resync_gap = 0;
};

/// AnchorConfig with the length-scaled defaults filled in.
AnchorConfig resolve_anchor_config(AnchorConfig cfg, std::size_t source_len, std::size_t target_len);

/// Reliable anchors, strictly increasing in both coordinates.
struct AnchorSet {
  std::vector<PathPoint> points;
  std::size_t count() const { return points.size(); }
};

/// Number of other points q with |q.i - p.i| <= window and
/// |(q.j - p.j) - (q.i - p.i) * M/N| <= tolerance, for each point of the
/// (i, j)-sorted input.
std::vector<std::size_t> local_support(const std::vector<PathPoint>& sorted_points, std::size_t source_len,
                                       std::size_t target_len, std::size_t window, std::size_t tolerance);

/// Sorts the points by (i, j) and scans them left to right. A point is kept
/// iff it lies within the slope band of the global diagonal, has at least
/// min_support supporting points, and, relative to the previously kept
/// point, i >= prev_i + min_gap_source, j > prev_j and
/// j - prev_j <= max_jump_target. The jump limit is waived when the point
/// lies resync_gap or more source tokens past the previously kept one.
/// `kept`, when given, receives one flag per point of the sorted order.
AnchorSet filter_anchor_points(std::vector<PathPoint> points, std::size_t source_len,
                               std::size_t target_len, const AnchorConfig& cfg,
                               std::vector<bool>* kept = nullptr);

/// Half-open token range [begin, end).
struct Span {
  Offset begin = 0;
  Offset end = 0;
  std::size_t size() const { return end - begin; }
  bool empty() const { return begin == end; }
};

/// Parallel segmentation induced by the anchors. Segment k of a text covers
/// offsets (cut[k-1], cut[k]]; segment 0 starts at offset 0 and the last
/// segment runs to the end of the text.
class Segmentation {
 public:
  Segmentation() = default;
  Segmentation(std::vector<Offset> source_cuts, std::vector<Offset> target_cuts,
               std::size_t source_length, std::size_t target_length);

  std::size_t segment_count() const { return source_cuts_.size() + 1; }
  const std::vector<Offset>& source_cuts() const { return source_cuts_; }
  const std::vector<Offset>& target_cuts() const { return target_cuts_; }
  std::size_t source_length() const { return source_length_; }
  std::size_t target_length() const { return target_length_; }

  /// Segment holding a source/target offset. Throws InvariantViolation when
  /// the offset lies beyond the text.
  std::size_t source_segment(Offset offset) const;
  std::size_t target_segment(Offset offset) const;

  Span source_span(std::size_t k) const;
  Span target_span(std::size_t k) const;
  /// True when either side of segment k is empty: the other side's tokens
  /// have no counterpart.
  bool is_noise(std::size_t k) const;

 private:
  std::vector<Offset> source_cuts_;
  std::vector<Offset> target_cuts_;
  std::size_t source_length_ = 0;
  std::size_t target_length_ = 0;
};

/// Cuts both texts at the anchor offsets. Anchors must be non-decreasing in
/// both coordinates and inside both texts; equal consecutive coordinates give
/// empty segments that are reported as noise. Throws InvariantViolation.
Segmentation segment_texts(const AnchorSet& anchors, std::size_t source_len, std::size_t target_len);

}  // namespace lexforge
