#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "lexforge/corpus.hpp"

namespace lexforge {

/// Gaps between consecutive occurrences of one word: values[k] = p[k+1] - p[k].
struct DiffVector {
  std::string word;
  Offset start = 0;  // first occurrence, so the position vector can be rebuilt
  std::vector<std::size_t> values;

  std::size_t dim() const { return values.size(); }
  std::size_t count() const { return values.size() + 1; }
};

using DiffMap = std::map<std::string, DiffVector>;

struct VectorStats {
  double mean = 0.0;
  double std = 0.0;  // population standard deviation
};

/// Throws InsufficientFrequency when the word occurs fewer than two times.
DiffVector diff_vector(const PositionVector& p);

/// Inverse of diff_vector.
PositionVector cumulative_positions(const DiffVector& v);

/// Diff vectors for every entry with at least `min_count` occurrences (min 2).
DiffMap diff_vectors(const PositionMap& positions, std::size_t min_count = 2);

/// Throws PreconditionError on an empty vector.
VectorStats stats(const DiffVector& v);

double euclid_distance(const VectorStats& a, const VectorStats& b);

struct PrefilterConfig {
  std::size_t min_frequency = 10;
  double max_freq_ratio = 2.0;
  double max_start_offset_ratio = 0.3;
  double euclid_threshold = 400.0;  // tokens
};

/// One side of the matching problem: its difference signals and text length.
struct SignalSet {
  const DiffMap& vectors;
  std::size_t text_length;
};

/// Reason a pair was rejected, in the order the conditions are checked.
enum class PrefilterVerdict { kPass, kFrequency, kFrequencyRatio, kStartOffset, kEuclid };

PrefilterVerdict check_pair(const DiffVector& a, std::size_t len_a, const DiffVector& b,
                            std::size_t len_b, const PrefilterConfig& cfg);

struct PrefilterCounts {
  std::size_t considered = 0;        // full cross product
  std::size_t after_frequency = 0;   // passed count, ratio and start conditions
  std::size_t after_euclid = 0;      // final candidates
};

using WordPair = std::pair<std::string, std::string>;  // (source key, target key)

/// All (source, target) key pairs passing the four prefilter conditions,
/// sorted lexicographically. `counts` receives per-condition survivors.
std::vector<WordPair> candidate_pairs(const SignalSet& source, const SignalSet& target,
                                      const PrefilterConfig& cfg,
                                      PrefilterCounts* counts = nullptr);

}  // namespace lexforge
