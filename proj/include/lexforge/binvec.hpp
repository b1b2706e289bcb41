#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "lexforge/anchors.hpp"
#include "lexforge/corpus.hpp"
#include "lexforge/lexicon.hpp"

namespace lexforge {

enum class Side { kSource, kTarget };

/// Segment occupancy of one word: bit k is set iff the word occurs in segment k.
class BinaryVector {
 public:
  BinaryVector() = default;
  BinaryVector(std::string word, std::size_t length);

  const std::string& word() const { return word_; }
  std::size_t length() const { return length_; }
  std::size_t ones() const { return ones_; }

  bool test(std::size_t k) const { return (blocks_[k / 64] >> (k % 64)) & 1u; }
  void set(std::size_t k);
  /// Indices of the set bits, ascending.
  std::vector<std::size_t> set_bits() const;

  /// Number of positions set in both vectors. Throws DimensionMismatch.
  std::size_t overlap(const BinaryVector& other) const;

  /// Same bits rearranged: bit k moves to perm[k].
  BinaryVector permuted(const std::vector<std::size_t>& perm) const;

 private:
  std::string word_;
  std::size_t length_ = 0;
  std::size_t ones_ = 0;
  std::vector<std::uint64_t> blocks_;
};

/// Throws InvariantViolation when a position falls outside the segmented text.
BinaryVector binary_vector(const PositionVector& p, const Segmentation& seg, Side side);

/// log2(Pr(V1,V2) / (Pr(V1) Pr(V2))) with probabilities as bit counts over L.
/// Returns -infinity without overlap. Throws DimensionMismatch.
double mutual_info(const BinaryVector& a, const BinaryVector& b);

/// (Pr(V1,V2) - Pr(V1) Pr(V2)) / sqrt(Pr(V1,V2) / L). Throws UndefinedScore
/// without overlap and DimensionMismatch on unequal lengths.
double t_score(const BinaryVector& a, const BinaryVector& b);

using BinaryMap = std::map<std::string, BinaryVector>;

/// Binary vectors for the words with at least `min_count` occurrences,
/// skipping keys listed in `exclude`.
BinaryMap binary_vectors(const PositionMap& positions, const Segmentation& seg, Side side,
                         std::size_t min_count, const std::set<std::string>& exclude = {});

struct SecondaryConfig {
  double t_threshold = 1.65;
  std::size_t top_n = 3;
  std::size_t threads = 1;
};

/// Per source word, up to top_n targets with t > t_threshold ranked by
/// descending m, then descending t, then target word. Source keys in
/// `exclude` are never emitted. Entries come out in source-key order.
Lexicon select_secondary(const BinaryMap& source, const BinaryMap& target,
                         const SecondaryConfig& cfg, const std::set<std::string>& exclude = {});

}  // namespace lexforge
