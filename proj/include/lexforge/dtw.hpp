#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "lexforge/lexicon.hpp"
#include "lexforge/posvec.hpp"

namespace lexforge {

/// A cell of the warp grid, 1-based: i indexes the first signal, j the second.
struct PathCell {
  std::size_t i = 0;
  std::size_t j = 0;
  friend bool operator==(const PathCell&, const PathCell&) = default;
};

struct DtwResult {
  double raw_cost = 0.0;         // sum of |v1[i] - v2[j]| over the path
  double normalized_cost = 0.0;  // raw_cost / path length
  std::vector<PathCell> path;    // (1,1) .. (N,M)
};

struct DtwOptions {
  /// Sakoe-Chiba radius in cells around the scaled diagonal. Unset: full grid.
  std::optional<std::size_t> band;
};

/// Minimum-cost monotone, continuous alignment of two gap signals with
/// predecessors (i-1,j-1), (i-1,j), (i,j-1) and no step penalty. The path is
/// rebuilt from backpointers; ties prefer the diagonal, then the step that
/// advanced i, then the step that advanced j.
DtwResult dtw_match(const std::vector<std::size_t>& v1, const std::vector<std::size_t>& v2,
                    const DtwOptions& options = {});

/// Throws PreconditionError when either signal is empty.
DtwResult dtw_match(const DiffVector& v1, const DiffVector& v2, const DtwOptions& options = {});

/// Throws InvariantViolation unless the path runs (1,1)..(n,m) in unit steps.
void check_path(const std::vector<PathCell>& path, std::size_t n, std::size_t m);

struct ScoredPair {
  std::string source;  // keys into the diff maps
  std::string target;
  std::string source_word;  // display forms
  std::string target_word;
  DtwResult result;
};

/// One DTW result per candidate pair, in input order. Runs over `threads`
/// workers (0 = hardware concurrency). Throws LookupError naming a word that
/// is missing from its map.
std::vector<ScoredPair> score_pairs(const std::vector<WordPair>& pairs, const DiffMap& source,
                                    const DiffMap& target, const DtwOptions& options = {},
                                    std::size_t threads = 1);

/// Per source word, up to top_n targets with normalized cost <= threshold,
/// best first (ties by target word). Entries come out in source-word order.
Lexicon select_primary(const std::vector<ScoredPair>& scored, double threshold, std::size_t top_n);

}  // namespace lexforge
