#include "lexforge/dtw.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>

#include <fmt/format.h>

#include "lexforge/error.hpp"
#include "lexforge/parallel.hpp"

namespace lexforge {

namespace {

constexpr std::uint64_t kUnreachable = std::numeric_limits<std::uint64_t>::max();

std::uint64_t local_cost(std::size_t a, std::size_t b) { return a > b ? a - b : b - a; }

// Column range [lo, hi] of row i (0-based) admitted by the band.
std::pair<std::size_t, std::size_t> band_columns(std::size_t i, std::size_t n, std::size_t m,
                                                 const std::optional<std::size_t>& band) {
  if (!band || n == 1 || m == 1) return {0, m - 1};
  const double slope = static_cast<double>(m - 1) / static_cast<double>(n - 1);
  // Rows must overlap their neighbours or the end cell becomes unreachable.
  const double radius = std::max(static_cast<double>(*band), std::ceil(slope));
  const double centre = slope * static_cast<double>(i);
  const double lo = std::max(0.0, std::floor(centre - radius));
  const double hi = std::min(static_cast<double>(m - 1), std::ceil(centre + radius));
  return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
}

}  // namespace

DtwResult dtw_match(const std::vector<std::size_t>& v1, const std::vector<std::size_t>& v2,
                    const DtwOptions& options) {
  const std::size_t n = v1.size(), m = v2.size();
  if (n == 0 || m == 0) throw PreconditionError("dtw_match needs two non-empty signals");

  // acc[i*m + j]: cheapest cost of reaching cell (i, j), 0-based.
  std::vector<std::uint64_t> acc(n * m, kUnreachable);
  auto at = [&](std::size_t i, std::size_t j) -> std::uint64_t& { return acc[i * m + j]; };

  for (std::size_t i = 0; i < n; ++i) {
    const auto [lo, hi] = band_columns(i, n, m, options.band);
    for (std::size_t j = lo; j <= hi; ++j) {
      const std::uint64_t cost = local_cost(v1[i], v2[j]);
      if (i == 0 && j == 0) {
        at(i, j) = cost;
        continue;
      }
      std::uint64_t best = kUnreachable;
      if (i > 0 && j > 0) best = std::min(best, at(i - 1, j - 1));
      if (i > 0) best = std::min(best, at(i - 1, j));
      if (j > 0) best = std::min(best, at(i, j - 1));
      if (best != kUnreachable) at(i, j) = best + cost;
    }
  }

  DtwResult result;
  result.raw_cost = static_cast<double>(at(n - 1, m - 1));

  std::size_t i = n - 1, j = m - 1;
  result.path.push_back({i + 1, j + 1});
  while (i > 0 || j > 0) {
    // Candidates in tie-break order: diagonal, i-advance, j-advance.
    std::uint64_t best = kUnreachable;
    int step = -1;
    if (i > 0 && j > 0 && at(i - 1, j - 1) < best) best = at(i - 1, j - 1), step = 0;
    if (i > 0 && at(i - 1, j) < best) best = at(i - 1, j), step = 1;
    if (j > 0 && at(i, j - 1) < best) best = at(i, j - 1), step = 2;
    if (step == 0) {
      --i, --j;
    } else if (step == 1) {
      --i;
    } else {
      --j;
    }
    result.path.push_back({i + 1, j + 1});
  }
  std::reverse(result.path.begin(), result.path.end());
  result.normalized_cost = result.raw_cost / static_cast<double>(result.path.size());
  return result;
}

DtwResult dtw_match(const DiffVector& v1, const DiffVector& v2, const DtwOptions& options) {
  if (v1.values.empty() || v2.values.empty())
    throw PreconditionError(fmt::format("empty signal in pair ('{}', '{}')", v1.word, v2.word));
  return dtw_match(v1.values, v2.values, options);
}

void check_path(const std::vector<PathCell>& path, std::size_t n, std::size_t m) {
  if (path.empty() || path.front() != PathCell{1, 1} || path.back() != PathCell{n, m})
    throw InvariantViolation("warp path does not join (1,1) to (N,M)");
  for (std::size_t k = 1; k < path.size(); ++k) {
    const auto di = path[k].i - path[k - 1].i, dj = path[k].j - path[k - 1].j;
    if (path[k].i < path[k - 1].i || path[k].j < path[k - 1].j || di > 1 || dj > 1 || di + dj == 0)
      throw InvariantViolation(fmt::format("illegal warp step at path index {}", k));
  }
}

std::vector<ScoredPair> score_pairs(const std::vector<WordPair>& pairs, const DiffMap& source,
                                    const DiffMap& target, const DtwOptions& options,
                                    std::size_t threads) {
  std::vector<const DiffVector*> lhs(pairs.size()), rhs(pairs.size());
  for (std::size_t k = 0; k < pairs.size(); ++k) {
    auto s = source.find(pairs[k].first);
    if (s == source.end()) throw LookupError(fmt::format("no source signal for '{}'", pairs[k].first));
    auto t = target.find(pairs[k].second);
    if (t == target.end()) throw LookupError(fmt::format("no target signal for '{}'", pairs[k].second));
    lhs[k] = &s->second;
    rhs[k] = &t->second;
  }
  std::vector<ScoredPair> out(pairs.size());
  parallel_for(pairs.size(), threads, [&](std::size_t k) {
    out[k] = {pairs[k].first, pairs[k].second, lhs[k]->word, rhs[k]->word,
              dtw_match(*lhs[k], *rhs[k], options)};
  });
  return out;
}

Lexicon select_primary(const std::vector<ScoredPair>& scored, double threshold, std::size_t top_n) {
  if (!(threshold > 0.0)) throw PreconditionError("primary threshold must be positive");
  if (top_n == 0) throw PreconditionError("top_n must be at least 1");

  std::map<std::string, std::vector<const ScoredPair*>> by_source;
  for (const auto& sp : scored)
    if (sp.result.normalized_cost <= threshold) by_source[sp.source].push_back(&sp);

  Lexicon lexicon;
  for (auto& [key, list] : by_source) {
    std::sort(list.begin(), list.end(), [](const ScoredPair* a, const ScoredPair* b) {
      if (a->result.normalized_cost != b->result.normalized_cost)
        return a->result.normalized_cost < b->result.normalized_cost;
      return a->target_word < b->target_word;
    });
    LexiconEntry entry{list.front()->source_word, Stage::kPrimary, {}};
    for (std::size_t r = 0; r < list.size() && r < top_n; ++r)
      entry.candidates.push_back({list[r]->target_word, list[r]->result.normalized_cost, r + 1, {}});
    lexicon.push_back(std::move(entry));
  }
  return lexicon;
}

}  // namespace lexforge
