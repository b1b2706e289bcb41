#include "lexforge/binvec.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "lexforge/error.hpp"
#include "lexforge/parallel.hpp"

namespace lexforge {

BinaryVector::BinaryVector(std::string word, std::size_t length)
    : word_(std::move(word)), length_(length), blocks_((length + 63) / 64, 0) {}

void BinaryVector::set(std::size_t k) {
  if (k >= length_)
    throw InvariantViolation(fmt::format("bit {} outside a {}-segment vector", k, length_));
  auto& block = blocks_[k / 64];
  const std::uint64_t mask = std::uint64_t{1} << (k % 64);
  if (!(block & mask)) {
    block |= mask;
    ++ones_;
  }
}

std::vector<std::size_t> BinaryVector::set_bits() const {
  std::vector<std::size_t> out;
  out.reserve(ones_);
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    for (auto word = blocks_[b]; word != 0; word &= word - 1)
      out.push_back(b * 64 + static_cast<std::size_t>(std::countr_zero(word)));
  }
  return out;
}

std::size_t BinaryVector::overlap(const BinaryVector& other) const {
  if (length_ != other.length_)
    throw DimensionMismatch(fmt::format("'{}' has {} segments, '{}' has {}", word_, length_,
                                        other.word_, other.length_));
  std::size_t n = 0;
  for (std::size_t b = 0; b < blocks_.size(); ++b)
    n += static_cast<std::size_t>(std::popcount(blocks_[b] & other.blocks_[b]));
  return n;
}

BinaryVector BinaryVector::permuted(const std::vector<std::size_t>& perm) const {
  if (perm.size() != length_) throw DimensionMismatch("permutation length differs from vector length");
  BinaryVector out(word_, length_);
  for (auto k : set_bits()) out.set(perm[k]);
  return out;
}

BinaryVector binary_vector(const PositionVector& p, const Segmentation& seg, Side side) {
  BinaryVector v(p.word, seg.segment_count());
  for (auto pos : p.positions)
    v.set(side == Side::kSource ? seg.source_segment(pos) : seg.target_segment(pos));
  return v;
}

namespace {

struct Probabilities {
  double joint, a, b, length;
};

Probabilities probabilities(const BinaryVector& a, const BinaryVector& b, std::size_t overlap) {
  const double len = static_cast<double>(a.length());
  return {static_cast<double>(overlap) / len, static_cast<double>(a.ones()) / len,
          static_cast<double>(b.ones()) / len, len};
}

double mi_from(const Probabilities& p) {
  if (p.joint == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log2(p.joint / (p.a * p.b));
}

double t_from(const Probabilities& p) {
  return (p.joint - p.a * p.b) / std::sqrt(p.joint / p.length);
}

}  // namespace

double mutual_info(const BinaryVector& a, const BinaryVector& b) {
  return mi_from(probabilities(a, b, a.overlap(b)));
}

double t_score(const BinaryVector& a, const BinaryVector& b) {
  const auto o = a.overlap(b);
  if (o == 0)
    throw UndefinedScore(fmt::format("t-score of ('{}', '{}') is undefined without overlap", a.word(),
                                     b.word()));
  return t_from(probabilities(a, b, o));
}

BinaryMap binary_vectors(const PositionMap& positions, const Segmentation& seg, Side side,
                         std::size_t min_count, const std::set<std::string>& exclude) {
  BinaryMap out;
  for (const auto& [key, pv] : positions) {
    if (pv.count() < min_count || exclude.contains(key)) continue;
    out.emplace(key, binary_vector(pv, seg, side));
  }
  return out;
}

Lexicon select_secondary(const BinaryMap& source, const BinaryMap& target,
                         const SecondaryConfig& cfg, const std::set<std::string>& exclude) {
  if (cfg.top_n == 0) throw PreconditionError("top_n must be at least 1");

  std::vector<const BinaryVector*> sources;
  for (const auto& [key, v] : source)
    if (!exclude.contains(key)) sources.push_back(&v);
  std::vector<const BinaryVector*> targets;
  for (const auto& [key, v] : target) targets.push_back(&v);

  struct Scored {
    const BinaryVector* target;
    double m, t;
  };
  std::vector<LexiconEntry> slots(sources.size());
  parallel_for(sources.size(), cfg.threads, [&](std::size_t k) {
    const BinaryVector& sv = *sources[k];
    std::vector<Scored> kept;
    for (const auto* tv : targets) {
      const auto o = sv.overlap(*tv);
      if (o == 0) continue;
      const auto p = probabilities(sv, *tv, o);
      const double t = t_from(p);
      if (t > cfg.t_threshold) kept.push_back({tv, mi_from(p), t});
    }
    const auto n = std::min(cfg.top_n, kept.size());
    std::partial_sort(kept.begin(), kept.begin() + static_cast<std::ptrdiff_t>(n), kept.end(),
                      [](const Scored& x, const Scored& y) {
                        if (x.m != y.m) return x.m > y.m;
                        if (x.t != y.t) return x.t > y.t;
                        return x.target->word() < y.target->word();
                      });
    LexiconEntry entry{sv.word(), Stage::kSecondary, {}};
    for (std::size_t r = 0; r < n; ++r)
      entry.candidates.push_back({kept[r].target->word(), kept[r].m, r + 1, kept[r].t});
    slots[k] = std::move(entry);
  });

  Lexicon lexicon;
  for (auto& e : slots)
    if (!e.candidates.empty()) lexicon.push_back(std::move(e));
  return lexicon;
}

}  // namespace lexforge
