#include "lexforge/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <set>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lexforge/error.hpp"

namespace lexforge::synth {

namespace {

constexpr std::string_view kConsonants = "bcdfghklmnprstvz";
constexpr std::string_view kVowels = "aeiou";
// CJK Unified Ideographs, basic block.
constexpr char32_t kCjkFirst = 0x4E00;
constexpr char32_t kCjkLast = 0x9FA5;

void append_utf8(std::string& out, char32_t cp) {
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

std::string capitalize(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

class Generator {
 public:
  explicit Generator(const SynthConfig& cfg) : cfg_(cfg), rng_(cfg.seed) {}

  SynthCorpus run();

 private:
  std::size_t uniform(std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng_);
  }
  double real(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }

  // Unique lowercase pseudo-word of `syllables` CV syllables.
  std::string source_word(std::size_t min_syl, std::size_t max_syl) {
    while (true) {
      std::string w;
      const auto n = uniform(min_syl, max_syl);
      for (std::size_t s = 0; s < n; ++s) {
        w.push_back(kConsonants[uniform(0, kConsonants.size() - 1)]);
        w.push_back(kVowels[uniform(0, kVowels.size() - 1)]);
        if (chance(0.25)) w.push_back(kConsonants[uniform(0, kConsonants.size() - 1)]);
      }
      if (used_source_.insert(w).second) return w;
    }
  }

  std::string target_word(std::size_t min_chars, std::size_t max_chars) {
    while (true) {
      std::string w;
      const auto n = uniform(min_chars, max_chars);
      for (std::size_t c = 0; c < n; ++c)
        append_utf8(w, static_cast<char32_t>(uniform(kCjkFirst, kCjkLast)));
      if (used_target_.insert(w).second) return w;
    }
  }

  // Canonical spelling and tag of a noun.
  std::pair<std::string, std::string> noun() {
    auto base = source_word(2, 4);
    const double r = real(0.0, 1.0);
    if (r < 0.4) return {capitalize(base), "NNP"};
    if (r < 0.85) return {base, "NN"};
    base.push_back('s');
    used_source_.insert(base);
    return {base, "NNS"};
  }

  std::string surface(const std::string& canonical, const std::string& tag) {
    if ((tag == "NN" || tag == "NNS") && chance(cfg_.capitalize_rate)) return capitalize(canonical);
    return canonical;
  }

  const SynthConfig& cfg_;
  std::mt19937_64 rng_;
  std::set<std::string> used_source_;
  std::set<std::string> used_target_;
};

struct Knot {
  double core;   // source core coordinate
  double drift;  // target core coordinate minus source core coordinate
};

double warp(const std::vector<Knot>& knots, double c) {
  auto hi = std::upper_bound(knots.begin(), knots.end(), c,
                             [](double v, const Knot& k) { return v < k.core; });
  if (hi == knots.begin()) return c + knots.front().drift;
  if (hi == knots.end()) return c + knots.back().drift;
  auto lo = std::prev(hi);
  const double f = (c - lo->core) / (hi->core - lo->core);
  return c + lo->drift + f * (hi->drift - lo->drift);
}

SynthCorpus Generator::run() {
  if (cfg_.tokens < 1000) throw PreconditionError("synthetic corpus needs at least 1000 tokens");
  if (cfg_.high_min_count > cfg_.high_max_count || cfg_.low_min_count > cfg_.low_max_count ||
      cfg_.low_min_count == 0)
    throw PreconditionError("bad occurrence count range");
  if (cfg_.noise_block_min == 0 || cfg_.noise_block_min > cfg_.noise_block_max)
    throw PreconditionError("bad noise block size range");

  SynthCorpus out;
  out.config = cfg_;

  // Translation pairs.
  for (std::size_t k = 0; k < cfg_.high_pairs + cfg_.low_pairs; ++k) {
    const bool high = k < cfg_.high_pairs;
    auto [word, tag] = noun();
    PlantedPair p{word, tag, target_word(2, 2),
                  high ? uniform(cfg_.high_min_count, cfg_.high_max_count)
                       : uniform(cfg_.low_min_count, cfg_.low_max_count),
                  high};
    out.pairs.push_back(std::move(p));
  }

  // Filler vocabularies.
  static constexpr std::string_view kOtherTags[] = {"DT", "IN", "VBZ", "JJ", "RB", "CC", "PRP", "VBD", "MD", "TO"};
  std::vector<std::pair<std::string, std::string>> function_words;
  for (std::size_t k = 0; k < cfg_.source_vocabulary; ++k)
    function_words.emplace_back(source_word(1, 3), std::string(kOtherTags[uniform(0, std::size(kOtherTags) - 1)]));
  std::vector<std::pair<std::string, std::string>> distractors;
  for (std::size_t k = 0; k < cfg_.distractor_nouns; ++k) distractors.push_back(noun());
  std::vector<std::string> target_filler;
  for (std::size_t k = 0; k < cfg_.target_vocabulary; ++k) target_filler.push_back(target_word(1, 2));

  // Zipf-Mandelbrot weights 1 / (rank + shift).
  auto zipf = [](std::size_t n, double shift) {
    std::vector<double> w(std::max<std::size_t>(n, 1));
    for (std::size_t r = 0; r < w.size(); ++r) w[r] = 1.0 / (static_cast<double>(r) + shift);
    return std::discrete_distribution<std::size_t>(w.begin(), w.end());
  };
  auto pick_function = zipf(function_words.size(), 1.0);
  // Flatter, so untranslated nouns stay in the same frequency range as real ones.
  auto pick_distractor = zipf(distractors.size(), 10.0);
  auto pick_target = zipf(target_filler.size(), 1.0);

  // One-sided noise blocks.
  const auto total_noise = static_cast<std::size_t>(std::llround(cfg_.noise_fraction * static_cast<double>(cfg_.tokens)));
  struct PendingBlock {
    bool in_source;
    std::size_t size;
    std::size_t cut;  // source core index the block precedes
  };
  std::vector<PendingBlock> blocks;
  std::size_t source_noise = 0;
  for (std::size_t placed = 0; placed < total_noise;) {
    const auto size = std::min(uniform(cfg_.noise_block_min, cfg_.noise_block_max), total_noise - placed);
    const bool in_source = chance(0.5);
    blocks.push_back({in_source, size, 0});
    placed += size;
    if (in_source) source_noise += size;
  }
  if (source_noise * 2 > cfg_.tokens) throw PreconditionError("noise exceeds half of the corpus");
  const std::size_t core_len = cfg_.tokens - source_noise;
  for (auto& b : blocks) b.cut = uniform(core_len / 50, core_len - core_len / 50);
  std::stable_sort(blocks.begin(), blocks.end(), [](const auto& a, const auto& b) { return a.cut < b.cut; });

  // Piecewise-linear warp with bounded drift.
  std::vector<Knot> knots{{0.0, 0.0}};
  const double drift_bound = cfg_.max_drift * static_cast<double>(core_len);
  while (knots.back().core < static_cast<double>(core_len)) {
    const double piece = static_cast<double>(uniform(cfg_.warp_piece_min, cfg_.warp_piece_max));
    const double next = std::min(knots.back().core + piece, static_cast<double>(core_len));
    const double step = real(-cfg_.max_slope_deviation, cfg_.max_slope_deviation) * (next - knots.back().core);
    knots.push_back({next, std::clamp(knots.back().drift + step, -drift_bound, drift_bound)});
  }
  auto target_core_of = [&](std::size_t c) {
    return static_cast<std::size_t>(std::max<long long>(0, std::llround(warp(knots, static_cast<double>(c)))));
  };
  const std::size_t target_core_len = target_core_of(core_len - 1) + cfg_.jitter + 1;

  // Planted occurrences: source core slot, then a jittered target core slot.
  constexpr std::size_t kFree = static_cast<std::size_t>(-1);
  std::vector<std::size_t> source_slot(core_len, kFree), target_slot(target_core_len, kFree);
  for (std::size_t p = 0; p < out.pairs.size(); ++p) {
    for (std::size_t n = 0; n < out.pairs[p].count; ++n) {
      std::size_t c;
      do c = uniform(0, core_len - 1);
      while (source_slot[c] != kFree);
      source_slot[c] = p;

      const long long j = static_cast<long long>(cfg_.jitter);
      long long t = static_cast<long long>(target_core_of(c)) +
                    static_cast<long long>(uniform(0, 2 * cfg_.jitter)) - j;
      t = std::clamp<long long>(t, 0, static_cast<long long>(target_core_len) - 1);
      // Nearest free slot, alternating sides.
      for (long long d = 0;; ++d) {
        if (t + d < static_cast<long long>(target_core_len) && target_slot[t + d] == kFree) {
          t += d;
          break;
        }
        if (t - d >= 0 && target_slot[t - d] == kFree) {
          t -= d;
          break;
        }
      }
      target_slot[t] = p;
    }
  }

  // Assemble the target: core slots with target-side blocks spliced in.
  std::vector<TaggedToken> target_tokens;
  std::vector<Offset> target_final(target_core_len);
  {
    std::size_t next_block = 0;
    std::vector<const PendingBlock*> target_blocks;
    for (const auto& b : blocks)
      if (!b.in_source) target_blocks.push_back(&b);
    for (std::size_t t = 0; t < target_core_len; ++t) {
      while (next_block < target_blocks.size() && target_core_of(target_blocks[next_block]->cut) <= t) {
        out.noise.push_back({false, target_tokens.size(), target_blocks[next_block]->size});
        for (std::size_t k = 0; k < target_blocks[next_block]->size; ++k)
          target_tokens.push_back({target_filler[pick_target(rng_)], "", target_tokens.size()});
        ++next_block;
      }
      target_final[t] = target_tokens.size();
      const auto& word = target_slot[t] == kFree ? target_filler[pick_target(rng_)] : out.pairs[target_slot[t]].target;
      target_tokens.push_back({word, "", target_tokens.size()});
    }
  }

  // Assemble the source and the true alignment.
  std::vector<TaggedToken> source_tokens;
  source_tokens.reserve(cfg_.tokens);
  out.alignment.reserve(cfg_.tokens);
  auto source_filler = [&]() -> std::pair<std::string, std::string> {
    if (!distractors.empty() && chance(cfg_.distractor_rate)) {
      const auto& [w, tag] = distractors[pick_distractor(rng_)];
      return {surface(w, tag), tag};
    }
    return function_words[pick_function(rng_)];
  };
  {
    std::size_t next_block = 0;
    for (std::size_t c = 0; c < core_len; ++c) {
      const Offset truth = target_final[std::min(target_core_of(c), target_core_len - 1)];
      while (next_block < blocks.size() && blocks[next_block].cut <= c) {
        if (blocks[next_block].in_source) {
          out.noise.push_back({true, source_tokens.size(), blocks[next_block].size});
          for (std::size_t k = 0; k < blocks[next_block].size; ++k) {
            auto [w, tag] = source_filler();
            source_tokens.push_back({std::move(w), std::move(tag), source_tokens.size()});
            out.alignment.push_back(truth);
          }
        }
        ++next_block;
      }
      if (source_slot[c] == kFree) {
        auto [w, tag] = source_filler();
        source_tokens.push_back({std::move(w), std::move(tag), source_tokens.size()});
      } else {
        const auto& p = out.pairs[source_slot[c]];
        source_tokens.push_back({surface(p.source, p.tag), p.tag, source_tokens.size()});
      }
      out.alignment.push_back(truth);
    }
  }
  std::sort(out.noise.begin(), out.noise.end(), [](const NoiseBlock& a, const NoiseBlock& b) {
    return std::tie(a.in_source, a.begin) < std::tie(b.in_source, b.begin);
  });

  out.source = CorpusSide(std::move(source_tokens));
  out.target = CorpusSide(std::move(target_tokens));
  return out;
}

}  // namespace

GoldStandard SynthCorpus::gold() const {
  GoldStandard g;
  for (const auto& p : pairs) g[fold_case(p.source)].insert(p.target);
  return g;
}

GoldStandard SynthCorpus::gold(bool high_frequency) const {
  GoldStandard g;
  for (const auto& p : pairs)
    if (p.high_frequency == high_frequency) g[fold_case(p.source)].insert(p.target);
  return g;
}

SynthCorpus generate(const SynthConfig& config) { return Generator(config).run(); }

namespace {

void write_text(const std::filesystem::path& path, const CorpusSide& side, const TokenFormat& format) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(fmt::format("cannot write '{}'", path.string()));
  constexpr std::size_t kPerLine = 20;
  for (const auto& tok : side.tokens()) {
    out << serialize_token(tok, format);
    out << ((tok.offset + 1) % kPerLine == 0 || tok.offset + 1 == side.length() ? '\n' : ' ');
  }
  if (!out) throw IoError(fmt::format("error while writing '{}'", path.string()));
}

}  // namespace

void write_fixture(const SynthCorpus& corpus, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError(fmt::format("cannot create '{}': {}", dir.string(), ec.message()));
  write_text(dir / "source.txt", corpus.source, TokenFormat::source());
  write_text(dir / "target.txt", corpus.target, TokenFormat::bare());

  std::ofstream gold(dir / "gold.tsv", std::ios::binary);
  if (!gold) throw IoError(fmt::format("cannot write '{}'", (dir / "gold.tsv").string()));
  gold << "# source\ttarget\tclass\n";
  for (const auto& p : corpus.pairs)
    fmt::print(gold, "{}\t{}\t{}\n", p.source, p.target, p.high_frequency ? "high" : "low");

  std::ofstream align(dir / "alignment.tsv", std::ios::binary);
  if (!align) throw IoError(fmt::format("cannot write '{}'", (dir / "alignment.tsv").string()));
  align << "source_offset\ttarget_offset\n";
  for (std::size_t i = 0; i < corpus.alignment.size(); ++i) fmt::print(align, "{}\t{}\n", i, corpus.alignment[i]);
}

}  // namespace lexforge::synth
