#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "lexforge/corpus.hpp"
#include "lexforge/pipeline.hpp"

namespace lexforge::synth {

/// Parameters of a fabricated parallel corpus. Planted translation pairs are
/// placed at the same aligned positions in both texts; the target side is
/// warped piecewise-linearly, jittered per token, and both sides receive
/// blocks of text that the other side lacks.
struct SynthConfig {
  std::uint64_t seed = 42;
  std::size_t tokens = 100000;  // source length
  std::size_t high_pairs = 150;
  std::size_t low_pairs = 50;
  std::size_t high_min_count = 10;
  std::size_t high_max_count = 40;
  std::size_t low_min_count = 3;
  std::size_t low_max_count = 6;
  std::size_t jitter = 15;  // max target displacement, tokens
  double noise_fraction = 0.05;
  std::size_t noise_block_min = 100;
  std::size_t noise_block_max = 400;
  double max_slope_deviation = 0.07;  // local warp slopes lie in 1 +- this
  double max_drift = 0.02;            // warp offset bound, fraction of the text
  std::size_t warp_piece_min = 5000;
  std::size_t warp_piece_max = 15000;
  std::size_t distractor_nouns = 200;  // source nouns with no translation
  double distractor_rate = 0.05;       // share of source filler tokens that are distractor nouns
  std::size_t source_vocabulary = 800;
  std::size_t target_vocabulary = 3000;
  double capitalize_rate = 0.1;  // sentence-initial style capitals on common nouns
};

struct PlantedPair {
  std::string source;  // canonical spelling
  std::string tag;
  std::string target;
  std::size_t count = 0;
  bool high_frequency = false;
};

/// A source-only or target-only run of tokens.
struct NoiseBlock {
  bool in_source = false;
  Offset begin = 0;  // final offset in its own text
  std::size_t size = 0;
};

struct SynthCorpus {
  SynthConfig config;
  CorpusSide source;
  CorpusSide target;
  std::vector<PlantedPair> pairs;
  std::vector<NoiseBlock> noise;
  /// True target offset of every source offset; flat across source-only blocks.
  std::vector<Offset> alignment;

  GoldStandard gold() const;
  GoldStandard gold(bool high_frequency) const;
};

/// Deterministic for a given config (same seed, same binary).
SynthCorpus generate(const SynthConfig& config);

/// Writes source.txt, target.txt, gold.tsv (source, target, class) and
/// alignment.tsv (source offset, target offset) into `dir`.
void write_fixture(const SynthCorpus& corpus, const std::filesystem::path& dir);

}  // namespace lexforge::synth
