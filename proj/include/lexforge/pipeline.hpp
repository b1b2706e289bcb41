#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "lexforge/anchors.hpp"
#include "lexforge/binvec.hpp"
#include "lexforge/corpus.hpp"
#include "lexforge/dtw.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/posvec.hpp"

namespace lexforge {

struct PipelineConfig {
  std::string noun_tags = "NN,NNS,NNP,NNPS";
  PrefilterConfig prefilter;
  double dtw_threshold = 400.0;  // normalized DTW cost, tokens per path cell
  std::optional<std::size_t> dtw_band;
  std::size_t top_n = 3;
  AnchorConfig anchors;
  double t_threshold = 1.65;
  std::size_t min_secondary_freq = 3;
  std::size_t threads = 0;  // 0: one worker per hardware thread
};

/// Names accepted by set_config_value, in the spelling of the CLI flags.
const std::vector<std::string_view>& config_keys();

/// Applies one `key = value` setting. Throws ConfigError on an unknown key or
/// a malformed value.
void set_config_value(PipelineConfig& cfg, std::string_view key, std::string_view value);

/// Reads a flat `key = value` file; '#' starts a comment. Values override `cfg`.
void load_config(std::istream& in, PipelineConfig& cfg);
void load_config_file(const std::filesystem::path& path, PipelineConfig& cfg);

/// Writes every setting as `key = value` lines that load_config reads back.
void write_config(std::ostream& out, const PipelineConfig& cfg);

/// Throws ConfigError unless every threshold is positive and top_n >= 1.
void validate(const PipelineConfig& cfg);

/// Stage counts. Byte-stable across runs; timings live in RunTimings.
struct RunReport {
  std::size_t source_tokens = 0;
  std::size_t target_tokens = 0;
  std::size_t source_nouns = 0;
  std::size_t target_types = 0;
  PrefilterCounts prefilter;
  std::size_t primary_entries = 0;
  std::size_t path_points = 0;
  std::size_t anchor_points = 0;
  std::size_t segments = 0;
  std::size_t noise_segments = 0;
  std::size_t secondary_candidates = 0;
  std::size_t secondary_entries = 0;
  std::vector<std::string> warnings;
};

/// Wall-clock seconds per stage, in execution order.
using RunTimings = std::vector<std::pair<std::string, double>>;

struct PrimaryStage {
  PositionMap source_positions;  // nouns, case-folded keys
  PositionMap target_positions;  // every word type, exact keys
  DiffMap source_signals;
  DiffMap target_signals;
  PrefilterCounts prefilter;
  std::vector<ScoredPair> scored;
  Lexicon lexicon;
};

struct AnchorStage {
  std::vector<PathPoint> points;  // sorted by (i, j)
  std::vector<bool> kept;
  AnchorSet anchors;
  Segmentation segmentation;
};

struct SecondaryStage {
  BinaryMap source_vectors;
  BinaryMap target_vectors;
  std::size_t candidates = 0;
  Lexicon lexicon;
};

struct PipelineRun {
  PrimaryStage primary;
  AnchorStage anchoring;
  SecondaryStage secondary;
  Lexicon lexicon;  // primary entries first
  RunReport report;
  RunTimings timings;
};

/// Noun filter, difference signals, prefilter, DTW and primary selection.
/// Throws Error("no source nouns") when the tag filter selects nothing.
PrimaryStage run_primary(const PipelineConfig& cfg, const CorpusSide& source, const CorpusSide& target);

/// Path points of the rank-1 primary pairs, anchor filter and segmentation.
AnchorStage run_anchoring(const PipelineConfig& cfg, const PrimaryStage& primary,
                          std::size_t source_len, std::size_t target_len);

/// Binary segment vectors and mutual-information scoring for the source nouns
/// that are not primary source words.
SecondaryStage run_secondary(const PipelineConfig& cfg, const PositionMap& source_positions,
                             const PositionMap& target_positions, const Segmentation& segmentation,
                             const std::set<std::string>& primary_keys);

/// Case-folded keys of the source words of a lexicon.
std::set<std::string> source_keys(const Lexicon& lexicon);

PipelineRun run_pipeline(const PipelineConfig& cfg, const CorpusSide& source, const CorpusSide& target);

/// Loads both files (tagged source, bare target) and runs every stage.
/// Throws Error when either file is missing or empty.
PipelineRun run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path);

// Evaluation against a gold standard.

/// Acceptable targets per case-folded source word.
using GoldStandard = std::map<std::string, std::set<std::string>>;

/// Lines of `source<TAB>target[<TAB>anything]`; '#' lines are skipped.
GoldStandard read_gold(std::istream& in);

struct PrecisionRow {
  std::size_t emitted = 0;  // source words in the lexicon
  std::size_t judged = 0;   // of those, words the gold standard covers
  std::size_t correct = 0;  // judged words with a gold target among the top n
  double precision() const {
    return judged == 0 ? 0.0 : static_cast<double>(correct) / static_cast<double>(judged);
  }
};

struct EvalReport {
  std::size_t n = 1;
  PrecisionRow primary;
  PrecisionRow secondary;
  PrecisionRow total;
};

/// precision@n per stage and overall, counting only source words the gold
/// standard covers.
EvalReport evaluate(const Lexicon& lexicon, const GoldStandard& gold, std::size_t n);

/// Case-folded source words of `stage` whose top-n candidates hit the gold set.
std::set<std::string> hits(const Lexicon& lexicon, const GoldStandard& gold, std::size_t n, Stage stage);

void write_eval_report(std::ostream& out, const EvalReport& report);

// Output files.

struct DumpOptions {
  bool signals = false;   // signals.csv: word, index, gap
  bool paths = false;     // dtw_pairs.csv and dtw_paths.csv for primary pairs
  bool anchors = false;   // anchors.csv, anchors.svg, segments.tsv
  bool segsets = false;   // segsets.tsv: word, comma-separated segment indices
};

void write_report_json(std::ostream& out, const RunReport& report);
void write_timings_json(std::ostream& out, const RunTimings& timings);
void write_segmentation_tsv(std::ostream& out, const Segmentation& seg);
/// Inverse of write_segmentation_tsv. Throws ParseError.
Segmentation read_segmentation_tsv(std::istream& in);
void write_anchor_svg(std::ostream& out, const AnchorStage& anchoring, std::size_t source_len,
                      std::size_t target_len);

/// Writes lexicon.tsv, report.json and timings.json plus the requested dumps
/// into `out_dir`, creating it if needed. Throws IoError naming the path.
void emit_outputs(const PipelineRun& run, const std::filesystem::path& out_dir, const DumpOptions& dumps = {});

}  // namespace lexforge
