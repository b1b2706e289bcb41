#include "lexforge/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lexforge/error.hpp"

namespace lexforge {

PrimaryStage run_primary(const PipelineConfig& cfg, const CorpusSide& source, const CorpusSide& target) {
  PrimaryStage stage;
  stage.source_positions = noun_positions(source, TagFilter::parse(cfg.noun_tags), CaseMode::kFold);
  if (stage.source_positions.empty()) throw Error("no source nouns: the tag filter selected nothing");
  stage.target_positions = noun_positions(target, TagFilter::all(), CaseMode::kExact);

  stage.source_signals = diff_vectors(stage.source_positions, cfg.prefilter.min_frequency);
  stage.target_signals = diff_vectors(stage.target_positions, cfg.prefilter.min_frequency);
  const auto pairs = candidate_pairs({stage.source_signals, source.length()},
                                     {stage.target_signals, target.length()}, cfg.prefilter,
                                     &stage.prefilter);
  stage.scored = score_pairs(pairs, stage.source_signals, stage.target_signals, {cfg.dtw_band},
                             cfg.threads);
  stage.lexicon = select_primary(stage.scored, cfg.dtw_threshold, cfg.top_n);
  return stage;
}

AnchorStage run_anchoring(const PipelineConfig& cfg, const PrimaryStage& primary,
                          std::size_t source_len, std::size_t target_len) {
  AnchorStage stage;
  stage.points = collect_path_points(primary.lexicon, primary.scored, primary.source_positions,
                                     primary.target_positions);
  std::sort(stage.points.begin(), stage.points.end());
  stage.anchors = filter_anchor_points(stage.points, source_len, target_len, cfg.anchors, &stage.kept);
  stage.segmentation = segment_texts(stage.anchors, source_len, target_len);
  return stage;
}

SecondaryStage run_secondary(const PipelineConfig& cfg, const PositionMap& source_positions,
                             const PositionMap& target_positions, const Segmentation& segmentation,
                             const std::set<std::string>& primary_keys) {
  SecondaryStage stage;
  stage.source_vectors = binary_vectors(source_positions, segmentation, Side::kSource,
                                        cfg.min_secondary_freq, primary_keys);
  stage.target_vectors =
      binary_vectors(target_positions, segmentation, Side::kTarget, cfg.min_secondary_freq);
  stage.candidates = stage.source_vectors.size();
  stage.lexicon = select_secondary(stage.source_vectors, stage.target_vectors,
                                   {cfg.t_threshold, cfg.top_n, cfg.threads}, primary_keys);
  return stage;
}

std::set<std::string> source_keys(const Lexicon& lexicon) {
  std::set<std::string> keys;
  for (const auto& e : lexicon) keys.insert(fold_case(e.source_word));
  return keys;
}

PipelineRun run_pipeline(const PipelineConfig& cfg, const CorpusSide& source, const CorpusSide& target) {
  validate(cfg);
  PipelineRun run;
  auto& report = run.report;
  report.source_tokens = source.length();
  report.target_tokens = target.length();

  using Clock = std::chrono::steady_clock;
  auto mark = Clock::now();
  auto lap = [&](const char* name) {
    const auto now = Clock::now();
    run.timings.emplace_back(name, std::chrono::duration<double>(now - mark).count());
    mark = now;
  };

  run.primary = run_primary(cfg, source, target);
  lap("primary");
  report.source_nouns = run.primary.source_positions.size();
  report.target_types = run.primary.target_positions.size();
  report.prefilter = run.primary.prefilter;
  report.primary_entries = run.primary.lexicon.size();
  if (run.primary.lexicon.empty())
    report.warnings.push_back("primary lexicon is empty; no anchor points can be found");

  run.anchoring = run_anchoring(cfg, run.primary, source.length(), target.length());
  lap("anchoring");
  const auto& seg = run.anchoring.segmentation;
  report.path_points = run.anchoring.points.size();
  report.anchor_points = run.anchoring.anchors.count();
  report.segments = seg.segment_count();
  for (std::size_t k = 0; k < seg.segment_count(); ++k) report.noise_segments += seg.is_noise(k);
  if (report.anchor_points < 2)
    report.warnings.push_back(fmt::format(
        "only {} anchor point(s) survived; the secondary lexicon rests on {} segment(s)",
        report.anchor_points, report.segments));

  run.secondary = run_secondary(cfg, run.primary.source_positions, run.primary.target_positions, seg,
                                source_keys(run.primary.lexicon));
  lap("secondary");
  report.secondary_candidates = run.secondary.candidates;
  report.secondary_entries = run.secondary.lexicon.size();

  run.lexicon = run.primary.lexicon;
  run.lexicon.insert(run.lexicon.end(), run.secondary.lexicon.begin(), run.secondary.lexicon.end());
  return run;
}

PipelineRun run_pipeline(const PipelineConfig& cfg, const std::filesystem::path& source_path,
                         const std::filesystem::path& target_path) {
  auto source = load_tagged_file(source_path.string(), TokenFormat::source());
  if (source.length() == 0) throw Error(fmt::format("'{}' holds no tokens", source_path.string()));
  auto target = load_tagged_file(target_path.string(), TokenFormat::bare());
  if (target.length() == 0) throw Error(fmt::format("'{}' holds no tokens", target_path.string()));
  return run_pipeline(cfg, source, target);
}

GoldStandard read_gold(std::istream& in) {
  GoldStandard gold;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    auto tab = line.find('\t');
    if (tab == std::string::npos || tab == 0)
      throw ParseError(fmt::format("gold line {}: expected source<TAB>target", line_no), line_no);
    auto rest = line.substr(tab + 1);
    auto target = rest.substr(0, rest.find('\t'));
    if (target.empty()) throw ParseError(fmt::format("gold line {}: empty target", line_no), line_no);
    gold[fold_case(line.substr(0, tab))].insert(target);
  }
  return gold;
}

namespace {

bool top_n_hits(const LexiconEntry& entry, const std::set<std::string>& gold, std::size_t n) {
  for (const auto& c : entry.candidates)
    if (c.rank <= n && gold.contains(c.target_word)) return true;
  return false;
}

}  // namespace

EvalReport evaluate(const Lexicon& lexicon, const GoldStandard& gold, std::size_t n) {
  if (n == 0) throw PreconditionError("evaluation depth n must be at least 1");
  EvalReport report;
  report.n = n;
  for (const auto& entry : lexicon) {
    auto& row = entry.stage == Stage::kPrimary ? report.primary : report.secondary;
    for (auto* r : {&row, &report.total}) ++r->emitted;
    auto it = gold.find(fold_case(entry.source_word));
    if (it == gold.end()) continue;
    for (auto* r : {&row, &report.total}) ++r->judged;
    if (top_n_hits(entry, it->second, n))
      for (auto* r : {&row, &report.total}) ++r->correct;
  }
  return report;
}

std::set<std::string> hits(const Lexicon& lexicon, const GoldStandard& gold, std::size_t n, Stage stage) {
  std::set<std::string> out;
  for (const auto& entry : lexicon) {
    if (entry.stage != stage) continue;
    const auto key = fold_case(entry.source_word);
    auto it = gold.find(key);
    if (it != gold.end() && top_n_hits(entry, it->second, n)) out.insert(key);
  }
  return out;
}

void write_eval_report(std::ostream& out, const EvalReport& report) {
  fmt::print(out, "lexicon\temitted\tjudged\tcorrect\tprecision@{}\n", report.n);
  auto row = [&](std::string_view name, const PrecisionRow& r) {
    fmt::print(out, "{}\t{}\t{}\t{}\t{:.4f}\n", name, r.emitted, r.judged, r.correct, r.precision());
  };
  row("primary", report.primary);
  row("secondary", report.secondary);
  row("total", report.total);
}

}  // namespace lexforge
