#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "lexforge/error.hpp"
#include "lexforge/pipeline.hpp"
#include "lexforge/synth.hpp"
#include "oracles.hpp"

namespace lexforge {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("lexforge_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

// Two nouns, each placed at the same irregular offsets as one target word.
std::pair<CorpusSide, CorpusSide> two_word_texts() {
  std::mt19937_64 rng(1);
  const std::size_t len = 3000;
  std::vector<TaggedToken> src, tgt;
  for (std::size_t k = 0; k < len; ++k) {
    src.push_back({"the", "DT", k});
    tgt.push_back({"de", "", k});
  }
  Offset at = 10;
  bool alpha = true;
  while (at < len) {
    src[at] = {alpha ? "alpha" : "Beta", "NN", at};
    tgt[at] = {alpha ? "A" : "B", "", at};
    alpha = !alpha;
    at += 20 + rng() % 200;
  }
  return {CorpusSide(src), CorpusSide(tgt)};
}

synth::SynthCorpus small_fixture(std::uint64_t seed = 3) {
  synth::SynthConfig cfg;
  cfg.seed = seed;
  cfg.tokens = 30000;
  cfg.high_pairs = 40;
  cfg.low_pairs = 15;
  return synth::generate(cfg);
}

std::string lexicon_text(const Lexicon& lex) {
  std::ostringstream out;
  write_lexicon_tsv(out, lex);
  return out.str();
}

std::string report_text(const RunReport& r) {
  std::ostringstream out;
  write_report_json(out, r);
  return out.str();
}

TEST(Pipeline, TwoWordFixture) {
  auto [src, tgt] = two_word_texts();
  auto run = run_pipeline(PipelineConfig{}, src, tgt);
  std::map<std::string, std::string> top;
  for (const auto& e : run.primary.lexicon) top[e.source_word] = e.candidates.at(0).target_word;
  EXPECT_EQ(top.at("alpha"), "A");
  EXPECT_EQ(top.at("Beta"), "B");
}

TEST(Pipeline, NoSourceNouns) {
  auto [src, tgt] = two_word_texts();
  PipelineConfig cfg;
  cfg.noun_tags = "XYZ";
  try {
    run_pipeline(cfg, src, tgt);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("no source nouns"), std::string::npos);
  }
}

TEST(Pipeline, NoAnchorsDegradesWithWarning) {
  auto [src, tgt] = two_word_texts();
  PipelineConfig cfg;
  cfg.dtw_threshold = 1e-9;
  cfg.prefilter.euclid_threshold = 1e-9;
  std::vector<TaggedToken> shuffled = tgt.tokens();
  std::mt19937_64 rng(2);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  for (std::size_t k = 0; k < shuffled.size(); ++k) shuffled[k].offset = k;
  auto run = run_pipeline(cfg, src, CorpusSide(shuffled));
  EXPECT_EQ(run.report.anchor_points, 0u);
  EXPECT_EQ(run.report.segments, 1u);
  EXPECT_FALSE(run.report.warnings.empty());
}

TEST(Pipeline, Contracts) {
  const auto corpus = small_fixture();
  PipelineConfig cfg;
  auto run = run_pipeline(cfg, corpus.source, corpus.target);
  const auto& r = run.report;

  EXPECT_EQ(r.segments, r.anchor_points + 1);
  EXPECT_EQ(r.primary_entries + r.secondary_entries, run.lexicon.size());
  for (std::size_t k = 0; k < run.lexicon.size(); ++k)
    EXPECT_EQ(run.lexicon[k].stage, k < r.primary_entries ? Stage::kPrimary : Stage::kSecondary);

  auto primary = source_keys(run.primary.lexicon);
  for (const auto& e : run.secondary.lexicon) EXPECT_FALSE(primary.count(fold_case(e.source_word)));

  std::size_t eligible = 0;
  for (const auto& [k, pv] : run.primary.source_positions) eligible += pv.count() >= cfg.min_secondary_freq;
  EXPECT_EQ(r.secondary_candidates, eligible - primary.size());

  for (const auto& e : run.lexicon) EXPECT_NO_THROW(check_entry(e, cfg.top_n));
  for (std::size_t k = 1; k < run.anchoring.anchors.count(); ++k) {
    EXPECT_LT(run.anchoring.anchors.points[k - 1].i, run.anchoring.anchors.points[k].i);
    EXPECT_LT(run.anchoring.anchors.points[k - 1].j, run.anchoring.anchors.points[k].j);
  }
}

TEST(Pipeline, AnchorsFollowTrueAlignment) {
  synth::SynthConfig scfg;
  scfg.seed = 11;
  const auto corpus = synth::generate(scfg);
  PipelineConfig cfg;
  auto run = run_pipeline(cfg, corpus.source, corpus.target);
  const auto gap = resolve_anchor_config(cfg.anchors, corpus.source.length(), corpus.target.length()).min_gap_source;
  const auto& anchors = run.anchoring.anchors.points;
  ASSERT_GT(anchors.size(), 100u);
  std::size_t near = 0;
  for (const auto& p : anchors) {
    const auto truth = corpus.alignment[p.i];
    near += (p.j > truth ? p.j - truth : truth - p.j) <= gap;
  }
  EXPECT_GE(static_cast<double>(near), 0.95 * static_cast<double>(anchors.size()));
  const auto high = corpus.gold(true);
  EXPECT_GE(evaluate(run.primary.lexicon, high, 1).primary.precision(), 0.90);
  // The Euclidean check removes most pairs that pass the frequency conditions.
  const auto& pf = run.report.prefilter;
  EXPECT_LE(static_cast<double>(pf.after_euclid), 0.05 * static_cast<double>(pf.after_frequency));
}

TEST(Pipeline, DeterministicAcrossThreadCounts) {
  const auto corpus = small_fixture();
  PipelineConfig one, many;
  one.threads = 1;
  many.threads = 4;
  auto a = run_pipeline(one, corpus.source, corpus.target);
  auto b = run_pipeline(many, corpus.source, corpus.target);
  auto c = run_pipeline(one, corpus.source, corpus.target);
  EXPECT_EQ(lexicon_text(a.lexicon), lexicon_text(b.lexicon));
  EXPECT_EQ(lexicon_text(a.lexicon), lexicon_text(c.lexicon));
  EXPECT_EQ(report_text(a.report), report_text(b.report));
}

TEST(Pipeline, StagesComposeThroughFiles) {
  const auto corpus = small_fixture(4);
  PipelineConfig cfg;
  auto full = run_pipeline(cfg, corpus.source, corpus.target);

  std::stringstream seg_file;
  write_segmentation_tsv(seg_file, full.anchoring.segmentation);
  const auto seg = read_segmentation_tsv(seg_file);
  EXPECT_EQ(seg.source_cuts(), full.anchoring.segmentation.source_cuts());
  EXPECT_EQ(seg.target_cuts(), full.anchoring.segmentation.target_cuts());

  std::stringstream lex_file(lexicon_text(full.primary.lexicon));
  const auto primary = read_lexicon_tsv(lex_file);
  auto secondary = run_secondary(cfg, full.primary.source_positions, full.primary.target_positions, seg,
                                 source_keys(primary));
  EXPECT_EQ(lexicon_text(secondary.lexicon), lexicon_text(full.secondary.lexicon));
}

TEST(Pipeline, EvaluationMatchesIndependentScoring) {
  const auto corpus = small_fixture();
  auto run = run_pipeline(PipelineConfig{}, corpus.source, corpus.target);
  const auto gold = corpus.gold();
  for (std::size_t n : {1u, 3u}) {
    auto rep = evaluate(run.lexicon, gold, n);
    auto p = oracle::score(run.lexicon, gold, n, Stage::kPrimary);
    auto s = oracle::score(run.lexicon, gold, n, Stage::kSecondary);
    EXPECT_EQ(rep.primary.judged, p.judged);
    EXPECT_EQ(rep.primary.correct, p.correct);
    EXPECT_EQ(rep.secondary.judged, s.judged);
    EXPECT_EQ(rep.secondary.correct, s.correct);
    EXPECT_EQ(rep.total.correct, p.correct + s.correct);
    EXPECT_EQ(hits(run.lexicon, gold, n, Stage::kPrimary).size(), p.correct);
  }
}

Lexicon toy_lexicon() {
  return {{"Tax", Stage::kPrimary, {{"税", 12.5, 1, {}}, {"稅", 30.25, 2, {}}, {"费", 31, 3, {}}}},
          {"budget", Stage::kSecondary, {{"预算", 6.1, 1, 2.5}}}};
}

TEST(Evaluate, ExactAndDisjoint) {
  GoldStandard exact{{"tax", {"税"}}, {"budget", {"预算"}}};
  auto rep = evaluate(toy_lexicon(), exact, 1);
  EXPECT_DOUBLE_EQ(rep.total.precision(), 1.0);
  GoldStandard none{{"tax", {"x"}}, {"budget", {"y"}}};
  EXPECT_DOUBLE_EQ(evaluate(toy_lexicon(), none, 3).total.precision(), 0.0);
  GoldStandard deeper{{"tax", {"费"}}};
  EXPECT_EQ(evaluate(toy_lexicon(), deeper, 2).primary.correct, 0u);
  EXPECT_EQ(evaluate(toy_lexicon(), deeper, 3).primary.correct, 1u);
  EXPECT_EQ(evaluate(toy_lexicon(), deeper, 3).secondary.judged, 0u);
  EXPECT_THROW(evaluate(toy_lexicon(), deeper, 0), PreconditionError);
}

TEST(Evaluate, ReadGold) {
  std::istringstream in("# source\ttarget\nTax\t税\ntax\t稅\tx\n\nbudget\t预算\n");
  auto gold = read_gold(in);
  EXPECT_EQ(gold.at("tax"), (std::set<std::string>{"税", "稅"}));
  EXPECT_EQ(gold.size(), 2u);
  std::istringstream bad("onlyone\n");
  EXPECT_THROW(read_gold(bad), ParseError);
}

TEST(LexiconTsv, RoundTrip) {
  const auto lex = toy_lexicon();
  const auto text = lexicon_text(lex);
  std::istringstream in(text);
  auto back = read_lexicon_tsv(in);
  ASSERT_EQ(back.size(), 2u);
  EXPECT_EQ(back[0].candidates.size(), 3u);
  EXPECT_EQ(back[1].candidates[0].t, 2.5);
  EXPECT_EQ(lexicon_text(back), text);

  std::size_t rows = 0;
  for (char c : text) rows += c == '\n';
  EXPECT_EQ(rows, 5u);
}

TEST(LexiconTsv, Malformed) {
  std::istringstream no_header("primary\ta\t1\tb\t1.0\tdtw_norm\t\n");
  EXPECT_THROW(read_lexicon_tsv(no_header), ParseError);
  std::istringstream bad_stage(std::string(kLexiconHeader) + "\nthird\ta\t1\tb\t1.0\tdtw_norm\t\n");
  EXPECT_THROW(read_lexicon_tsv(bad_stage), ParseError);
}

TEST(Outputs, EmptyLexiconGivesHeaderOnly) {
  auto dir = scratch("empty");
  PipelineRun run;
  emit_outputs(run, dir);
  EXPECT_EQ(slurp(dir / "lexicon.tsv"), std::string(kLexiconHeader) + "\n");
  EXPECT_NE(slurp(dir / "report.json").find("\"total_entries\": 0"), std::string::npos);
  EXPECT_TRUE(fs::exists(dir / "timings.json"));
}

TEST(Outputs, DumpsWritten) {
  auto [src, tgt] = two_word_texts();
  auto run = run_pipeline(PipelineConfig{}, src, tgt);
  auto dir = scratch("dumps");
  emit_outputs(run, dir, {true, true, true, true});
  for (const char* f : {"lexicon.tsv", "report.json", "timings.json", "signals.csv", "dtw_pairs.csv",
                        "dtw_paths.csv", "anchors.csv", "segments.tsv", "anchors.svg", "segsets.tsv"})
    EXPECT_TRUE(fs::exists(dir / f)) << f;
  EXPECT_EQ(slurp(dir / "dtw_paths.csv").rfind("pair_id,step,i,j\n", 0), 0u);
  EXPECT_EQ(slurp(dir / "anchors.csv").rfind("i,j,kept\n", 0), 0u);
}

TEST(Config, RoundTrip) {
  PipelineConfig cfg;
  cfg.noun_tags = "NN,NNP";
  cfg.prefilter.euclid_threshold = 321.5;
  cfg.dtw_band = 7;
  cfg.anchors.min_support = 3;
  cfg.anchors.resync_gap = 900;
  cfg.t_threshold = 2.0;
  std::stringstream file;
  write_config(file, cfg);
  PipelineConfig back;
  load_config(file, back);
  std::stringstream again;
  write_config(again, back);
  file.clear();
  file.seekg(0);
  EXPECT_EQ(again.str(), file.str());
  EXPECT_EQ(back.dtw_band, std::optional<std::size_t>(7));
}

TEST(Config, Errors) {
  PipelineConfig cfg;
  std::istringstream unknown("colour = blue\n");
  EXPECT_THROW(load_config(unknown, cfg), ConfigError);
  std::istringstream bad("top-n = three\n");
  EXPECT_THROW(load_config(bad, cfg), ConfigError);
  std::istringstream ok("# comment\ntop-n = 5  # trailing\ndtw-band = none\n");
  load_config(ok, cfg);
  EXPECT_EQ(cfg.top_n, 5u);
  EXPECT_FALSE(cfg.dtw_band);
  cfg.top_n = 0;
  EXPECT_THROW(validate(cfg), ConfigError);
}

}  // namespace
}  // namespace lexforge
