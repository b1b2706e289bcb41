// lexforge: bilingual noun lexicon extraction from unaligned parallel text.
//
//   lexforge run   --source s.txt --target t.txt [--config c.cfg] --out dir/
//   lexforge eval  --lexicon l.tsv --gold g.tsv [-n 3]
//   lexforge synth --seed 42 --tokens 100000 --pairs 200 --out fixture/
//
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lexforge/error.hpp"
#include "lexforge/lexicon.hpp"
#include "lexforge/pipeline.hpp"
#include "lexforge/synth.hpp"

namespace {

constexpr int kUsageError = 1;
constexpr int kDataError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::map<std::string, std::string>& flag_help() {
  static const std::map<std::string, std::string> help = {
      {"noun-tags", "Comma-separated source tags treated as nouns (default NN,NNS,NNP,NNPS)"},
      {"min-freq", "Minimum occurrences for the DTW stage (default 10)"},
      {"max-freq-ratio", "Largest allowed count ratio of a DTW pair (default 2.0)"},
      {"max-start-offset", "Largest difference of normalized first positions (default 0.3)"},
      {"euclid-threshold", "Mean/std distance above which a pair skips DTW, tokens (default 400)"},
      {"dtw-threshold", "Largest normalized DTW cost of a primary pair (default 400)"},
      {"dtw-band", "Sakoe-Chiba radius in cells, or 'none' (default none)"},
      {"top-n", "Candidates kept per source word (default 3)"},
      {"min-gap-source", "Minimum source distance between anchors (default max(5, len/4000))"},
      {"max-jump-target", "Largest target advance between anchors (default len/200)"},
      {"slope-band", "Anchor band around the diagonal, fraction of target length (default 0.1)"},
      {"min-support", "Neighbouring points an anchor needs on its local diagonal, 0 to disable (default 2)"},
      {"resync-gap", "Source tokens without an anchor after which the jump limit is waived (default 20 * min-gap-source)"},
      {"t-threshold", "t-score a secondary pair must exceed (default 1.65)"},
      {"min-secondary-freq", "Minimum occurrences for the secondary stage (default 3)"},
      {"threads", "Worker threads, 0 for all cores (default 0)"},
  };
  return help;
}

int run_command(const std::string& source, const std::string& target,
                const std::optional<std::string>& config_path, const std::string& out_dir,
                const std::map<std::string, std::optional<std::string>>& overrides,
                const lexforge::DumpOptions& dumps) {
  lexforge::PipelineConfig cfg;
  try {
    if (config_path) lexforge::load_config_file(*config_path, cfg);
    for (const auto& [key, value] : overrides)
      if (value) lexforge::set_config_value(cfg, key, *value);
    lexforge::validate(cfg);
  } catch (const lexforge::ConfigError& e) {
    throw UsageError(e.what());
  }
  auto run = lexforge::run_pipeline(cfg, source, target);
  lexforge::emit_outputs(run, out_dir, dumps);

  const auto& r = run.report;
  fmt::print(std::cerr,
             "pairs considered {}, after frequency {}, after euclid {}\n"
             "primary {}, path points {}, anchors {}, segments {}, secondary {}\n",
             r.prefilter.considered, r.prefilter.after_frequency, r.prefilter.after_euclid,
             r.primary_entries, r.path_points, r.anchor_points, r.segments, r.secondary_entries);
  for (const auto& w : r.warnings) fmt::print(std::cerr, "warning: {}\n", w);
  return 0;
}

int eval_command(const std::string& lexicon_path, const std::string& gold_path, std::size_t n) {
  std::ifstream lex_in(lexicon_path);
  if (!lex_in) throw lexforge::IoError(fmt::format("cannot open '{}'", lexicon_path));
  std::ifstream gold_in(gold_path);
  if (!gold_in) throw lexforge::IoError(fmt::format("cannot open '{}'", gold_path));
  const auto lexicon = lexforge::read_lexicon_tsv(lex_in);
  const auto gold = lexforge::read_gold(gold_in);
  lexforge::write_eval_report(std::cout, lexforge::evaluate(lexicon, gold, n));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Compile a bilingual noun lexicon from unaligned, noisy parallel text"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Extract a lexicon from a tagged source text and a bare target text");
  std::string source, target, out_dir;
  std::optional<std::string> config_path;
  lexforge::DumpOptions dumps;
  std::map<std::string, std::optional<std::string>> overrides;
  run->add_option("--source", source, "Source text, whitespace-separated word/TAG tokens")->required()->check(CLI::ExistingFile);
  run->add_option("--target", target, "Target text, whitespace-separated tokens")->required()->check(CLI::ExistingFile);
  run->add_option("--config", config_path, "Flat key = value settings file; flags override it")->check(CLI::ExistingFile);
  run->add_option("--out", out_dir, "Output directory")->required();
  run->add_flag("--dump-signals", dumps.signals, "Write difference signals (signals.csv)");
  run->add_flag("--dump-paths", dumps.paths, "Write DTW paths of primary pairs (dtw_pairs.csv, dtw_paths.csv)");
  run->add_flag("--dump-anchors", dumps.anchors, "Write anchor scatter, SVG plot and segmentation");
  run->add_flag("--dump-segsets", dumps.segsets, "Write per-word segment sets (segsets.tsv)");
  for (auto key : lexforge::config_keys()) {
    std::string name(key);
    run->add_option("--" + name, overrides[name], flag_help().at(name));
  }

  auto* eval = app.add_subcommand("eval", "Score a lexicon against a gold standard");
  std::string lexicon_path, gold_path;
  std::size_t depth = 1;
  eval->add_option("--lexicon", lexicon_path, "Lexicon TSV written by 'run'")->required()->check(CLI::ExistingFile);
  eval->add_option("--gold", gold_path, "Gold TSV: source<TAB>target per line")->required()->check(CLI::ExistingFile);
  eval->add_option("-n", depth, "Count a word correct if a gold target is among its top n")->check(CLI::PositiveNumber);

  auto* synth = app.add_subcommand("synth", "Write a synthetic parallel corpus with planted translations");
  lexforge::synth::SynthConfig synth_cfg;
  std::size_t pairs = 200;
  std::optional<std::size_t> low_pairs;
  std::string synth_out;
  synth->add_option("--seed", synth_cfg.seed, "Random seed");
  synth->add_option("--tokens", synth_cfg.tokens, "Source length in tokens");
  synth->add_option("--pairs", pairs, "Planted translation pairs, a quarter of them low-frequency");
  synth->add_option("--low-pairs", low_pairs, "Number of low-frequency pairs (overrides the quarter)");
  synth->add_option("--jitter", synth_cfg.jitter, "Maximum target displacement of a planted token");
  synth->add_option("--noise", synth_cfg.noise_fraction, "Share of one-sided noise text");
  synth->add_option("--out", synth_out, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsageError;
  }

  try {
    if (*run) return run_command(source, target, config_path, out_dir, overrides, dumps);
    if (*eval) return eval_command(lexicon_path, gold_path, depth);
    if (*synth) {
      synth_cfg.low_pairs = low_pairs.value_or(pairs / 4);
      if (synth_cfg.low_pairs > pairs) throw UsageError("--low-pairs exceeds --pairs");
      synth_cfg.high_pairs = pairs - synth_cfg.low_pairs;
      const auto corpus = lexforge::synth::generate(synth_cfg);
      lexforge::synth::write_fixture(corpus, synth_out);
      fmt::print(std::cerr, "wrote {} source and {} target tokens to {}\n", corpus.source.length(),
                 corpus.target.length(), synth_out);
      return 0;
    }
  } catch (const UsageError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const lexforge::PreconditionError& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kUsageError;
  } catch (const lexforge::Error& e) {
    fmt::print(std::cerr, "error: {}\n", e.what());
    return kDataError;
  }
  return kUsageError;
}
