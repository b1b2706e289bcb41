#pragma once

#include <cstddef>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

enum class Stage { kPrimary, kSecondary };

std::string_view stage_name(Stage stage);
/// Name of the score column for a stage: "dtw_norm" or "mi".
std::string_view score_type(Stage stage);

struct Candidate {
  std::string target_word;
  double score = 0.0;  // normalized DTW cost (primary) or mutual information (secondary)
  std::size_t rank = 1;
  std::optional<double> t;  // secondary only
};

/// Ranked translation candidates for one source word.
struct LexiconEntry {
  std::string source_word;
  Stage stage = Stage::kPrimary;
  std::vector<Candidate> candidates;
};

using Lexicon = std::vector<LexiconEntry>;

/// Checks rank contiguity, the top_n bound and score monotonicity.
/// Throws InvariantViolation.
void check_entry(const LexiconEntry& entry, std::size_t top_n);

inline constexpr std::string_view kLexiconHeader =
    "stage\tsource_word\trank\ttarget_word\tscore\tscore_type\tt";

/// One row per candidate, header first. Scores use six decimals.
void write_lexicon_tsv(std::ostream& out, const Lexicon& lexicon);

/// Parses what write_lexicon_tsv emits. Consecutive rows sharing stage and
/// source word form one entry. Throws ParseError with the line number.
Lexicon read_lexicon_tsv(std::istream& in);

}  // namespace lexforge
