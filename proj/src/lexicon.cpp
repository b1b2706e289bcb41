#include "lexforge/lexicon.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>
#include <fmt/ostream.h>

#include "lexforge/error.hpp"

namespace lexforge {

std::string_view stage_name(Stage stage) {
  return stage == Stage::kPrimary ? "primary" : "secondary";
}

std::string_view score_type(Stage stage) {
  return stage == Stage::kPrimary ? "dtw_norm" : "mi";
}

void check_entry(const LexiconEntry& entry, std::size_t top_n) {
  if (entry.candidates.empty() || entry.candidates.size() > top_n)
    throw InvariantViolation(fmt::format("'{}' has {} candidates (top_n {})", entry.source_word,
                                         entry.candidates.size(), top_n));
  for (std::size_t k = 0; k < entry.candidates.size(); ++k) {
    const auto& c = entry.candidates[k];
    if (c.rank != k + 1)
      throw InvariantViolation(fmt::format("'{}' rank {} at slot {}", entry.source_word, c.rank, k));
    if (k == 0) continue;
    const double prev = entry.candidates[k - 1].score;
    const bool ordered = entry.stage == Stage::kPrimary ? prev <= c.score : prev >= c.score;
    if (!ordered)
      throw InvariantViolation(fmt::format("'{}' scores are not monotone in rank", entry.source_word));
  }
}

void write_lexicon_tsv(std::ostream& out, const Lexicon& lexicon) {
  fmt::print(out, "{}\n", kLexiconHeader);
  for (const auto& entry : lexicon) {
    for (const auto& c : entry.candidates) {
      fmt::print(out, "{}\t{}\t{}\t{}\t{:.6f}\t{}\t", stage_name(entry.stage), entry.source_word,
                 c.rank, c.target_word, c.score, score_type(entry.stage));
      if (c.t) fmt::print(out, "{:.6f}", *c.t);
      out << '\n';
    }
  }
}

namespace {

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    auto tab = line.find('\t', start);
    fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return fields;
}

double parse_double(std::string_view s, std::size_t line_no) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size())
    throw ParseError(fmt::format("line {}: bad number '{}'", line_no, s), line_no);
  return v;
}

}  // namespace

Lexicon read_lexicon_tsv(std::istream& in) {
  Lexicon lexicon;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kLexiconHeader) throw ParseError("missing lexicon header", line_no);
      continue;
    }
    if (line.empty()) continue;
    auto f = split_tabs(line);
    if (f.size() != 7) throw ParseError(fmt::format("line {}: expected 7 fields", line_no), line_no);
    Stage stage;
    if (f[0] == "primary") {
      stage = Stage::kPrimary;
    } else if (f[0] == "secondary") {
      stage = Stage::kSecondary;
    } else {
      throw ParseError(fmt::format("line {}: unknown stage '{}'", line_no, f[0]), line_no);
    }
    if (f[5] != score_type(stage))
      throw ParseError(fmt::format("line {}: score type '{}' does not match stage", line_no, f[5]),
                       line_no);
    Candidate c;
    c.target_word = std::string(f[3]);
    c.score = parse_double(f[4], line_no);
    std::size_t rank = 0;
    auto [ptr, ec] = std::from_chars(f[2].data(), f[2].data() + f[2].size(), rank);
    if (ec != std::errc{} || ptr != f[2].data() + f[2].size() || rank == 0)
      throw ParseError(fmt::format("line {}: bad rank '{}'", line_no, f[2]), line_no);
    c.rank = rank;
    if (!f[6].empty()) c.t = parse_double(f[6], line_no);

    if (lexicon.empty() || lexicon.back().stage != stage || lexicon.back().source_word != f[1] ||
        rank == 1) {
      lexicon.push_back({std::string(f[1]), stage, {}});
    }
    lexicon.back().candidates.push_back(std::move(c));
  }
  if (line_no == 0) throw ParseError("missing lexicon header", 0);
  return lexicon;
}

}  // namespace lexforge
