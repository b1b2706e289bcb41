#include "lexforge/corpus.hpp"

#include <fstream>
#include <sstream>
#include <unordered_map>

#include <fmt/format.h>

#include "lexforge/error.hpp"

namespace lexforge {

CorpusSide::CorpusSide(std::vector<TaggedToken> tokens) : tokens_(std::move(tokens)) {
  for (std::size_t k = 0; k < tokens_.size(); ++k) {
    if (tokens_[k].offset != k)
      throw InvariantViolation(fmt::format("token {} carries offset {}", k, tokens_[k].offset));
    if (tokens_[k].surface.empty()) throw ParseError("empty token surface", k);
  }
}

CorpusSide load_tagged_text(std::istream& in, const TokenFormat& format) {
  std::vector<TaggedToken> tokens;
  std::string raw;
  while (in >> raw) {
    TaggedToken tok;
    tok.offset = tokens.size();
    auto cut = format.tagged ? raw.rfind(format.separator) : std::string::npos;
    if (cut != std::string::npos && cut + 1 < raw.size()) {
      tok.surface = raw.substr(0, cut);
      tok.tag = raw.substr(cut + 1);
    } else {
      tok.surface = std::move(raw);
    }
    if (tok.surface.empty())
      throw ParseError(fmt::format("token {} has an empty surface", tok.offset), tok.offset);
    tokens.push_back(std::move(tok));
  }
  return CorpusSide(std::move(tokens));
}

CorpusSide load_tagged_file(const std::string& path, const TokenFormat& format) {
  std::ifstream in(path);
  if (!in) throw IoError(fmt::format("cannot open '{}'", path));
  try {
    return load_tagged_text(in, format);
  } catch (const ParseError& e) {
    throw ParseError(fmt::format("{}: {}", path, e.what()), e.token_index());
  }
}

std::string serialize_token(const TaggedToken& token, const TokenFormat& format) {
  if (!format.tagged || token.tag.empty()) return token.surface;
  return token.surface + format.separator + token.tag;
}

TagFilter TagFilter::of(std::set<std::string> tags) {
  TagFilter f;
  f.tags_.emplace(tags.begin(), tags.end());
  return f;
}

TagFilter TagFilter::parse(std::string_view list) {
  std::set<std::string> tags;
  std::size_t start = 0;
  while (start <= list.size()) {
    auto end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    auto item = list.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (item == "*") return all();
    if (!item.empty()) tags.emplace(item);
    start = end + 1;
  }
  if (tags.empty()) throw ConfigError("empty tag list");
  return of(std::move(tags));
}

bool TagFilter::matches(std::string_view tag) const {
  return !tags_ || tags_->contains(tag);
}

std::string fold_case(std::string_view s) {
  std::string out(s);
  for (char& c : out)
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  return out;
}

PositionMap noun_positions(const CorpusSide& side, const TagFilter& filter, CaseMode mode) {
  PositionMap out;
  // spelling -> (count, first offset), per key
  std::unordered_map<std::string, std::map<std::string, std::pair<std::size_t, Offset>>> spellings;
  for (const auto& tok : side.tokens()) {
    if (!filter.matches(tok.tag)) continue;
    std::string key = mode == CaseMode::kFold ? fold_case(tok.surface) : tok.surface;
    auto& pv = out[key];
    pv.positions.push_back(tok.offset);
    if (mode == CaseMode::kFold) {
      auto [it, fresh] = spellings[key].try_emplace(tok.surface, 0, tok.offset);
      ++it->second.first;
    } else if (pv.word.empty()) {
      pv.word = tok.surface;
    }
  }
  if (mode == CaseMode::kFold) {
    for (auto& [key, pv] : out) {
      const std::string* best = nullptr;
      std::pair<std::size_t, Offset> best_stat{0, 0};
      for (const auto& [spelling, stat] : spellings[key]) {
        if (!best || stat.first > best_stat.first ||
            (stat.first == best_stat.first && stat.second < best_stat.second)) {
          best = &spelling;
          best_stat = stat;
        }
      }
      pv.word = *best;
    }
  }
  return out;
}

}  // namespace lexforge
