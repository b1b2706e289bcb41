#pragma once

#include <cstddef>
#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace lexforge {

using Offset = std::size_t;

struct TaggedToken {
  std::string surface;
  std::string tag;  // empty when the token carried no tag
  Offset offset = 0;
};

/// How tokens are split into surface and tag.
struct TokenFormat {
  char separator = '/';
  bool tagged = true;  // false: the whole token is the surface (bare target text)

  static TokenFormat source() { return {'/', true}; }
  static TokenFormat bare() { return {'/', false}; }
};

/// One half of a parallel corpus. Immutable after loading.
class CorpusSide {
 public:
  CorpusSide() = default;
  explicit CorpusSide(std::vector<TaggedToken> tokens);

  const std::vector<TaggedToken>& tokens() const { return tokens_; }
  std::size_t length() const { return tokens_.size(); }
  const TaggedToken& operator[](Offset i) const { return tokens_[i]; }

 private:
  std::vector<TaggedToken> tokens_;
};

/// Reads whitespace-separated tokens. With a tagged format, each token is
/// split at its last separator when the part after it is non-empty, so
/// "a/b/NN" is surface "a/b" with tag "NN" and "and/" stays a bare surface.
/// Throws ParseError on an empty surface (e.g. "/NN").
CorpusSide load_tagged_text(std::istream& in, const TokenFormat& format = TokenFormat::source());
CorpusSide load_tagged_file(const std::string& path, const TokenFormat& format);

/// Inverse of the tokenizer for one token.
std::string serialize_token(const TaggedToken& token, const TokenFormat& format = TokenFormat::source());

/// Sorted occurrence offsets of one word type in one text.
struct PositionVector {
  std::string word;  // display form
  std::vector<Offset> positions;

  std::size_t count() const { return positions.size(); }
};

/// Map from word identity key to its position vector. Ordered for determinism.
using PositionMap = std::map<std::string, PositionVector>;

/// Which tags select a token. An unset tag set matches every token.
class TagFilter {
 public:
  static TagFilter all() { return TagFilter{}; }
  static TagFilter of(std::set<std::string> tags);
  static TagFilter penn_nouns() { return of({"NN", "NNS", "NNP", "NNPS"}); }
  /// Parses "NN,NNS,NNP"; "*" selects everything.
  static TagFilter parse(std::string_view list);

  bool matches(std::string_view tag) const;
  bool is_wildcard() const { return !tags_.has_value(); }
  const std::optional<std::set<std::string, std::less<>>>& tags() const { return tags_; }

 private:
  std::optional<std::set<std::string, std::less<>>> tags_;
};

enum class CaseMode { kExact, kFold };

/// ASCII lower-casing; multi-byte UTF-8 sequences pass through untouched.
std::string fold_case(std::string_view s);

/// Groups the selected tokens by word type. Under CaseMode::kFold the map key
/// is the case-folded surface and the display form is the most frequent
/// spelling (earliest seen on ties).
PositionMap noun_positions(const CorpusSide& side, const TagFilter& filter,
                           CaseMode mode = CaseMode::kFold);

}  // namespace lexforge
