#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace homeguard::postag {

// Penn-Treebank-style subset. PRPS prints as "PRP$".
enum class PosTag {
  NN, NNS, NNP, PRP, PRPS,
  VB, VBD, VBG, VBN, VBP, VBZ, MD,
  JJ, RB, IN, CC, DT, TO, CD, UH, SYM,
  OTHER,
};

std::string_view tag_name(PosTag tag);
std::optional<PosTag> tag_from_name(std::string_view name);

inline bool is_verb_tag(PosTag t) {
  return t == PosTag::VB || t == PosTag::VBD || t == PosTag::VBG || t == PosTag::VBN ||
         t == PosTag::VBP || t == PosTag::VBZ;
}
inline bool is_noun_tag(PosTag t) {
  return t == PosTag::NN || t == PosTag::NNS || t == PosTag::NNP;
}

struct Token {
  std::string surface;
  std::size_t start = 0;  // character offset into the normalized sentence text
  PosTag tag = PosTag::OTHER;
  std::string lemma;  // filled by the action extractor
};

// Word -> tags in rank order (first = preferred). Lookup is case-insensitive;
// NNP detection for unknown capitalized words happens in the tagger.
class TagLexicon {
 public:
  static TagLexicon load(const std::filesystem::path& path);
  static TagLexicon parse(std::string_view text);

  const std::vector<PosTag>* lookup(std::string_view word) const;
  bool has_tag(std::string_view word, PosTag tag) const;
  std::size_t size() const { return entries_.size(); }
  const std::map<std::string, std::vector<PosTag>>& entries() const { return entries_; }

 private:
  std::map<std::string, std::vector<PosTag>> entries_;
};

// Whitespace split with clitic detachment ("n't", "'d", "'s", "'ll", "'re",
// "'ve", "'m"); commas become their own tokens; hyphenated words stay whole
// (edge hyphens trimmed).
std::vector<Token> tokenize(std::string_view sentence_text);

// Lexicon first-rank, then suffix rules for unknowns, then contextual repair
// rules in a fixed order, each applied at most once per token.
void tag_sentence(std::vector<Token>& tokens, const TagLexicon& lexicon);

std::string lowercase(std::string_view word);

}  // namespace homeguard::postag
