#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "homeguard/postag.hpp"

namespace homeguard::text {

struct RawMessage {
  std::string id;
  std::string text;
  std::string received_at;  // ISO 8601 UTC
};

enum class FilterStatus { Pass, FilteredQuestion, FilteredUncertain, FilteredNegative, Empty };

std::string_view filter_status_name(FilterStatus status);

struct FilterVerdict {
  FilterStatus status = FilterStatus::Pass;
  std::string reason;  // non-empty whenever status != Pass
};

struct CharSpan {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive

  bool contains(std::size_t offset) const { return offset >= begin && offset < end; }
  bool operator==(const CharSpan&) const = default;
};

struct Clause {
  CharSpan span;  // character range within the normalized sentence text
  std::optional<std::string> connective_before;
  std::size_t first_token = 0;  // token index range [first_token, last_token)
  std::size_t last_token = 0;
  bool negated = false;
  bool quoted = false;  // entire clause lies inside a quoted span
};

enum class SentenceKind { Simple, Compound };

struct Sentence {
  std::size_t index = 0;
  std::string raw;   // slice of the original message, trimmed
  std::string text;  // normalized (specials stripped)
  SentenceKind kind = SentenceKind::Simple;
  std::vector<Clause> clauses;
  FilterVerdict verdict;
  std::vector<postag::Token> tokens;     // offsets into `text`
  std::vector<CharSpan> quoted_spans;    // spans within `text`
  std::vector<CharSpan> raw_quoted_spans;  // spans within `raw`

  bool token_quoted(std::size_t token_index) const;
};

class AbbreviationList {
 public:
  static AbbreviationList load(const std::filesystem::path& path);
  static AbbreviationList parse(std::string_view text);
  static AbbreviationList defaults();

  bool contains(std::string_view word_without_dot) const;
  std::size_t size() const { return words_.size(); }

 private:
  std::set<std::string> words_;  // lowercased
};

// Terminators are '.', '!', '?', and newline; terminators inside double
// quotes do not split; abbreviation periods and decimal points do not split.
std::vector<Sentence> split_sentences(const RawMessage& message,
                                      const AbbreviationList& abbreviations);

// Removes characters outside {letters, digits, whitespace, apostrophe,
// hyphen, comma}. Quotation marks are removed here; quoted spans must be
// marked beforehand.
std::string strip_specials(std::string_view sentence_text);

// Maximal spans between matching double quotes; an unmatched opening quote
// marks to the end of the sentence. Returned spans exclude the quote marks.
std::vector<CharSpan> mark_quoted_spans(std::string_view sentence_text);

// End-of-sentence '?', a sentence-initial wh-word, or a sentence-initial
// auxiliary/modal followed by a pronoun.
bool classify_question(const Sentence& sentence);

// True when the first verb group is governed by a future/irrealis marker
// (will, shall, going to, might, may, could + base). "would"/"'d" is
// past-habitual, not a marker.
bool detect_uncertain(const Sentence& sentence);

// Clause-scoped negation: not/n't/never/nobody/nothing before or inside the
// clause's first verb group, or "no" determining a following nominal.
bool detect_negation(const Sentence& sentence, const Clause& clause);

// Full filter pipeline: segmentation, quote marking, normalization,
// tokenization, tagging, clause analysis, and one verdict per sentence.
std::vector<Sentence> run_filters(const RawMessage& message,
                                  const AbbreviationList& abbreviations,
                                  const postag::TagLexicon& lexicon);

}  // namespace homeguard::text
