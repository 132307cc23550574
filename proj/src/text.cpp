#include "homeguard/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "homeguard/errors.hpp"

namespace homeguard::text {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

bool retained_char(char c) {
  unsigned char u = static_cast<unsigned char>(c);
  if (u >= 0x80) return false;  // ASCII subset; multibyte sequences are specials
  return std::isalnum(u) || std::isspace(u) || c == '\'' || c == '-' || c == ',';
}

constexpr std::array<std::string_view, 9> kWhWords = {
    "what", "who", "whom", "whose", "which", "when", "where", "why", "how"};

constexpr std::array<std::string_view, 21> kQuestionAux = {
    "do",  "does", "did",  "is",   "are",    "was",  "were",  "am",   "can", "could",
    "will", "would", "shall", "should", "may", "might", "must", "have", "has", "had", "wo"};

constexpr std::array<std::string_view, 5> kFutureModals = {"will", "shall", "might", "may",
                                                           "could"};

constexpr std::array<std::string_view, 5> kSubordinators = {"when", "after", "because", "while",
                                                            "if"};

bool is_wh_word(std::string_view lower) {
  return std::find(kWhWords.begin(), kWhWords.end(), lower) != kWhWords.end();
}

bool verbish(postag::PosTag tag) { return postag::is_verb_tag(tag) || tag == postag::PosTag::MD; }

bool finite_verbish(postag::PosTag tag) {
  using postag::PosTag;
  return tag == PosTag::VBD || tag == PosTag::VBP || tag == PosTag::VBZ || tag == PosTag::MD;
}

// First maximal verb run in [first, last); adverbs may sit inside a run.
struct VerbRun {
  std::size_t begin = 0;
  std::size_t end = 0;  // exclusive token index
  bool found = false;
};

VerbRun first_verb_run(const std::vector<postag::Token>& tokens, std::size_t first,
                       std::size_t last) {
  VerbRun run;
  for (std::size_t i = first; i < last; ++i) {
    if (verbish(tokens[i].tag)) {
      run.begin = i;
      std::size_t j = i + 1;
      std::size_t end = i + 1;
      while (j < last) {
        if (verbish(tokens[j].tag)) {
          end = j + 1;
          ++j;
        } else if (tokens[j].tag == postag::PosTag::RB && j + 1 < last &&
                   verbish(tokens[j + 1].tag)) {
          j += 2;
          end = j;
        } else {
          break;
        }
      }
      run.end = end;
      run.found = true;
      return run;
    }
  }
  return run;
}

}  // namespace

std::string_view filter_status_name(FilterStatus status) {
  switch (status) {
    case FilterStatus::Pass: return "Pass";
    case FilterStatus::FilteredQuestion: return "FilteredQuestion";
    case FilterStatus::FilteredUncertain: return "FilteredUncertain";
    case FilterStatus::FilteredNegative: return "FilteredNegative";
    case FilterStatus::Empty: return "Empty";
  }
  return "Pass";
}

bool Sentence::token_quoted(std::size_t token_index) const {
  if (token_index >= tokens.size()) return false;
  const std::size_t at = tokens[token_index].start;
  return std::any_of(quoted_spans.begin(), quoted_spans.end(),
                     [at](const CharSpan& s) { return s.contains(at); });
}

// ---------------------------------------------------------------------------
// Abbreviations

AbbreviationList AbbreviationList::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw AssetError("cannot open abbreviation list: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

AbbreviationList AbbreviationList::parse(std::string_view text) {
  AbbreviationList list;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(begin, end - begin));
    begin = end + 1;
    if (line.empty() || line.front() == '#') {
      if (end == text.size()) break;
      continue;
    }
    std::string word = postag::lowercase(line);
    if (!word.empty() && word.back() == '.') word.pop_back();
    list.words_.insert(std::move(word));
    if (end == text.size()) break;
  }
  return list;
}

AbbreviationList AbbreviationList::defaults() {
  return parse("mr\nmrs\nms\ndr\nprof\nst\njr\nsr\nvs\netc\napprox\ndept\nfig\nal\n");
}

bool AbbreviationList::contains(std::string_view word_without_dot) const {
  return words_.contains(postag::lowercase(word_without_dot));
}

// ---------------------------------------------------------------------------
// Segmentation

std::vector<Sentence> split_sentences(const RawMessage& message,
                                      const AbbreviationList& abbreviations) {
  const std::string& text = message.text;
  if (trim(text).empty()) {
    throw EmptyMessageError();
  }

  std::vector<Sentence> sentences;
  auto emit = [&](std::size_t from, std::size_t to) {
    std::string_view slice = trim(std::string_view(text).substr(from, to - from));
    if (slice.empty()) return;
    Sentence s;
    s.index = sentences.size();
    s.raw = std::string(slice);
    sentences.push_back(std::move(s));
  };

  bool in_quote = false;
  std::size_t start = 0;
  std::size_t i = 0;
  while (i < text.size()) {
    char c = text[i];
    if (c == '"') {
      in_quote = !in_quote;
      ++i;
      continue;
    }
    const bool terminator = (c == '.' || c == '!' || c == '?' || c == '\n');
    if (!terminator || in_quote) {
      ++i;
      continue;
    }
    if (c == '.') {
      // Decimal point.
      if (i > 0 && i + 1 < text.size() && std::isdigit(static_cast<unsigned char>(text[i - 1])) &&
          std::isdigit(static_cast<unsigned char>(text[i + 1]))) {
        ++i;
        continue;
      }
      // Abbreviation period.
      std::size_t w = i;
      while (w > start && std::isalpha(static_cast<unsigned char>(text[w - 1]))) --w;
      if (w < i && abbreviations.contains(std::string_view(text).substr(w, i - w))) {
        ++i;
        continue;
      }
    }
    // Consume the whole terminator run as a single boundary.
    std::size_t j = i;
    while (j < text.size() &&
           (text[j] == '.' || text[j] == '!' || text[j] == '?' || text[j] == '\n')) {
      ++j;
    }
    emit(start, j);
    start = j;
    i = j;
  }
  emit(start, text.size());

  if (sentences.empty()) {
    // Non-whitespace input that was all terminators still yields one sentence.
    Sentence s;
    s.index = 0;
    s.raw = std::string(trim(text));
    sentences.push_back(std::move(s));
  }
  return sentences;
}

namespace {

struct StrippedText {
  std::string text;
  std::vector<std::size_t> raw_index;  // raw_index[i] = origin of text[i]
};

StrippedText strip_specials_mapped(std::string_view raw) {
  StrippedText out;
  out.text.reserve(raw.size());
  out.raw_index.reserve(raw.size());
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (retained_char(raw[i])) {
      out.text += raw[i];
      out.raw_index.push_back(i);
    }
  }
  return out;
}

}  // namespace

std::string strip_specials(std::string_view sentence_text) {
  return strip_specials_mapped(sentence_text).text;
}

std::vector<CharSpan> mark_quoted_spans(std::string_view sentence_text) {
  std::vector<CharSpan> spans;
  std::optional<std::size_t> open;
  for (std::size_t i = 0; i < sentence_text.size(); ++i) {
    if (sentence_text[i] != '"') continue;
    if (!open) {
      open = i + 1;
    } else {
      if (i > *open) spans.push_back(CharSpan{*open, i});
      open.reset();
    }
  }
  if (open && *open < sentence_text.size()) {
    spans.push_back(CharSpan{*open, sentence_text.size()});
  }
  return spans;
}

// ---------------------------------------------------------------------------
// Filters

bool classify_question(const Sentence& sentence) {
  std::string_view raw = sentence.raw;
  while (!raw.empty() && (is_space(raw.back()) || raw.back() == '"' || raw.back() == '\'' ||
                          raw.back() == ')' || raw.back() == '.')) {
    raw.remove_suffix(1);
  }
  if (!raw.empty() && raw.back() == '?') return true;
  if (sentence.tokens.empty()) return false;
  const std::string first = postag::lowercase(sentence.tokens[0].surface);
  if (is_wh_word(first)) return true;
  if (sentence.tokens.size() >= 2 &&
      std::find(kQuestionAux.begin(), kQuestionAux.end(), first) != kQuestionAux.end() &&
      sentence.tokens[1].tag == postag::PosTag::PRP) {
    return true;
  }
  return false;
}

bool detect_uncertain(const Sentence& sentence) {
  const auto& tokens = sentence.tokens;
  VerbRun run = first_verb_run(tokens, 0, tokens.size());
  if (!run.found) return false;
  for (std::size_t i = run.begin; i < run.end; ++i) {
    if (tokens[i].tag != postag::PosTag::MD) continue;
    const std::string lower = postag::lowercase(tokens[i].surface);
    if (std::find(kFutureModals.begin(), kFutureModals.end(), lower) != kFutureModals.end()) {
      return true;
    }
  }
  // "going to" + base verb.
  for (std::size_t i = run.begin; i < run.end; ++i) {
    if (postag::lowercase(tokens[i].surface) == "going") {
      if (i + 2 < tokens.size() && tokens[i + 1].tag == postag::PosTag::TO &&
          tokens[i + 2].tag == postag::PosTag::VB) {
        return true;
      }
    }
  }
  return false;
}

bool detect_negation(const Sentence& sentence, const Clause& clause) {
  const auto& tokens = sentence.tokens;
  const std::size_t first = clause.first_token;
  const std::size_t last = clause.last_token;
  VerbRun run = first_verb_run(tokens, first, last);
  const std::size_t cue_limit = run.found ? run.end : last;

  static const std::array<std::string_view, 6> kCues = {"not",    "n't",     "never",
                                                        "nobody", "nothing", "noone"};
  for (std::size_t i = first; i < cue_limit; ++i) {
    const std::string lower = postag::lowercase(tokens[i].surface);
    if (std::find(kCues.begin(), kCues.end(), lower) != kCues.end()) return true;
  }
  // "no" determining a nominal ("gave me no food", "no one would see").
  for (std::size_t i = first; i + 1 < last; ++i) {
    if (postag::lowercase(tokens[i].surface) != "no") continue;
    postag::PosTag next = tokens[i + 1].tag;
    if (postag::is_noun_tag(next) || next == postag::PosTag::CD ||
        next == postag::PosTag::PRP) {
      return true;
    }
  }
  return false;
}

// ---------------------------------------------------------------------------
// Clause segmentation

namespace {

bool is_clause_candidate(const postag::Token& token) {
  const std::string lower = postag::lowercase(token.surface);
  if (token.surface == ",") return true;
  if (token.tag == postag::PosTag::CC &&
      (lower == "and" || lower == "but" || lower == "or" || lower == "so")) {
    return true;
  }
  if (std::find(kSubordinators.begin(), kSubordinators.end(), lower) != kSubordinators.end()) {
    return true;
  }
  if (lower == "that" && token.tag == postag::PosTag::IN) return true;
  return false;
}

void segment_clauses(Sentence& sentence) {
  const auto& tokens = sentence.tokens;
  std::vector<std::size_t> starts{0};
  std::vector<std::optional<std::string>> connectives{std::nullopt};

  std::size_t clause_start = 0;
  for (std::size_t p = 0; p < tokens.size(); ++p) {
    if (!is_clause_candidate(tokens[p])) continue;
    const bool comma = tokens[p].surface == ",";
    // A comma immediately followed by a connective defers to the connective.
    if (comma && p + 1 < tokens.size() && is_clause_candidate(tokens[p + 1]) &&
        tokens[p + 1].surface != ",") {
      continue;
    }

    bool left_verb = false;
    for (std::size_t i = clause_start; i < p; ++i) {
      if (verbish(tokens[i].tag)) {
        left_verb = true;
        break;
      }
    }
    if (!left_verb) continue;

    // Right window: skip consecutive candidates, stop at the next one.
    std::size_t r = p + 1;
    while (r < tokens.size() && is_clause_candidate(tokens[r])) ++r;
    bool right_verb = false;
    for (std::size_t i = r; i < tokens.size() && !is_clause_candidate(tokens[i]); ++i) {
      postag::PosTag t = tokens[i].tag;
      if (comma ? finite_verbish(t) : verbish(t)) {
        right_verb = true;
        break;
      }
    }
    if (!right_verb) continue;

    const std::size_t new_start = comma ? p + 1 : p;
    if (new_start >= tokens.size() || new_start <= clause_start) continue;
    starts.push_back(new_start);
    connectives.push_back(comma ? std::nullopt
                                : std::make_optional(postag::lowercase(tokens[p].surface)));
    clause_start = new_start;
  }

  sentence.clauses.clear();
  for (std::size_t c = 0; c < starts.size(); ++c) {
    Clause clause;
    clause.first_token = starts[c];
    clause.last_token = c + 1 < starts.size() ? starts[c + 1] : tokens.size();
    clause.connective_before = connectives[c];
    if (clause.first_token < clause.last_token) {
      const auto& first = tokens[clause.first_token];
      const auto& last = tokens[clause.last_token - 1];
      clause.span = CharSpan{first.start, last.start + last.surface.size()};
    }
    clause.quoted = !sentence.quoted_spans.empty() && clause.first_token < clause.last_token;
    for (std::size_t i = clause.first_token; clause.quoted && i < clause.last_token; ++i) {
      if (!sentence.token_quoted(i)) clause.quoted = false;
    }
    sentence.clauses.push_back(std::move(clause));
  }
  if (sentence.clauses.empty()) {
    Clause clause;
    clause.span = CharSpan{0, sentence.text.size()};
    clause.first_token = 0;
    clause.last_token = tokens.size();
    sentence.clauses.push_back(std::move(clause));
  }
  for (Clause& clause : sentence.clauses) {
    clause.negated = detect_negation(sentence, clause);
  }
  sentence.kind = sentence.clauses.size() >= 2 ? SentenceKind::Compound : SentenceKind::Simple;
}

}  // namespace

std::vector<Sentence> run_filters(const RawMessage& message,
                                  const AbbreviationList& abbreviations,
                                  const postag::TagLexicon& lexicon) {
  std::vector<Sentence> sentences = split_sentences(message, abbreviations);
  for (Sentence& sentence : sentences) {
    sentence.raw_quoted_spans = mark_quoted_spans(sentence.raw);
    StrippedText stripped = strip_specials_mapped(sentence.raw);
    sentence.text = std::move(stripped.text);

    // Map raw quote spans into normalized coordinates.
    for (const CharSpan& raw_span : sentence.raw_quoted_spans) {
      const auto& map = stripped.raw_index;
      auto lo = std::lower_bound(map.begin(), map.end(), raw_span.begin);
      auto hi = std::lower_bound(map.begin(), map.end(), raw_span.end);
      if (lo != hi) {
        sentence.quoted_spans.push_back(
            CharSpan{static_cast<std::size_t>(lo - map.begin()),
                     static_cast<std::size_t>(hi - map.begin())});
      }
    }

    sentence.tokens = postag::tokenize(sentence.text);
    postag::tag_sentence(sentence.tokens, lexicon);
    segment_clauses(sentence);

    bool has_word = std::any_of(sentence.tokens.begin(), sentence.tokens.end(),
                                [](const postag::Token& t) { return t.surface != ","; });
    if (!has_word) {
      sentence.verdict = {FilterStatus::Empty, "no word content"};
    } else if (classify_question(sentence)) {
      sentence.verdict = {FilterStatus::FilteredQuestion, "question-type sentence"};
    } else if (detect_uncertain(sentence)) {
      sentence.verdict = {FilterStatus::FilteredUncertain,
                          "future or uncertain main verb group"};
    } else if (std::all_of(sentence.clauses.begin(), sentence.clauses.end(),
                           [](const Clause& c) { return c.negated; })) {
      sentence.verdict = {FilterStatus::FilteredNegative, "all clauses negated"};
    } else {
      sentence.verdict = {FilterStatus::Pass, ""};
    }
  }
  return sentences;
}

}  // namespace homeguard::text
