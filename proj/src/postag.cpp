#include "homeguard/postag.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "homeguard/errors.hpp"

namespace homeguard::postag {

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 22> kTagNames{{
    {PosTag::NN, "NN"},   {PosTag::NNS, "NNS"}, {PosTag::NNP, "NNP"},
    {PosTag::PRP, "PRP"}, {PosTag::PRPS, "PRP$"},
    {PosTag::VB, "VB"},   {PosTag::VBD, "VBD"}, {PosTag::VBG, "VBG"},
    {PosTag::VBN, "VBN"}, {PosTag::VBP, "VBP"}, {PosTag::VBZ, "VBZ"},
    {PosTag::MD, "MD"},   {PosTag::JJ, "JJ"},   {PosTag::RB, "RB"},
    {PosTag::IN, "IN"},   {PosTag::CC, "CC"},   {PosTag::DT, "DT"},
    {PosTag::TO, "TO"},   {PosTag::CD, "CD"},   {PosTag::UH, "UH"},
    {PosTag::SYM, "SYM"}, {PosTag::OTHER, "OTHER"},
}};

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '\'' || c == '-';
}

}  // namespace

std::string_view tag_name(PosTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "OTHER";
}

std::optional<PosTag> tag_from_name(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  return std::nullopt;
}

std::string lowercase(std::string_view word) {
  std::string out(word);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

TagLexicon TagLexicon::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw AssetError("cannot open lexicon: " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

TagLexicon TagLexicon::parse(std::string_view text) {
  TagLexicon lex;
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(begin, end - begin);
    ++line_no;
    begin = end + 1;
    if (end == text.size() && line.empty()) break;

    if (line.empty() || line.front() == '#') continue;
    std::size_t tab = line.find('\t');
    if (tab == std::string_view::npos) {
      throw LexiconFormatError(line_no, "missing tag column");
    }
    std::string word = lowercase(line.substr(0, tab));
    std::string_view tags = line.substr(tab + 1);
    if (word.empty()) {
      throw LexiconFormatError(line_no, "empty word");
    }
    auto& ranked = lex.entries_[word];
    std::size_t t0 = 0;
    bool any = false;
    while (t0 <= tags.size()) {
      std::size_t t1 = tags.find(',', t0);
      if (t1 == std::string_view::npos) t1 = tags.size();
      std::string_view name = tags.substr(t0, t1 - t0);
      t0 = t1 + 1;
      if (name.empty()) {
        if (t0 > tags.size()) break;
        continue;
      }
      auto tag = tag_from_name(name);
      if (!tag) {
        throw LexiconFormatError(line_no, "unknown tag: " + std::string(name));
      }
      // Duplicate word lines merge in file order, first listing wins rank.
      if (std::find(ranked.begin(), ranked.end(), *tag) == ranked.end()) {
        ranked.push_back(*tag);
      }
      any = true;
      if (t1 == tags.size()) break;
    }
    if (!any) {
      throw LexiconFormatError(line_no, "no tags listed");
    }
  }
  return lex;
}

const std::vector<PosTag>* TagLexicon::lookup(std::string_view word) const {
  auto it = entries_.find(lowercase(word));
  return it == entries_.end() ? nullptr : &it->second;
}

bool TagLexicon::has_tag(std::string_view word, PosTag tag) const {
  const auto* tags = lookup(word);
  return tags != nullptr && std::find(tags->begin(), tags->end(), tag) != tags->end();
}

// ---------------------------------------------------------------------------
// Tokenizer

namespace {

const std::array<std::string_view, 7> kClitics = {"n't", "'ll", "'re", "'ve", "'d", "'s", "'m"};

void push_word(std::vector<Token>& out, std::string_view word, std::size_t start) {
  // Trim hyphens left over from dash punctuation ("club- and").
  while (!word.empty() && (word.front() == '-' || word.front() == '\'')) {
    word.remove_prefix(1);
    ++start;
  }
  while (!word.empty() && (word.back() == '-' || word.back() == '\'')) {
    word.remove_suffix(1);
  }
  if (word.empty()) return;

  // Detach clitics recursively from the end ("didn't" -> "did" + "n't").
  for (std::string_view clitic : kClitics) {
    if (word.size() > clitic.size() && word.ends_with(clitic)) {
      // Keep possessive-less words like "don't" splitting at the right spot.
      std::string_view stem = word.substr(0, word.size() - clitic.size());
      if (!stem.empty() && stem.back() != '\'') {
        push_word(out, stem, start);
        out.push_back(Token{std::string(clitic), start + stem.size()});
        return;
      }
    }
  }
  out.push_back(Token{std::string(word), start});
}

}  // namespace

std::vector<Token> tokenize(std::string_view sentence_text) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < sentence_text.size()) {
    char c = sentence_text[i];
    if (c == ',') {
      out.push_back(Token{",", i});
      ++i;
      continue;
    }
    if (!is_word_char(c)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    while (j < sentence_text.size() && is_word_char(sentence_text[j])) ++j;
    push_word(out, sentence_text.substr(i, j - i), i);
    i = j;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Tagger

namespace {

bool is_capitalized(std::string_view word) {
  return !word.empty() && std::isupper(static_cast<unsigned char>(word.front()));
}

bool all_digits(std::string_view word) {
  if (word.empty()) return false;
  for (char c : word) {
    if (!std::isdigit(static_cast<unsigned char>(c)) && c != '.' && c != ',') return false;
  }
  return true;
}

PosTag suffix_guess(const std::string& lower, const TagLexicon& lexicon, bool cap_non_initial) {
  if (all_digits(lower)) return PosTag::CD;
  if (cap_non_initial) return PosTag::NNP;
  auto ends = [&](std::string_view suffix) { return lower.ends_with(suffix); };
  if (ends("ing") && lower.size() > 4) return PosTag::VBG;
  if (ends("ed") && lower.size() > 3) return PosTag::VBD;
  if (ends("ly") && lower.size() > 3) return PosTag::RB;
  if (ends("ies") && lower.size() > 4) return PosTag::NNS;
  if (ends("s") && !ends("ss") && lower.size() > 2) {
    std::string stem = lower.substr(0, lower.size() - 1);
    if (lexicon.has_tag(stem, PosTag::VB)) return PosTag::VBZ;
    std::string estem = lower.ends_with("es") ? lower.substr(0, lower.size() - 2) : "";
    if (!estem.empty() && lexicon.has_tag(estem, PosTag::VB)) return PosTag::VBZ;
    return PosTag::NNS;
  }
  return PosTag::NN;
}

bool is_aux_have_or_be(const std::string& lower) {
  static const std::array<std::string_view, 14> kAux = {
      "have", "has", "had", "'ve", "is", "are", "was", "were",
      "am",   "be",  "been", "being", "'s", "'re"};
  return std::find(kAux.begin(), kAux.end(), lower) != kAux.end();
}

std::optional<PosTag> first_verb_reading(const std::vector<PosTag>& tags) {
  for (PosTag t : tags) {
    if (is_verb_tag(t)) return t;
  }
  return std::nullopt;
}

std::optional<PosTag> first_noun_reading(const std::vector<PosTag>& tags) {
  for (PosTag t : tags) {
    if (t == PosTag::NN || t == PosTag::NNS) return t;
  }
  return std::nullopt;
}

}  // namespace

void tag_sentence(std::vector<Token>& tokens, const TagLexicon& lexicon) {
  // Pass 1: lexicon first-rank, then suffix rules for unknowns.
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& tok = tokens[i];
    if (tok.surface == ",") {
      tok.tag = PosTag::SYM;
      continue;
    }
    const std::string lower = lowercase(tok.surface);
    if (const auto* tags = lexicon.lookup(lower)) {
      tok.tag = tags->front();
      continue;
    }
    tok.tag = suffix_guess(lower, lexicon, i > 0 && is_capitalized(tok.surface));
  }

  // Pass 2: contextual repairs, left to right, at most one per token.
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    Token& tok = tokens[i];
    const std::string lower = lowercase(tok.surface);
    const auto* readings = lexicon.lookup(lower);

    auto prev_skipping_rb = [&](std::size_t at) -> const Token* {
      while (at > 0) {
        const Token& p = tokens[at - 1];
        if (p.tag == PosTag::RB) {
          --at;
          continue;
        }
        return &p;
      }
      return nullptr;
    };
    const Token* prev = i > 0 ? &tokens[i - 1] : nullptr;
    const Token* prev_rb = prev_skipping_rb(i);

    // R1: determiner forces a noun reading ("a bit", "the fight").
    if (prev != nullptr && prev->tag == PosTag::DT && is_verb_tag(tok.tag) &&
        readings != nullptr) {
      if (auto noun = first_noun_reading(*readings)) {
        tok.tag = *noun;
        continue;
      }
    }
    // R2: infinitival "to" forces a base verb ("to kill").
    if (prev != nullptr && prev->tag == PosTag::TO && tok.tag != PosTag::VB &&
        readings != nullptr && lexicon.has_tag(lower, PosTag::VB)) {
      tok.tag = PosTag::VB;
      continue;
    }
    // R3: modal governs a base verb ("'d flip", "wouldn't stop").
    if (prev_rb != nullptr && prev_rb->tag == PosTag::MD && !is_verb_tag(tok.tag) &&
        lexicon.has_tag(lower, PosTag::VB)) {
      tok.tag = PosTag::VB;
      continue;
    }
    // R4: perfect/passive auxiliary selects the participle ("had attacked").
    if (prev_rb != nullptr && is_aux_have_or_be(lowercase(prev_rb->surface)) &&
        tok.tag == PosTag::VBD && lexicon.has_tag(lower, PosTag::VBN)) {
      tok.tag = PosTag::VBN;
      continue;
    }
    // R5: subject pronoun prefers a verb reading ("you just hit me").
    if (prev_rb != nullptr && prev_rb->tag == PosTag::PRP && !is_verb_tag(tok.tag) &&
        tok.tag != PosTag::MD && readings != nullptr) {
      if (auto verb = first_verb_reading(*readings)) {
        tok.tag = *verb;
        continue;
      }
    }
    // R6: "her" is possessive before a nominal, else objective.
    if (lower == "her") {
      bool before_nominal = false;
      if (i + 1 < tokens.size()) {
        PosTag next = tokens[i + 1].tag;
        before_nominal = is_noun_tag(next) || next == PosTag::JJ;
      }
      tok.tag = before_nominal ? PosTag::PRPS : PosTag::PRP;
      continue;
    }
    // R7: "that" is a determiner before a nominal, else a complementizer.
    if (lower == "that") {
      bool before_nominal = false;
      if (i + 1 < tokens.size()) {
        PosTag next = tokens[i + 1].tag;
        before_nominal = is_noun_tag(next) || next == PosTag::JJ;
      }
      tok.tag = before_nominal ? PosTag::DT : PosTag::IN;
      continue;
    }
  }
}

}  // namespace homeguard::postag
