#include "homeguard/actions.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <sstream>

#include "homeguard/errors.hpp"

namespace homeguard::actions {

using postag::PosTag;
using postag::Token;

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Shared line-by-line TSV walk for the small two-column tables.
template <typename Fn>
void for_each_tsv_row(std::string_view text, std::string_view what, Fn&& fn) {
  std::size_t line_no = 0;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(begin, end - begin));
    ++line_no;
    bool last = end == text.size();
    begin = end + 1;
    if (!line.empty() && line.front() != '#') {
      std::size_t tab = line.find('\t');
      if (tab == std::string_view::npos) {
        throw AssetError(std::string(what) + " line " + std::to_string(line_no) +
                         ": missing tab separator");
      }
      fn(trim(line.substr(0, tab)), trim(line.substr(tab + 1)), line_no);
    }
    if (last) break;
  }
}

std::string read_file(const std::filesystem::path& path, std::string_view what) {
  std::ifstream in(path);
  if (!in) {
    throw AssetError("cannot open " + std::string(what) + ": " + path.string());
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

bool is_aux_form(const std::string& lower) {
  static const std::array<std::string_view, 20> kAux = {
      "be",  "am",  "is",  "are", "was",  "were", "been", "being", "'s",  "'re",
      "'m",  "have", "has", "had", "'ve", "do",   "does", "did",   "'d",  "wo"};
  return std::find(kAux.begin(), kAux.end(), lower) != kAux.end();
}

bool subject_capable(const Token& token) {
  if (postag::is_noun_tag(token.tag)) return true;
  if (token.tag != PosTag::PRP) return false;
  static const std::array<std::string_view, 7> kSubjects = {"i",  "we", "you", "he",
                                                            "she", "it", "they"};
  const std::string lower = postag::lowercase(token.surface);
  return std::find(kSubjects.begin(), kSubjects.end(), lower) != kSubjects.end();
}

bool ends_with_double_consonant(std::string_view stem) {
  if (stem.size() < 2) return false;
  char a = stem[stem.size() - 2];
  char b = stem[stem.size() - 1];
  if (a != b) return false;
  return std::string_view("aeiou").find(b) == std::string_view::npos;
}

}  // namespace

std::string_view subject_name(Subject s) {
  switch (s) {
    case Subject::Reporter: return "Reporter";
    case Subject::Other: return "Other";
    case Subject::Unknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view realization_name(Realization r) {
  switch (r) {
    case Realization::Realized: return "Realized";
    case Realization::Attempted: return "Attempted";
    case Realization::Unrealized: return "Unrealized";
  }
  return "Unrealized";
}

// ---------------------------------------------------------------------------
// LemmaRules

LemmaRules LemmaRules::load(const std::filesystem::path& path) {
  return parse(read_file(path, "lemma exceptions"));
}

LemmaRules LemmaRules::parse(std::string_view text) {
  LemmaRules rules;
  for_each_tsv_row(text, "lemma exceptions",
                   [&](std::string_view surface, std::string_view lemma, std::size_t) {
                     rules.exceptions_[postag::lowercase(surface)] = postag::lowercase(lemma);
                   });
  return rules;
}

std::string LemmaRules::lemmatize(std::string_view word, postag::PosTag /*tag*/,
                                  const postag::TagLexicon& lexicon) const {
  const std::string w = postag::lowercase(word);
  if (auto it = exceptions_.find(w); it != exceptions_.end()) {
    return it->second;
  }
  auto known_verb = [&](const std::string& candidate) {
    return lexicon.has_tag(candidate, PosTag::VB);
  };
  if (known_verb(w)) return w;

  auto ends = [&](std::string_view suffix) { return w.size() > suffix.size() && w.ends_with(suffix); };

  if (ends("ied")) {
    std::string minus_d = w.substr(0, w.size() - 1);
    if (known_verb(minus_d)) return minus_d;  // untied -> untie
    return w.substr(0, w.size() - 3) + "y";   // carried -> carry
  }
  if (ends("ies")) {
    std::string minus_s = w.substr(0, w.size() - 1);
    if (known_verb(minus_s)) return minus_s;  // ties -> tie
    return w.substr(0, w.size() - 3) + "y";   // cries -> cry
  }
  if (ends("ing") && w.size() > 4) {
    std::string stem = w.substr(0, w.size() - 3);
    if (known_verb(stem)) return stem;            // attacking -> attack
    if (known_verb(stem + "e")) return stem + "e";  // taking -> take
    if (ends_with_double_consonant(stem)) {
      std::string undoubled = stem.substr(0, stem.size() - 1);
      if (known_verb(undoubled)) return undoubled;  // hitting -> hit
      char c = stem.back();
      if (c != 'l' && c != 's' && c != 'z') return undoubled;
    }
    return stem;
  }
  if (ends("ed")) {
    std::string minus_d = w.substr(0, w.size() - 1);
    if (known_verb(minus_d)) return minus_d;  // raped -> rape
    std::string stem = w.substr(0, w.size() - 2);
    if (known_verb(stem)) return stem;  // attacked -> attack
    if (ends_with_double_consonant(stem)) {
      std::string undoubled = stem.substr(0, stem.size() - 1);
      if (known_verb(undoubled)) return undoubled;  // stabbed -> stab
      char c = stem.back();
      if (c != 'l' && c != 's' && c != 'z') return undoubled;
    }
    return stem;
  }
  if (ends("es")) {
    std::string stem = w.substr(0, w.size() - 2);
    bool sibilant = stem.ends_with("s") || stem.ends_with("x") || stem.ends_with("z") ||
                    stem.ends_with("ch") || stem.ends_with("sh");
    if (sibilant) return stem;  // pushes -> push
    std::string minus_s = w.substr(0, w.size() - 1);
    if (known_verb(minus_s)) return minus_s;  // gives -> give
    return minus_s;
  }
  if (ends("s") && !w.ends_with("ss")) {
    return w.substr(0, w.size() - 1);  // hits -> hit
  }
  return w;
}

// ---------------------------------------------------------------------------
// SynsetTable

SynsetTable SynsetTable::load(const std::filesystem::path& path) {
  return parse(read_file(path, "synset table"));
}

SynsetTable SynsetTable::parse(std::string_view text) {
  SynsetTable table;
  for_each_tsv_row(text, "synset table",
                   [&](std::string_view surface, std::string_view canonical, std::size_t line) {
                     auto [it, inserted] = table.map_.emplace(postag::lowercase(surface),
                                                              postag::lowercase(canonical));
                     if (!inserted && it->second != postag::lowercase(canonical)) {
                       throw AssetError("synset table line " + std::to_string(line) +
                                        ": conflicting mapping for " + std::string(surface));
                     }
                   });
  // Canonicals must be closed under the map.
  for (const auto& [surface, canonical] : table.map_) {
    auto it = table.map_.find(canonical);
    if (it != table.map_.end() && it->second != canonical) {
      throw AssetError("synset table: canonical '" + canonical + "' is not a fixed point");
    }
  }
  return table;
}

std::string SynsetTable::canonical(std::string_view lemma) const {
  auto it = map_.find(postag::lowercase(lemma));
  return it == map_.end() ? postag::lowercase(lemma) : it->second;
}

bool SynsetTable::known(std::string_view lemma) const {
  return map_.contains(postag::lowercase(lemma));
}

std::set<std::string> SynsetTable::canonicals() const {
  std::set<std::string> out;
  for (const auto& [_, canonical] : map_) out.insert(canonical);
  return out;
}

// ---------------------------------------------------------------------------
// PhrasalVerbs

PhrasalVerbs PhrasalVerbs::load(const std::filesystem::path& path) {
  return parse(read_file(path, "phrasal verb list"));
}

PhrasalVerbs PhrasalVerbs::parse(std::string_view text) {
  PhrasalVerbs out;
  std::size_t begin = 0;
  while (begin <= text.size()) {
    std::size_t end = text.find('\n', begin);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = trim(text.substr(begin, end - begin));
    bool last = end == text.size();
    begin = end + 1;
    if (!line.empty() && line.front() != '#') {
      out.pairs_.insert(postag::lowercase(line));
    }
    if (last) break;
  }
  return out;
}

bool PhrasalVerbs::contains(std::string_view verb_lemma, std::string_view particle) const {
  return pairs_.contains(postag::lowercase(verb_lemma) + " " + postag::lowercase(particle));
}

// ---------------------------------------------------------------------------
// CatenativePolicy

CatenativePolicy CatenativePolicy::load(const std::filesystem::path& path) {
  return parse(read_file(path, "catenative policy"));
}

CatenativePolicy CatenativePolicy::parse(std::string_view text) {
  CatenativePolicy policy;
  for_each_tsv_row(text, "catenative policy",
                   [&](std::string_view lemma, std::string_view action, std::size_t line) {
                     CatenativeAction a;
                     if (action == "Promote") a = CatenativeAction::Promote;
                     else if (action == "Demote") a = CatenativeAction::Demote;
                     else if (action == "Block") a = CatenativeAction::Block;
                     else
                       throw AssetError("catenative policy line " + std::to_string(line) +
                                        ": unknown action " + std::string(action));
                     policy.map_[postag::lowercase(lemma)] = a;
                   });
  return policy;
}

CatenativePolicy CatenativePolicy::defaults() {
  return parse(
      "try\tPromote\nattempt\tPromote\nstart\tPromote\nbegin\tPromote\nkeep\tPromote\n"
      "continue\tPromote\nthreaten\tDemote\nstop\tBlock\nprevent\tBlock\nwant\tBlock\n"
      "wish\tBlock\nhope\tBlock\n");
}

CatenativeAction CatenativePolicy::action(std::string_view matrix_lemma) const {
  auto it = map_.find(postag::lowercase(matrix_lemma));
  return it == map_.end() ? CatenativeAction::Promote : it->second;
}

bool CatenativePolicy::attempted(std::string_view matrix_lemma) const {
  const std::string lower = postag::lowercase(matrix_lemma);
  return lower == "try" || lower == "attempt";
}

// ---------------------------------------------------------------------------
// Verb group extraction

namespace {

bool verb_or_modal(PosTag tag) { return postag::is_verb_tag(tag) || tag == PosTag::MD; }

constexpr std::array<std::string_view, 3> kParticles = {"over", "up", "out"};

bool particle_candidate(const Token& token) {
  if (token.tag != PosTag::IN && token.tag != PosTag::RB) return false;
  const std::string lower = postag::lowercase(token.surface);
  return std::find(kParticles.begin(), kParticles.end(), lower) != kParticles.end();
}

std::string effective_lemma(const text::Sentence& sentence, const VerbGroup& group,
                            const ExtractorTables& tables) {
  if (!group.light_object.empty()) return "threaten";
  const Token& head = sentence.tokens[group.head_token];
  std::string lemma = tables.lemmas->lemmatize(head.surface, head.tag, *tables.lexicon);
  if (!group.particle.empty()) {
    lemma += " " + postag::lowercase(group.particle);
  }
  return tables.synsets->canonical(lemma);
}

}  // namespace

std::vector<VerbGroup> extract_verb_groups(const text::Sentence& sentence,
                                           const ExtractorTables& tables) {
  const auto& tokens = sentence.tokens;
  std::vector<VerbGroup> groups;

  for (std::size_t ci = 0; ci < sentence.clauses.size(); ++ci) {
    const text::Clause& clause = sentence.clauses[ci];
    std::size_t i = clause.first_token;
    while (i < clause.last_token) {
      if (!verb_or_modal(tokens[i].tag)) {
        ++i;
        continue;
      }
      // Maximal verb run, adverbs allowed inside.
      std::size_t run_end = i + 1;
      std::size_t j = i + 1;
      while (j < clause.last_token) {
        if (verb_or_modal(tokens[j].tag)) {
          run_end = ++j;
        } else if (tokens[j].tag == PosTag::RB && j + 1 < clause.last_token &&
                   verb_or_modal(tokens[j + 1].tag)) {
          j += 2;
          run_end = j;
        } else {
          break;
        }
      }

      // Split the run into groups: auxiliaries and modals attach to the next
      // content verb; each additional content verb opens a new group
      // ("kept attacking" -> [kept][attacking]).
      std::size_t group_begin = i;
      bool have_content = false;
      for (std::size_t k = i; k < run_end; ++k) {
        if (!verb_or_modal(tokens[k].tag)) continue;  // interior adverb
        const std::string lower = postag::lowercase(tokens[k].surface);
        const bool aux = tokens[k].tag == PosTag::MD || is_aux_form(lower);
        if (aux && !have_content) continue;
        if (have_content) {
          // Close the previous group before this content verb.
          VerbGroup g;
          g.clause_index = ci;
          g.begin_token = group_begin;
          g.end_token = k;
          groups.push_back(g);
          group_begin = k;
        }
        have_content = true;
      }
      VerbGroup last;
      last.clause_index = ci;
      last.begin_token = group_begin;
      last.end_token = run_end;
      groups.push_back(last);

      i = run_end;
    }
  }

  // Fill per-group structure.
  for (VerbGroup& g : groups) {
    g.head_token = g.begin_token;
    for (std::size_t k = g.begin_token; k < g.end_token; ++k) {
      const Token& tok = tokens[k];
      if (!verb_or_modal(tok.tag)) continue;
      const std::string lower = postag::lowercase(tok.surface);
      if (tok.tag == PosTag::MD) {
        g.modal = lower;
        continue;
      }
      if (tok.tag == PosTag::VBD || tok.tag == PosTag::VBP || tok.tag == PosTag::VBZ) {
        g.finite = true;
      }
      g.head_token = k;  // last verb in the group is the content verb
    }
    const Token& first = tokens[g.begin_token];
    g.gerund_initial = first.tag == PosTag::VBG;
    g.infinitival = g.begin_token > 0 && tokens[g.begin_token - 1].tag == PosTag::TO;

    // Phrasal particle: V + prt, or V + pronoun + prt.
    const std::string head_lemma =
        tables.lemmas->lemmatize(tokens[g.head_token].surface, tokens[g.head_token].tag,
                                 *tables.lexicon);
    std::size_t after = g.end_token;
    if (after < tokens.size() && particle_candidate(tokens[after]) &&
        tables.phrasals->contains(head_lemma, tokens[after].surface)) {
      g.particle = postag::lowercase(tokens[after].surface);
    } else if (after + 1 < tokens.size() && tokens[after].tag == PosTag::PRP &&
               particle_candidate(tokens[after + 1]) &&
               tables.phrasals->contains(head_lemma, tokens[after + 1].surface)) {
      g.particle = postag::lowercase(tokens[after + 1].surface);
    }

    // Light-verb construction: give/make (+ det/adj) + threat(s).
    if (head_lemma == "give" || head_lemma == "make") {
      std::size_t scan = g.end_token;
      std::size_t seen = 0;
      while (scan < tokens.size() && seen < 4) {
        const Token& tok = tokens[scan];
        const std::string lower = postag::lowercase(tok.surface);
        if (lower == "threat" || lower == "threats") {
          g.light_object = lower;
          break;
        }
        if (tok.tag != PosTag::DT && tok.tag != PosTag::JJ && tok.tag != PosTag::PRPS) break;
        ++scan;
        ++seen;
      }
    }
  }

  // Link complements to their matrix groups, clause-locally.
  for (std::size_t gi = 0; gi < groups.size(); ++gi) {
    VerbGroup& g = groups[gi];
    if (g.finite || g.modal.has_value()) continue;

    // Nearest preceding group in the same clause.
    std::optional<std::size_t> prev;
    for (std::size_t pj = gi; pj > 0; --pj) {
      if (groups[pj - 1].clause_index == g.clause_index) {
        prev = pj - 1;
        break;
      }
    }
    if (!prev) continue;

    if (g.infinitival) {
      g.parent = prev;
      continue;
    }
    if (g.gerund_initial) {
      // Allow only a small connector gap: pronouns, adverbs, "from"/"of".
      bool ok = true;
      std::size_t gap_begin = groups[*prev].end_token;
      if (!groups[*prev].particle.empty()) ++gap_begin;
      for (std::size_t k = gap_begin; k < g.begin_token; ++k) {
        const Token& tok = tokens[k];
        const std::string lower = postag::lowercase(tok.surface);
        const bool connector = tok.tag == PosTag::PRP || tok.tag == PosTag::PRPS ||
                               tok.tag == PosTag::RB || lower == "from" || lower == "of";
        if (!connector) {
          ok = false;
          break;
        }
      }
      if (ok) g.parent = prev;
    }
  }

  return groups;
}

Subject resolve_subject(const text::Sentence& sentence, const std::vector<VerbGroup>& groups,
                        std::size_t group_index) {
  const auto& tokens = sentence.tokens;
  const VerbGroup& group = groups[group_index];

  auto classify = [](const Token& token) {
    const std::string lower = postag::lowercase(token.surface);
    return (lower == "i" || lower == "we") ? Subject::Reporter : Subject::Other;
  };

  // Nearest preceding candidate within the clause.
  const text::Clause& clause = sentence.clauses[group.clause_index];
  for (std::size_t k = group.begin_token; k > clause.first_token; --k) {
    const Token& tok = tokens[k - 1];
    if (subject_capable(tok)) return classify(tok);
  }

  // Elided subject: inherit from the nearest prior clause that has one.
  for (std::size_t ci = group.clause_index; ci > 0; --ci) {
    const text::Clause& prior = sentence.clauses[ci - 1];
    // Subject position: before the clause's first verb group, if any.
    std::size_t limit = prior.last_token;
    for (const VerbGroup& g : groups) {
      if (g.clause_index == ci - 1) {
        limit = g.begin_token;
        break;
      }
    }
    for (std::size_t k = limit; k > prior.first_token; --k) {
      const Token& tok = tokens[k - 1];
      if (subject_capable(tok)) return classify(tok);
    }
  }
  return Subject::Unknown;
}

Realization classify_realization(const text::Sentence& sentence,
                                 const std::vector<VerbGroup>& groups, std::size_t group_index,
                                 const ExtractorTables& tables) {
  const VerbGroup& group = groups[group_index];

  if (group.parent.has_value()) {
    const std::size_t pi = *group.parent;
    Realization matrix = classify_realization(sentence, groups, pi, tables);
    if (matrix == Realization::Unrealized) return Realization::Unrealized;
    const std::string matrix_lemma = effective_lemma(sentence, groups[pi], tables);
    // Progressive "going to" marks the complement as future.
    if (matrix_lemma == "go" && group.infinitival) {
      const Token& head = sentence.tokens[groups[pi].head_token];
      if (head.tag == PosTag::VBG) return Realization::Unrealized;
    }
    switch (tables.policy->action(matrix_lemma)) {
      case CatenativeAction::Promote:
        if (tables.policy->attempted(matrix_lemma)) return Realization::Attempted;
        return matrix == Realization::Attempted ? Realization::Attempted : Realization::Realized;
      case CatenativeAction::Demote:
      case CatenativeAction::Block:
        return Realization::Unrealized;
    }
    return Realization::Unrealized;
  }

  if (group.modal.has_value()) {
    // Past-habitual "would"; every other modal is irrealis.
    return (*group.modal == "would" || *group.modal == "'d") ? Realization::Realized
                                                             : Realization::Unrealized;
  }
  if (group.finite) return Realization::Realized;

  // Bare verb coordinated with an earlier clause shares its tense
  // ("she'd flip out ... and slap or slug me").
  const text::Clause& clause = sentence.clauses[group.clause_index];
  const bool coordinated = clause.connective_before.has_value() &&
                           (*clause.connective_before == "and" ||
                            *clause.connective_before == "or" ||
                            *clause.connective_before == "but");
  const bool group_leads_clause = [&] {
    for (const VerbGroup& g : groups) {
      if (g.clause_index == group.clause_index) return &g == &group;
    }
    return false;
  }();
  if (coordinated && group_leads_clause && !group.gerund_initial && !group.infinitival) {
    for (std::size_t gi = group_index; gi > 0; --gi) {
      const VerbGroup& g = groups[gi - 1];
      if (g.clause_index >= group.clause_index) continue;
      if (g.parent.has_value()) continue;
      return classify_realization(
          sentence, groups, static_cast<std::size_t>(&g - groups.data()), tables);
    }
  }
  return Realization::Unrealized;
}

std::string lemmatize(std::string_view word, postag::PosTag tag, const ExtractorTables& tables) {
  return tables.lemmas->lemmatize(word, tag, *tables.lexicon);
}

std::string canonicalize(std::string_view lemma, const SynsetTable& table) {
  return table.canonical(lemma);
}

// ---------------------------------------------------------------------------
// Full extraction

std::vector<CandidateMention> extract_candidates(const std::vector<text::Sentence>& sentences,
                                                 const ExtractorTables& tables) {
  std::vector<CandidateMention> out;
  for (const text::Sentence& sentence : sentences) {
    if (sentence.verdict.status != text::FilterStatus::Pass) continue;
    const std::vector<VerbGroup> groups = extract_verb_groups(sentence, tables);
    for (std::size_t gi = 0; gi < groups.size(); ++gi) {
      const VerbGroup& g = groups[gi];
      const Token& head = sentence.tokens[g.head_token];

      CandidateMention candidate;
      ActionMention& m = candidate.mention;
      m.lemma = effective_lemma(sentence, g, tables);
      m.sentence_index = sentence.index;
      m.clause_index = g.clause_index;
      m.clause_span = sentence.clauses[g.clause_index].span;
      m.subject = resolve_subject(sentence, groups, gi);
      m.realization = classify_realization(sentence, groups, gi, tables);
      m.head_offset = head.start;
      {
        const Token& first = sentence.tokens[g.begin_token];
        const Token& last_tok = sentence.tokens[g.end_token - 1];
        m.surface = sentence.text.substr(first.start,
                                         last_tok.start + last_tok.surface.size() - first.start);
        if (!g.particle.empty()) m.surface += " ... " + g.particle;
      }

      const text::Clause& clause = sentence.clauses[g.clause_index];
      if (clause.negated) {
        candidate.excluded = true;
        candidate.exclusion_reason = "negated clause";
      } else if (sentence.token_quoted(g.head_token)) {
        candidate.excluded = true;
        candidate.exclusion_reason = "quoted span";
      } else if (m.realization == Realization::Unrealized) {
        candidate.excluded = true;
        candidate.exclusion_reason = "unrealized";
      } else if (m.subject == Subject::Reporter) {
        candidate.excluded = true;
        candidate.exclusion_reason = "reporter subject";
      } else if (!tables.synsets->known(m.lemma)) {
        candidate.excluded = true;
        candidate.exclusion_reason = "not an action term";
      }
      out.push_back(std::move(candidate));
    }
  }
  return out;
}

std::vector<ActionMention> extract_actions(const std::vector<text::Sentence>& sentences,
                                           const ExtractorTables& tables) {
  std::vector<ActionMention> out;
  for (CandidateMention& c : extract_candidates(sentences, tables)) {
    if (!c.excluded) out.push_back(std::move(c.mention));
  }
  return out;
}

}  // namespace homeguard::actions
