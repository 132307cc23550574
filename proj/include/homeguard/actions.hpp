#pragma once

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "homeguard/postag.hpp"
#include "homeguard/text.hpp"

namespace homeguard::actions {

enum class Subject { Reporter, Other, Unknown };
enum class Realization { Realized, Attempted, Unrealized };

std::string_view subject_name(Subject s);
std::string_view realization_name(Realization r);

struct ActionMention {
  std::string lemma;    // canonical, lowercase
  std::string surface;  // original verb group text
  std::size_t sentence_index = 0;
  std::size_t clause_index = 0;
  text::CharSpan clause_span;
  Subject subject = Subject::Unknown;
  Realization realization = Realization::Unrealized;
  std::size_t head_offset = 0;  // offset of the head verb in the sentence text
};

// Irregular exceptions first, then ordered suffix rules with known-verb
// validation against the tag lexicon.
class LemmaRules {
 public:
  static LemmaRules load(const std::filesystem::path& path);
  static LemmaRules parse(std::string_view text);

  std::string lemmatize(std::string_view word, postag::PosTag tag,
                        const postag::TagLexicon& lexicon) const;
  std::size_t exception_count() const { return exceptions_.size(); }

 private:
  std::map<std::string, std::string> exceptions_;
};

class SynsetTable {
 public:
  static SynsetTable load(const std::filesystem::path& path);
  static SynsetTable parse(std::string_view text);

  // Canonical form if mapped, the input unchanged otherwise.
  std::string canonical(std::string_view lemma) const;
  bool known(std::string_view lemma) const;
  std::set<std::string> canonicals() const;

 private:
  std::map<std::string, std::string> map_;
};

// Verb + particle pairs eligible for phrasal attachment ("run over").
class PhrasalVerbs {
 public:
  static PhrasalVerbs load(const std::filesystem::path& path);
  static PhrasalVerbs parse(std::string_view text);

  bool contains(std::string_view verb_lemma, std::string_view particle) const;

 private:
  std::set<std::string> pairs_;  // "verb particle"
};

enum class CatenativeAction { Promote, Demote, Block };

class CatenativePolicy {
 public:
  static CatenativePolicy load(const std::filesystem::path& path);
  static CatenativePolicy parse(std::string_view text);
  static CatenativePolicy defaults();

  // Unlisted matrix verbs promote their complement.
  CatenativeAction action(std::string_view matrix_lemma) const;
  bool attempted(std::string_view matrix_lemma) const;  // try/attempt class

 private:
  std::map<std::string, CatenativeAction> map_;
};

struct VerbGroup {
  std::size_t clause_index = 0;
  std::size_t begin_token = 0;
  std::size_t end_token = 0;       // exclusive; auxiliaries and negation included
  std::size_t head_token = 0;      // content verb
  std::optional<std::string> modal;  // lowercased modal in the group, if any
  bool finite = false;             // carries VBD/VBP/VBZ
  bool infinitival = false;        // introduced by "to"
  bool gerund_initial = false;     // starts with a VBG form
  std::string particle;            // attached phrasal particle, if any
  std::optional<std::size_t> parent;  // index of the catenative matrix group
  std::string light_object;        // noun that reclassifies a light verb
};

struct ExtractorTables {
  const LemmaRules* lemmas = nullptr;
  const SynsetTable* synsets = nullptr;
  const PhrasalVerbs* phrasals = nullptr;
  const CatenativePolicy* policy = nullptr;
  const postag::TagLexicon* lexicon = nullptr;
};

// Verb groups of a passed sentence, with phrasal particles attached and
// catenative/infinitival/gerund links resolved.
std::vector<VerbGroup> extract_verb_groups(const text::Sentence& sentence,
                                           const ExtractorTables& tables);

Subject resolve_subject(const text::Sentence& sentence, const std::vector<VerbGroup>& groups,
                        std::size_t group_index);

Realization classify_realization(const text::Sentence& sentence,
                                 const std::vector<VerbGroup>& groups, std::size_t group_index,
                                 const ExtractorTables& tables);

std::string lemmatize(std::string_view word, postag::PosTag tag, const ExtractorTables& tables);

std::string canonicalize(std::string_view lemma, const SynsetTable& table);

// Mentions surviving every exclusion: sentence passed filters, clause not
// negated, head not quoted, subject != Reporter, realization counts, and the
// canonical lemma is known to the synset table.
std::vector<ActionMention> extract_actions(const std::vector<text::Sentence>& sentences,
                                           const ExtractorTables& tables);

// All candidate mentions regardless of exclusion, for tracing and tests.
struct CandidateMention {
  ActionMention mention;
  bool excluded = false;
  std::string exclusion_reason;
};
std::vector<CandidateMention> extract_candidates(const std::vector<text::Sentence>& sentences,
                                                 const ExtractorTables& tables);

}  // namespace homeguard::actions
