#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "homeguard/actions.hpp"
#include "homeguard/rdf.hpp"
#include "homeguard/sparql.hpp"
#include "homeguard/text.hpp"

namespace homeguard::triage {

inline constexpr std::string_view kOntologyNs = "http://homeguard.dev/ontology#";

struct CrimeLevel {
  int ordinal = 0;
  rdf::Iri iri;

  auto operator<=>(const CrimeLevel& other) const { return ordinal <=> other.ordinal; }
  bool operator==(const CrimeLevel& other) const { return ordinal == other.ordinal; }
};

enum class ServiceType { Police, Hospital, Lawyer, NGO };

std::string_view service_type_name(ServiceType type);
std::optional<ServiceType> service_type_from_name(std::string_view name);

// Violence terms, crime levels, and service classes from the ontology graph.
// Level and service resolution go through the SPARQL evaluator.
class CrimeTaxonomy {
 public:
  static CrimeTaxonomy from_graph(std::shared_ptr<rdf::Graph> graph);

  std::optional<CrimeLevel> level_of(std::string_view canonical_lemma) const;
  std::set<ServiceType> services_for(const CrimeLevel& level) const;
  std::optional<CrimeLevel> level_by_ordinal(int ordinal) const;

  const rdf::Graph& graph() const { return *graph_; }
  std::shared_ptr<rdf::Graph> graph_ptr() const { return graph_; }
  const std::set<std::string>& canonical_terms() const { return terms_; }
  std::size_t level_count() const { return levels_by_iri_.size(); }

 private:
  std::shared_ptr<rdf::Graph> graph_;
  std::map<std::string, rdf::Iri> term_nodes_;   // canonical lemma -> violence node
  std::map<std::string, int> levels_by_iri_;     // level IRI -> ordinal
  std::set<std::string> terms_;
};

struct EmergencyFilterConfig {
  std::set<std::string> taxonomy_words;  // violence canonicals plus keywords
  int threshold = 0;                     // admit when distinct matches exceed this
};

struct GradedAction {
  actions::ActionMention mention;
  CrimeLevel level;
};

struct SentenceTrace {
  std::size_t index = 0;
  std::string raw;
  std::string text;
  text::FilterStatus status = text::FilterStatus::Pass;
  std::string reason;
  std::vector<text::Clause> clauses;
};

struct CandidateTrace {
  actions::ActionMention mention;
  bool excluded = false;
  std::string exclusion_reason;
  std::optional<CrimeLevel> level;
};

struct TriageTrace {
  std::vector<SentenceTrace> sentences;
  std::vector<CandidateTrace> candidates;
};

struct TriageResult {
  std::vector<GradedAction> actions;
  std::optional<CrimeLevel> max_level;
  std::set<ServiceType> service_types;
  TriageTrace trace;
};

bool emergency_prefilter(const std::vector<text::Sentence>& sentences,
                         const EmergencyFilterConfig& config,
                         const actions::ExtractorTables& tables);

std::optional<CrimeLevel> level_of_action(std::string_view lemma, const CrimeTaxonomy& taxonomy);

std::optional<CrimeLevel> max_level(const std::vector<CrimeLevel>& levels);

std::set<ServiceType> services_for_level(const CrimeLevel& level, const CrimeTaxonomy& taxonomy);

// Everything needed to run the full pipeline, loaded from an asset directory.
class Engine {
 public:
  static Engine load(const std::filesystem::path& asset_dir);

  TriageResult triage(const text::RawMessage& message) const;

  // Pipeline stages, exposed for tools and tests.
  std::vector<text::Sentence> analyze(const text::RawMessage& message) const;
  actions::ExtractorTables tables() const;

  const CrimeTaxonomy& taxonomy() const { return taxonomy_; }
  const postag::TagLexicon& lexicon() const { return lexicon_; }
  const text::AbbreviationList& abbreviations() const { return abbreviations_; }
  const actions::LemmaRules& lemma_rules() const { return lemma_rules_; }
  const actions::SynsetTable& synsets() const { return synsets_; }
  const EmergencyFilterConfig& prefilter_config() const { return prefilter_; }
  const std::filesystem::path& asset_dir() const { return asset_dir_; }

 private:
  std::filesystem::path asset_dir_;
  postag::TagLexicon lexicon_;
  text::AbbreviationList abbreviations_;
  actions::LemmaRules lemma_rules_;
  actions::SynsetTable synsets_;
  actions::PhrasalVerbs phrasals_;
  actions::CatenativePolicy policy_;
  CrimeTaxonomy taxonomy_;
  EmergencyFilterConfig prefilter_;
};

}  // namespace homeguard::triage
