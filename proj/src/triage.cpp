#include "homeguard/triage.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "homeguard/errors.hpp"

namespace homeguard::triage {

namespace {

std::string ns(std::string_view local) {
  return std::string(kOntologyNs) + std::string(local);
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

std::string_view service_type_name(ServiceType type) {
  switch (type) {
    case ServiceType::Police: return "Police";
    case ServiceType::Hospital: return "Hospital";
    case ServiceType::Lawyer: return "Lawyer";
    case ServiceType::NGO: return "NGO";
  }
  return "Police";
}

std::optional<ServiceType> service_type_from_name(std::string_view name) {
  if (name == "Police") return ServiceType::Police;
  if (name == "Hospital") return ServiceType::Hospital;
  if (name == "Lawyer") return ServiceType::Lawyer;
  if (name == "NGO") return ServiceType::NGO;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// CrimeTaxonomy

CrimeTaxonomy CrimeTaxonomy::from_graph(std::shared_ptr<rdf::Graph> graph) {
  CrimeTaxonomy tax;

  // Materialize the one-level subclass closure before freezing.
  if (!graph->frozen()) {
    const rdf::Iri type_iri{std::string(rdf::vocab::kRdfType)};
    const rdf::Iri subclass_iri{std::string(rdf::vocab::kSubClassOf)};
    std::vector<rdf::Triple> additions;
    for (const rdf::Triple* t : graph->find(std::nullopt, type_iri, std::nullopt)) {
      const auto* cls = std::get_if<rdf::Iri>(&t->object);
      if (cls == nullptr) continue;
      for (const rdf::Triple* up : graph->find(*cls, subclass_iri, std::nullopt)) {
        if (const auto* parent = std::get_if<rdf::Iri>(&up->object)) {
          additions.push_back(rdf::Triple{t->subject, type_iri, *parent});
        }
      }
    }
    for (rdf::Triple& t : additions) graph->insert(std::move(t));
    graph->freeze();
  }
  tax.graph_ = std::move(graph);

  const rdf::Iri term_pred{ns("term")};
  const rdf::Iri level_pred{ns("hasCrimeLevel")};
  const rdf::Iri ordinal_pred{ns("levelOrdinal")};
  const rdf::Iri service_pred{ns("hasService")};

  for (const rdf::Triple* t : tax.graph_->find(std::nullopt, term_pred, std::nullopt)) {
    const auto* lit = std::get_if<rdf::Literal>(&t->object);
    if (lit == nullptr) continue;
    tax.term_nodes_[postag::lowercase(lit->lexical)] = t->subject;
    tax.terms_.insert(postag::lowercase(lit->lexical));
  }
  for (const rdf::Triple* t : tax.graph_->find(std::nullopt, ordinal_pred, std::nullopt)) {
    const auto* lit = std::get_if<rdf::Literal>(&t->object);
    if (lit == nullptr) continue;
    tax.levels_by_iri_[t->subject.value] = static_cast<int>(lit->as_double());
  }

  // Structural invariants of the taxonomy subtree.
  for (const auto& [lemma, node] : tax.term_nodes_) {
    auto levels = tax.graph_->find(node, level_pred, std::nullopt);
    if (levels.size() != 1) {
      throw AssetError("violence term '" + lemma + "' must have exactly one crime level, has " +
                       std::to_string(levels.size()));
    }
  }
  for (const auto& [iri, ordinal] : tax.levels_by_iri_) {
    if (tax.graph_->find(rdf::Iri{iri}, service_pred, std::nullopt).empty()) {
      throw AssetError("crime level " + iri + " has no service");
    }
  }
  return tax;
}

std::optional<CrimeLevel> CrimeTaxonomy::level_of(std::string_view canonical_lemma) const {
  auto it = term_nodes_.find(postag::lowercase(canonical_lemma));
  if (it == term_nodes_.end()) return std::nullopt;

  std::string query_text = "PREFIX hg: <" + std::string(kOntologyNs) +
                           ">\nSELECT ?lvl WHERE { <" + it->second.value +
                           "> hg:hasCrimeLevel ?lvl . }";
  sparql::BindingSet rows = sparql::evaluate(*graph_, sparql::parse_sparql(query_text));
  if (rows.rows.empty()) return std::nullopt;
  const auto* iri = std::get_if<rdf::Iri>(&rows.rows.front().at("lvl"));
  if (iri == nullptr) return std::nullopt;
  auto lvl = levels_by_iri_.find(iri->value);
  if (lvl == levels_by_iri_.end()) return std::nullopt;
  return CrimeLevel{lvl->second, *iri};
}

std::set<ServiceType> CrimeTaxonomy::services_for(const CrimeLevel& level) const {
  if (!levels_by_iri_.contains(level.iri.value)) {
    throw UnknownLevelError("no such crime level node: " + level.iri.value);
  }
  std::string query_text = "PREFIX hg: <" + std::string(kOntologyNs) +
                           ">\nSELECT ?svc WHERE { <" + level.iri.value +
                           "> hg:hasService ?svc . }";
  sparql::BindingSet rows = sparql::evaluate(*graph_, sparql::parse_sparql(query_text));
  std::set<ServiceType> out;
  for (const sparql::Binding& row : rows.rows) {
    const auto* iri = std::get_if<rdf::Iri>(&row.at("svc"));
    if (iri == nullptr) continue;
    std::string_view value = iri->value;
    auto hash = value.rfind('#');
    std::string_view local = hash == std::string_view::npos ? value : value.substr(hash + 1);
    if (auto type = service_type_from_name(local)) {
      out.insert(*type);
    }
  }
  return out;
}

std::optional<CrimeLevel> CrimeTaxonomy::level_by_ordinal(int ordinal) const {
  for (const auto& [iri, ord] : levels_by_iri_) {
    if (ord == ordinal) return CrimeLevel{ord, rdf::Iri{iri}};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Operations

bool emergency_prefilter(const std::vector<text::Sentence>& sentences,
                         const EmergencyFilterConfig& config,
                         const actions::ExtractorTables& tables) {
  std::set<std::string> matched;
  for (const text::Sentence& sentence : sentences) {
    for (const postag::Token& token : sentence.tokens) {
      const std::string lower = postag::lowercase(token.surface);
      if (lower == ",") continue;
      std::string lemma = tables.lemmas->lemmatize(lower, token.tag, *tables.lexicon);
      std::string canonical = tables.synsets->canonical(lemma);
      if (config.taxonomy_words.contains(lower)) {
        matched.insert(lower);
      } else if (config.taxonomy_words.contains(canonical)) {
        matched.insert(canonical);
      }
    }
  }
  return static_cast<int>(matched.size()) > config.threshold;
}

std::optional<CrimeLevel> level_of_action(std::string_view lemma, const CrimeTaxonomy& taxonomy) {
  return taxonomy.level_of(lemma);
}

std::optional<CrimeLevel> max_level(const std::vector<CrimeLevel>& levels) {
  if (levels.empty()) return std::nullopt;
  return *std::max_element(levels.begin(), levels.end(),
                           [](const CrimeLevel& a, const CrimeLevel& b) {
                             return a.ordinal < b.ordinal;
                           });
}

std::set<ServiceType> services_for_level(const CrimeLevel& level, const CrimeTaxonomy& taxonomy) {
  return taxonomy.services_for(level);
}

// ---------------------------------------------------------------------------
// Engine

Engine Engine::load(const std::filesystem::path& asset_dir) {
  Engine engine;
  engine.asset_dir_ = asset_dir;
  engine.lexicon_ = postag::TagLexicon::load(asset_dir / "tag_lexicon.tsv");
  engine.abbreviations_ = text::AbbreviationList::load(asset_dir / "abbreviations.txt");
  engine.lemma_rules_ = actions::LemmaRules::load(asset_dir / "lemma_exceptions.tsv");
  engine.synsets_ = actions::SynsetTable::load(asset_dir / "synsets.tsv");
  engine.phrasals_ = actions::PhrasalVerbs::load(asset_dir / "phrasal_verbs.txt");
  engine.policy_ = actions::CatenativePolicy::load(asset_dir / "catenative_policy.tsv");

  std::ifstream ttl(asset_dir / "ontology.ttl");
  if (!ttl) {
    throw AssetError("cannot open ontology: " + (asset_dir / "ontology.ttl").string());
  }
  std::stringstream buffer;
  buffer << ttl.rdbuf();
  auto graph = std::make_shared<rdf::Graph>(rdf::parse_turtle(buffer.str()));
  engine.taxonomy_ = CrimeTaxonomy::from_graph(std::move(graph));

  // Prefilter: violence canonicals plus the configured keyword list.
  engine.prefilter_.taxonomy_words = engine.taxonomy_.canonical_terms();
  std::string keywords_file = "keywords.txt";
  std::ifstream conf(asset_dir / "triage.conf");
  if (conf) {
    std::string line;
    while (std::getline(conf, line)) {
      std::string_view view = trim(line);
      if (view.empty() || view.front() == '#') continue;
      auto eq = view.find('=');
      if (eq == std::string_view::npos) continue;
      std::string key{trim(view.substr(0, eq))};
      std::string value{trim(view.substr(eq + 1))};
      if (key == "threshold") {
        engine.prefilter_.threshold = std::stoi(value);
      } else if (key == "keywords") {
        keywords_file = value;
      }
    }
  }
  std::ifstream kw(asset_dir / keywords_file);
  if (!kw) {
    throw AssetError("cannot open keyword list: " + (asset_dir / keywords_file).string());
  }
  std::string line;
  while (std::getline(kw, line)) {
    std::string_view view = trim(line);
    if (view.empty() || view.front() == '#') continue;
    engine.prefilter_.taxonomy_words.insert(postag::lowercase(view));
  }
  return engine;
}

actions::ExtractorTables Engine::tables() const {
  actions::ExtractorTables t;
  t.lemmas = &lemma_rules_;
  t.synsets = &synsets_;
  t.phrasals = &phrasals_;
  t.policy = &policy_;
  t.lexicon = &lexicon_;
  return t;
}

std::vector<text::Sentence> Engine::analyze(const text::RawMessage& message) const {
  return text::run_filters(message, abbreviations_, lexicon_);
}

TriageResult Engine::triage(const text::RawMessage& message) const {
  const std::vector<text::Sentence> sentences = analyze(message);
  const actions::ExtractorTables t = tables();

  if (!emergency_prefilter(sentences, prefilter_, t)) {
    throw NotEmergencyError("no emergency taxonomy word in message");
  }

  TriageResult result;
  for (const text::Sentence& s : sentences) {
    SentenceTrace st;
    st.index = s.index;
    st.raw = s.raw;
    st.text = s.text;
    st.status = s.verdict.status;
    st.reason = s.verdict.reason;
    st.clauses = s.clauses;
    result.trace.sentences.push_back(std::move(st));
  }

  std::vector<CrimeLevel> levels;
  for (actions::CandidateMention& c : actions::extract_candidates(sentences, t)) {
    CandidateTrace ct;
    ct.mention = c.mention;
    ct.excluded = c.excluded;
    ct.exclusion_reason = c.exclusion_reason;
    if (!c.excluded) {
      ct.level = taxonomy_.level_of(c.mention.lemma);
      if (ct.level) {
        result.actions.push_back(GradedAction{c.mention, *ct.level});
        levels.push_back(*ct.level);
      }
    }
    result.trace.candidates.push_back(std::move(ct));
  }

  result.max_level = max_level(levels);
  if (result.max_level) {
    result.service_types = taxonomy_.services_for(*result.max_level);
  }
  return result;
}

}  // namespace homeguard::triage
