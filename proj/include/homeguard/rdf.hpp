#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace homeguard::rdf {

struct Iri {
  std::string value;  // always the expanded, absolute form

  auto operator<=>(const Iri&) const = default;
};

enum class LiteralType { PlainString, Double };

struct Literal {
  std::string lexical;  // kept verbatim; doubles compared numerically only where needed
  LiteralType datatype = LiteralType::PlainString;

  double as_double() const;

  auto operator<=>(const Literal&) const = default;
};

// Object position admits IRIs and literals; subjects/predicates are IRIs only.
using Term = std::variant<Iri, Literal>;

struct Triple {
  Iri subject;
  Iri predicate;
  Term object;

  auto operator<=>(const Triple&) const = default;
};

// Display form used for deterministic ordering and error messages:
// IRIs as <...>, strings quoted, doubles as their lexical form.
std::string to_string(const Term& term);
std::string to_string(const Triple& triple);

// In-memory triple set with subject/predicate/object indexes and a prefix
// map. Mutable while loading; freeze() before sharing across threads.
class Graph {
 public:
  // Returns false when the triple was already present (set semantics).
  bool insert(Triple triple);

  std::size_t size() const { return triples_.size(); }
  bool empty() const { return triples_.empty(); }
  const std::vector<Triple>& triples() const { return triples_; }
  bool contains(const Triple& triple) const;

  // Wildcard match; nullopt means "any". Uses the most selective index.
  std::vector<const Triple*> find(const std::optional<Iri>& subject,
                                  const std::optional<Iri>& predicate,
                                  const std::optional<Term>& object) const;

  // Full-scan counterpart of find(); the index-consistency tests compare both.
  std::vector<const Triple*> scan(const std::optional<Iri>& subject,
                                  const std::optional<Iri>& predicate,
                                  const std::optional<Term>& object) const;

  void set_prefix(const std::string& name, const std::string& iri);
  const std::map<std::string, std::string>& prefixes() const { return prefixes_; }

  void freeze() { frozen_ = true; }
  bool frozen() const { return frozen_; }

 private:
  std::vector<Triple> triples_;
  std::map<Triple, std::size_t> by_triple_;
  std::map<std::string, std::vector<std::size_t>> by_subject_;
  std::map<std::string, std::vector<std::size_t>> by_predicate_;
  std::map<std::string, std::vector<std::size_t>> by_object_;
  std::map<std::string, std::string> prefixes_;
  bool frozen_ = false;
};

// Turtle subset: @prefix, <iri>, prefixed names, `a`, `;` and `,` lists,
// quoted string literals, bare numbers. Blank nodes and collections are
// rejected with a positioned error.
Graph parse_turtle(std::string_view text);

// Deterministic: prefixes first, then triples sorted by subject, predicate,
// object. parse_turtle(serialize_turtle(g)) equals g as a triple set.
std::string serialize_turtle(const Graph& graph);

namespace vocab {
inline constexpr std::string_view kRdfType = "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kSubClassOf = "http://www.w3.org/2000/01/rdf-schema#subClassOf";
}  // namespace vocab

}  // namespace homeguard::rdf
