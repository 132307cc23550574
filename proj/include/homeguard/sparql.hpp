#pragma once

#include <map>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "homeguard/rdf.hpp"

namespace homeguard::sparql {

struct Variable {
  std::string name;  // without the leading '?'

  auto operator<=>(const Variable&) const = default;
};

using PatternTerm = std::variant<Variable, rdf::Iri, rdf::Literal>;

struct TriplePattern {
  PatternTerm subject;
  PatternTerm predicate;
  PatternTerm object;
};

// Basic graph pattern SELECT: projected variables plus an ordered pattern
// list. Always DISTINCT; no FILTER/OPTIONAL/UNION/paths.
struct Query {
  std::vector<std::string> projected;
  std::vector<TriplePattern> patterns;
};

using Binding = std::map<std::string, rdf::Term>;

struct BindingSet {
  std::vector<Binding> rows;  // distinct, deterministically ordered

  bool operator==(const BindingSet&) const = default;
};

// All bindings of the pattern's variables over the graph; variables repeated
// within the pattern must bind consistently.
BindingSet match(const rdf::Graph& graph, const TriplePattern& pattern);

// Natural join of the patterns in listed order, projected and deduplicated;
// rows ordered lexicographically by bound term strings.
BindingSet evaluate(const rdf::Graph& graph, const Query& query);

// Grammar subset: PREFIX declarations, SELECT ?v..., WHERE { tp . tp . }.
Query parse_sparql(std::string_view text);

}  // namespace homeguard::sparql
