#include "homeguard/sparql.hpp"

#include <algorithm>
#include <cctype>
#include <set>

#include "homeguard/errors.hpp"

namespace homeguard::sparql {

namespace {

bool term_matches(const PatternTerm& pattern, const rdf::Term& term, Binding& binding) {
  if (const auto* var = std::get_if<Variable>(&pattern)) {
    auto it = binding.find(var->name);
    if (it == binding.end()) {
      binding.emplace(var->name, term);
      return true;
    }
    return it->second == term;
  }
  if (const auto* iri = std::get_if<rdf::Iri>(&pattern)) {
    const auto* got = std::get_if<rdf::Iri>(&term);
    return got != nullptr && *got == *iri;
  }
  const auto& lit = std::get<rdf::Literal>(pattern);
  const auto* got = std::get_if<rdf::Literal>(&term);
  return got != nullptr && *got == lit;
}

// Bind one pattern against the graph, extending each row in `input`.
std::vector<Binding> join_pattern(const rdf::Graph& graph, const TriplePattern& pattern,
                                  const std::vector<Binding>& input) {
  std::vector<Binding> output;
  for (const Binding& row : input) {
    auto resolve_iri = [&](const PatternTerm& pt) -> std::optional<rdf::Iri> {
      if (const auto* iri = std::get_if<rdf::Iri>(&pt)) return *iri;
      if (const auto* var = std::get_if<Variable>(&pt)) {
        auto it = row.find(var->name);
        if (it != row.end()) {
          if (const auto* bound = std::get_if<rdf::Iri>(&it->second)) return *bound;
          // Variable already bound to a literal can never match s/p position.
          return rdf::Iri{"\0literal"};
        }
      }
      return std::nullopt;
    };
    auto resolve_term = [&](const PatternTerm& pt) -> std::optional<rdf::Term> {
      if (const auto* iri = std::get_if<rdf::Iri>(&pt)) return rdf::Term{*iri};
      if (const auto* lit = std::get_if<rdf::Literal>(&pt)) return rdf::Term{*lit};
      const auto& var = std::get<Variable>(pt);
      auto it = row.find(var.name);
      if (it != row.end()) return it->second;
      return std::nullopt;
    };

    auto candidates = graph.find(resolve_iri(pattern.subject), resolve_iri(pattern.predicate),
                                 resolve_term(pattern.object));
    for (const rdf::Triple* t : candidates) {
      Binding extended = row;
      if (!term_matches(pattern.subject, rdf::Term{t->subject}, extended)) continue;
      if (!term_matches(pattern.predicate, rdf::Term{t->predicate}, extended)) continue;
      if (!term_matches(pattern.object, t->object, extended)) continue;
      output.push_back(std::move(extended));
    }
  }
  return output;
}

std::vector<std::string> pattern_variables(const TriplePattern& pattern) {
  std::vector<std::string> names;
  for (const PatternTerm* pt : {&pattern.subject, &pattern.predicate, &pattern.object}) {
    if (const auto* var = std::get_if<Variable>(pt)) {
      if (std::find(names.begin(), names.end(), var->name) == names.end()) {
        names.push_back(var->name);
      }
    }
  }
  return names;
}

BindingSet project_and_sort(std::vector<Binding> rows, const std::vector<std::string>& vars) {
  std::set<Binding> distinct;
  for (Binding& row : rows) {
    Binding projected;
    for (const std::string& v : vars) {
      auto it = row.find(v);
      if (it != row.end()) projected.emplace(v, it->second);
    }
    distinct.insert(std::move(projected));
  }
  BindingSet out;
  out.rows.assign(distinct.begin(), distinct.end());
  auto row_key = [&](const Binding& row) {
    std::string key;
    for (const std::string& v : vars) {
      auto it = row.find(v);
      key += it == row.end() ? std::string("\x01") : rdf::to_string(it->second);
      key += '\x02';
    }
    return key;
  };
  std::stable_sort(out.rows.begin(), out.rows.end(),
                   [&](const Binding& a, const Binding& b) { return row_key(a) < row_key(b); });
  return out;
}

}  // namespace

BindingSet match(const rdf::Graph& graph, const TriplePattern& pattern) {
  std::vector<Binding> seed{Binding{}};
  return project_and_sort(join_pattern(graph, pattern, seed), pattern_variables(pattern));
}

BindingSet evaluate(const rdf::Graph& graph, const Query& query) {
  if (query.patterns.empty()) {
    throw MalformedQueryError(0, "query has no patterns");
  }
  std::set<std::string> in_patterns;
  for (const TriplePattern& p : query.patterns) {
    for (const std::string& v : pattern_variables(p)) in_patterns.insert(v);
  }
  for (const std::string& v : query.projected) {
    if (!in_patterns.contains(v)) {
      throw MalformedQueryError(0, "projected variable ?" + v + " occurs in no pattern");
    }
  }
  std::vector<Binding> rows{Binding{}};
  for (const TriplePattern& p : query.patterns) {
    rows = join_pattern(graph, p, rows);
    if (rows.empty()) break;
  }
  return project_and_sort(std::move(rows), query.projected);
}

// ---------------------------------------------------------------------------
// Query parser

namespace {

class SparqlParser {
 public:
  explicit SparqlParser(std::string_view text) : text_(text) {}

  Query parse() {
    Query query;
    skip_ws();
    while (keyword_ahead("PREFIX")) {
      consume_keyword("PREFIX");
      parse_prefix_decl();
      skip_ws();
    }
    consume_keyword("SELECT");
    skip_ws();
    while (!eof() && peek() == '?') {
      query.projected.push_back(parse_variable().name);
      skip_ws();
    }
    if (query.projected.empty()) {
      fail("SELECT needs at least one variable");
    }
    consume_keyword("WHERE");
    skip_ws();
    expect('{');
    skip_ws();
    while (!eof() && peek() != '}') {
      query.patterns.push_back(parse_pattern());
      skip_ws();
      if (!eof() && peek() == '.') {
        advance();
        skip_ws();
      }
    }
    expect('}');
    skip_ws();
    if (!eof()) fail("trailing content after query");
    if (query.patterns.empty()) fail("WHERE block has no patterns");
    return query;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw MalformedQueryError(pos_, what);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }
  char advance() { return text_[pos_++]; }

  void skip_ws() {
    while (!eof()) {
      if (peek() == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(peek()))) {
        advance();
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  bool keyword_ahead(std::string_view kw) const {
    if (pos_ + kw.size() > text_.size()) return false;
    for (std::size_t i = 0; i < kw.size(); ++i) {
      if (std::toupper(static_cast<unsigned char>(text_[pos_ + i])) != kw[i]) return false;
    }
    return true;
  }

  void consume_keyword(std::string_view kw) {
    if (!keyword_ahead(kw)) fail("expected " + std::string(kw));
    pos_ += kw.size();
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-';
  }

  std::string read_name() {
    std::string out;
    while (!eof() && is_name_char(peek())) out += advance();
    return out;
  }

  void parse_prefix_decl() {
    skip_ws();
    std::string name = read_name();
    expect(':');
    skip_ws();
    expect('<');
    std::string iri;
    while (!eof() && peek() != '>') iri += advance();
    expect('>');
    prefixes_[name] = iri;
  }

  Variable parse_variable() {
    expect('?');
    std::string name = read_name();
    if (name.empty()) fail("empty variable name");
    return Variable{std::move(name)};
  }

  PatternTerm parse_term(bool object_position) {
    if (eof()) fail("expected term");
    char c = peek();
    if (c == '?') return parse_variable();
    if (c == '<') {
      advance();
      std::string iri;
      while (!eof() && peek() != '>') iri += advance();
      expect('>');
      return rdf::Iri{std::move(iri)};
    }
    if (c == '"') {
      if (!object_position) fail("literal allowed only in object position");
      advance();
      std::string value;
      while (true) {
        if (eof()) fail("unterminated string literal");
        char ch = advance();
        if (ch == '"') break;
        if (ch == '\\') {
          if (eof()) fail("dangling escape");
          char esc = advance();
          switch (esc) {
            case 'n': value += '\n'; break;
            case 'r': value += '\r'; break;
            case 't': value += '\t'; break;
            case '"': value += '"'; break;
            case '\\': value += '\\'; break;
            default: fail("unsupported escape");
          }
        } else {
          value += ch;
        }
      }
      return rdf::Literal{std::move(value), rdf::LiteralType::PlainString};
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
      if (!object_position) fail("literal allowed only in object position");
      std::string lexical;
      while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                        peek() == '+' || peek() == '-' || peek() == 'e' || peek() == 'E')) {
        lexical += advance();
      }
      return rdf::Literal{std::move(lexical), rdf::LiteralType::Double};
    }
    if (c == 'a' && (pos_ + 1 >= text_.size() ||
                     (!is_name_char(text_[pos_ + 1]) && text_[pos_ + 1] != ':'))) {
      advance();
      return rdf::Iri{std::string(rdf::vocab::kRdfType)};
    }
    std::string prefix = read_name();
    expect(':');
    std::string local = read_name();
    auto it = prefixes_.find(prefix);
    if (it == prefixes_.end()) throw UnknownPrefixError(prefix + ":");
    return rdf::Iri{it->second + local};
  }

  TriplePattern parse_pattern() {
    TriplePattern p;
    p.subject = parse_term(false);
    skip_ws();
    p.predicate = parse_term(false);
    skip_ws();
    p.object = parse_term(true);
    return p;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::map<std::string, std::string> prefixes_;
};

}  // namespace

Query parse_sparql(std::string_view text) { return SparqlParser(text).parse(); }

}  // namespace homeguard::sparql
