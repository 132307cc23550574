#include "homeguard/rdf.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "homeguard/errors.hpp"

namespace homeguard::rdf {

double Literal::as_double() const {
  try {
    return std::stod(lexical);
  } catch (const std::exception&) {
    throw Error("literal is not numeric: " + lexical);
  }
}

std::string to_string(const Term& term) {
  if (const auto* iri = std::get_if<Iri>(&term)) {
    return "<" + iri->value + ">";
  }
  const auto& lit = std::get<Literal>(term);
  if (lit.datatype == LiteralType::Double) {
    return lit.lexical;
  }
  std::string out = "\"";
  for (char c : lit.lexical) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

std::string to_string(const Triple& triple) {
  return "<" + triple.subject.value + "> <" + triple.predicate.value + "> " +
         to_string(triple.object) + " .";
}

namespace {

std::string object_key(const Term& term) { return to_string(term); }

}  // namespace

bool Graph::insert(Triple triple) {
  if (frozen_) {
    throw Error("graph is frozen");
  }
  if (by_triple_.contains(triple)) {
    return false;
  }
  const std::size_t idx = triples_.size();
  by_subject_[triple.subject.value].push_back(idx);
  by_predicate_[triple.predicate.value].push_back(idx);
  by_object_[object_key(triple.object)].push_back(idx);
  by_triple_.emplace(triple, idx);
  triples_.push_back(std::move(triple));
  return true;
}

bool Graph::contains(const Triple& triple) const { return by_triple_.contains(triple); }

void Graph::set_prefix(const std::string& name, const std::string& iri) {
  prefixes_[name] = iri;
}

std::vector<const Triple*> Graph::find(const std::optional<Iri>& subject,
                                       const std::optional<Iri>& predicate,
                                       const std::optional<Term>& object) const {
  const std::vector<std::size_t>* candidates = nullptr;
  auto narrow = [&](const std::map<std::string, std::vector<std::size_t>>& index,
                    const std::string& key) {
    auto it = index.find(key);
    const std::vector<std::size_t>* bucket = it == index.end() ? nullptr : &it->second;
    if (bucket == nullptr) {
      candidates = nullptr;
      return false;
    }
    if (candidates == nullptr || bucket->size() < candidates->size()) {
      candidates = bucket;
    }
    return true;
  };

  bool any_bound = false;
  if (subject) {
    any_bound = true;
    if (!narrow(by_subject_, subject->value)) return {};
  }
  if (predicate) {
    any_bound = true;
    if (!narrow(by_predicate_, predicate->value)) return {};
  }
  if (object) {
    any_bound = true;
    if (!narrow(by_object_, object_key(*object))) return {};
  }

  std::vector<const Triple*> out;
  auto matches = [&](const Triple& t) {
    if (subject && t.subject != *subject) return false;
    if (predicate && t.predicate != *predicate) return false;
    if (object && t.object != *object) return false;
    return true;
  };
  if (!any_bound) {
    out.reserve(triples_.size());
    for (const Triple& t : triples_) out.push_back(&t);
    return out;
  }
  for (std::size_t idx : *candidates) {
    if (matches(triples_[idx])) out.push_back(&triples_[idx]);
  }
  return out;
}

std::vector<const Triple*> Graph::scan(const std::optional<Iri>& subject,
                                       const std::optional<Iri>& predicate,
                                       const std::optional<Term>& object) const {
  std::vector<const Triple*> out;
  for (const Triple& t : triples_) {
    if (subject && t.subject != *subject) continue;
    if (predicate && t.predicate != *predicate) continue;
    if (object && t.object != *object) continue;
    out.push_back(&t);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Turtle subset parser

namespace {

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view text) : text_(text) {}

  Graph parse() {
    Graph graph;
    skip_ws();
    while (!eof()) {
      if (peek() == '@') {
        parse_prefix_decl(graph);
      } else {
        parse_statement(graph);
      }
      skip_ws();
    }
    return graph;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw TurtleSyntaxError(line_, column_, what);
  }

  bool eof() const { return pos_ >= text_.size(); }
  char peek() const { return text_[pos_]; }

  char advance() {
    char c = text_[pos_++];
    if (c == '\n') {
      ++line_;
      column_ = 1;
    } else {
      ++column_;
    }
    return c;
  }

  void skip_ws() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        return;
      }
    }
  }

  void expect(char c) {
    if (eof() || peek() != c) {
      fail(std::string("expected '") + c + "'");
    }
    advance();
  }

  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
  }

  std::string read_name() {
    std::string out;
    while (!eof() && is_name_char(peek())) {
      out += advance();
    }
    // A trailing '.' belongs to the statement terminator, not the name.
    while (!out.empty() && out.back() == '.') {
      out.pop_back();
      --pos_;
      --column_;
    }
    return out;
  }

  void parse_prefix_decl(Graph& graph) {
    for (const char* kw = "@prefix"; *kw; ++kw) {
      if (eof() || peek() != *kw) fail("expected @prefix directive");
      advance();
    }
    skip_ws();
    std::string name = read_name();
    expect(':');
    skip_ws();
    Iri iri = parse_iri_ref();
    skip_ws();
    expect('.');
    graph.set_prefix(name, iri.value);
  }

  Iri parse_iri_ref() {
    expect('<');
    std::string value;
    while (!eof() && peek() != '>') {
      value += advance();
    }
    expect('>');
    return Iri{std::move(value)};
  }

  Iri expand_prefixed(const Graph& graph) {
    std::string prefix = read_name();
    expect(':');
    std::string local = read_name();
    auto it = graph.prefixes().find(prefix);
    if (it == graph.prefixes().end()) {
      throw UnknownPrefixError(prefix + ":");
    }
    return Iri{it->second + local};
  }

  Iri parse_iri(const Graph& graph) {
    if (eof()) fail("expected IRI");
    if (peek() == '<') return parse_iri_ref();
    if (peek() == '[') fail("blank nodes are not supported");
    if (peek() == '(') fail("collections are not supported");
    if (peek() == '_') fail("blank node labels are not supported");
    return expand_prefixed(graph);
  }

  Literal parse_string_literal() {
    expect('"');
    std::string value;
    while (true) {
      if (eof()) fail("unterminated string literal");
      char c = advance();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) fail("dangling escape");
        char esc = advance();
        switch (esc) {
          case 'n': value += '\n'; break;
          case 'r': value += '\r'; break;
          case 't': value += '\t'; break;
          case '"': value += '"'; break;
          case '\\': value += '\\'; break;
          default: fail(std::string("unsupported escape \\") + esc);
        }
      } else {
        value += c;
      }
    }
    return Literal{std::move(value), LiteralType::PlainString};
  }

  Literal parse_number() {
    std::string lexical;
    if (peek() == '+' || peek() == '-') lexical += advance();
    bool digits = false;
    while (!eof() && (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.' ||
                      peek() == 'e' || peek() == 'E' ||
                      ((peek() == '+' || peek() == '-') && !lexical.empty() &&
                       (lexical.back() == 'e' || lexical.back() == 'E')))) {
      // "1." terminates the statement rather than extending the number.
      if (peek() == '.') {
        std::size_t next = pos_ + 1;
        if (next >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[next]))) {
          break;
        }
      }
      if (std::isdigit(static_cast<unsigned char>(peek()))) digits = true;
      lexical += advance();
    }
    if (!digits) fail("malformed numeric literal");
    double parsed = 0.0;
    auto [ptr, ec] = std::from_chars(lexical.data(), lexical.data() + lexical.size(), parsed);
    if (ec != std::errc() || ptr != lexical.data() + lexical.size() || !std::isfinite(parsed)) {
      fail("numeric literal does not parse as a finite double: " + lexical);
    }
    return Literal{std::move(lexical), LiteralType::Double};
  }

  Term parse_object(const Graph& graph) {
    if (eof()) fail("expected object term");
    char c = peek();
    if (c == '"') return parse_string_literal();
    if (c == '[') fail("blank nodes are not supported");
    if (c == '(') fail("collections are not supported");
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '+' || c == '-') {
      return parse_number();
    }
    return parse_iri(graph);
  }

  Iri parse_predicate(const Graph& graph) {
    if (!eof() && peek() == 'a') {
      // `a` keyword only when it stands alone.
      std::size_t next = pos_ + 1;
      if (next >= text_.size() || !is_name_char(text_[next])) {
        if (next >= text_.size() || text_[next] != ':') {
          advance();
          return Iri{std::string(vocab::kRdfType)};
        }
      }
    }
    return parse_iri(graph);
  }

  void parse_statement(Graph& graph) {
    Iri subject = parse_iri(graph);
    while (true) {
      skip_ws();
      Iri predicate = parse_predicate(graph);
      while (true) {
        skip_ws();
        Term object = parse_object(graph);
        graph.insert(Triple{subject, predicate, std::move(object)});
        skip_ws();
        if (!eof() && peek() == ',') {
          advance();
          continue;
        }
        break;
      }
      if (!eof() && peek() == ';') {
        advance();
        skip_ws();
        // Turtle allows a trailing ';' before '.'.
        if (!eof() && peek() == '.') break;
        continue;
      }
      break;
    }
    skip_ws();
    expect('.');
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t column_ = 1;
};

// Longest-prefix compression for readable output.
std::string compress(const Graph& graph, const Iri& iri) {
  const std::string* best_iri = nullptr;
  const std::string* best_name = nullptr;
  for (const auto& [name, expansion] : graph.prefixes()) {
    if (iri.value.starts_with(expansion) &&
        (best_iri == nullptr || expansion.size() > best_iri->size())) {
      std::string local = iri.value.substr(expansion.size());
      bool plain = !local.empty();
      for (char c : local) {
        if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-')) {
          plain = false;
          break;
        }
      }
      if (plain) {
        best_iri = &expansion;
        best_name = &name;
      }
    }
  }
  if (best_name == nullptr) {
    return "<" + iri.value + ">";
  }
  return *best_name + ":" + iri.value.substr(best_iri->size());
}

}  // namespace

Graph parse_turtle(std::string_view text) { return TurtleParser(text).parse(); }

std::string serialize_turtle(const Graph& graph) {
  std::ostringstream out;
  for (const auto& [name, iri] : graph.prefixes()) {
    out << "@prefix " << name << ": <" << iri << "> .\n";
  }
  if (!graph.prefixes().empty() && !graph.triples().empty()) {
    out << "\n";
  }
  std::vector<Triple> sorted = graph.triples();
  std::sort(sorted.begin(), sorted.end());
  for (const Triple& t : sorted) {
    out << compress(graph, t.subject) << " ";
    if (t.predicate.value == vocab::kRdfType) {
      out << "a";
    } else {
      out << compress(graph, t.predicate);
    }
    out << " ";
    if (const auto* iri = std::get_if<Iri>(&t.object)) {
      out << compress(graph, *iri);
    } else {
      out << to_string(t.object);
    }
    out << " .\n";
  }
  return out.str();
}

}  // namespace homeguard::rdf
