#include "crn/dsl.hpp"

#include <algorithm>
#include <cctype>
#include <optional>
#include <unordered_set>

#include "crn/errors.hpp"
#include "crn/numfmt.hpp"

namespace crn {
namespace {

enum class Tok { Ident, Number, Colon, Arrow, Plus, Semicolon, Equals, Invalid, End };

struct Token {
  Tok kind = Tok::End;
  std::string_view text;
  std::size_t column = 0;  // 1-based
};

const char* describe(Tok kind) {
  switch (kind) {
    case Tok::Ident:
      return "identifier";
    case Tok::Number:
      return "number";
    case Tok::Colon:
      return "':'";
    case Tok::Arrow:
      return "'->'";
    case Tok::Plus:
      return "'+'";
    case Tok::Semicolon:
      return "';'";
    case Tok::Equals:
      return "'='";
    case Tok::Invalid:
      return "character";
    case Tok::End:
      return "end of line";
  }
  return "token";
}

bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }
bool digit(char c) { return c >= '0' && c <= '9'; }

std::vector<Token> tokenize(std::string_view line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '#') break;
    const std::size_t start = i;
    if (ident_start(c)) {
      while (i < line.size() && ident_char(line[i])) ++i;
      out.push_back({Tok::Ident, line.substr(start, i - start), start + 1});
      continue;
    }
    // A sign belongs to a number only directly after '='.
    const bool sign = (c == '-' || c == '+') && !out.empty() && out.back().kind == Tok::Equals &&
                      i + 1 < line.size() && (digit(line[i + 1]) || line[i + 1] == '.');
    if (digit(c) || c == '.' || sign) {
      if (sign) ++i;
      while (i < line.size() && digit(line[i])) ++i;
      if (i < line.size() && line[i] == '.') {
        ++i;
        while (i < line.size() && digit(line[i])) ++i;
      }
      if (i < line.size() && (line[i] == 'e' || line[i] == 'E')) {
        std::size_t j = i + 1;
        if (j < line.size() && (line[j] == '+' || line[j] == '-')) ++j;
        if (j < line.size() && digit(line[j])) {
          i = j;
          while (i < line.size() && digit(line[i])) ++i;
        }
      }
      out.push_back({Tok::Number, line.substr(start, i - start), start + 1});
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      out.push_back({Tok::Arrow, line.substr(i, 2), start + 1});
      i += 2;
      continue;
    }
    Tok kind;
    switch (c) {
      case ':':
        kind = Tok::Colon;
        break;
      case '+':
        kind = Tok::Plus;
        break;
      case ';':
        kind = Tok::Semicolon;
        break;
      case '=':
        kind = Tok::Equals;
        break;
      default:
        // Reported by the parser, so a bad token earlier on the line wins.
        kind = Tok::Invalid;
    }
    out.push_back({kind, line.substr(i, 1), start + 1});
    ++i;
  }
  out.push_back({Tok::End, {}, line.size() + 1});
  return out;
}

bool is_unsigned_integer(std::string_view text) {
  if (text.empty()) return false;
  for (char c : text)
    if (!digit(c)) return false;
  return true;
}

class LineParser {
 public:
  LineParser(std::vector<Token> tokens, std::size_t line_no, ReactionNetwork& network,
             std::unordered_set<std::string>& declared, std::vector<ParseNote>* notes)
      : tokens_(std::move(tokens)), line_(line_no), net_(network), declared_(declared), notes_(notes) {}

  void parse() {
    if (peek().kind == Tok::End) return;
    if (peek().kind == Tok::Ident && peek().text == "species" && peek(1).kind == Tok::Ident) {
      parse_species();
    } else {
      parse_reaction();
    }
    expect(Tok::End);
  }

 private:
  const Token& peek(std::size_t ahead = 0) const {
    const std::size_t idx = std::min(pos_ + ahead, tokens_.size() - 1);
    return tokens_[idx];
  }

  const Token& expect(Tok kind) {
    const Token& tok = peek();
    if (tok.kind != kind) {
      std::string found = tok.kind == Tok::End ? "end of line" : "'" + std::string(tok.text) + "'";
      fail(tok, std::string("expected ") + describe(kind) + ", found " + found);
    }
    ++pos_;
    return tok;
  }

  [[noreturn]] void fail(const Token& tok, const std::string& message) const {
    throw SyntaxError(line_, tok.column, message);
  }

  std::string where() const { return "line " + std::to_string(line_); }

  void parse_species() {
    ++pos_;  // 'species'
    const Token& name = expect(Tok::Ident);
    expect(Tok::Equals);
    const Token& amount_tok = expect(Tok::Number);
    if (amount_tok.text.front() == '-' || amount_tok.text.front() == '+')
      fail(amount_tok, "initial amount must be an unsigned number");
    const auto amount = parse_double(amount_tok.text);
    if (!amount) fail(amount_tok, "malformed number '" + std::string(amount_tok.text) + "'");

    const std::string key(name.text);
    if (!declared_.insert(key).second) throw DuplicateNameError(key);
    if (auto idx = net_.find_species(key)) {
      net_.species[*idx].initial_amount = *amount;
    } else {
      net_.species.push_back({key, *amount});
    }
  }

  void parse_reaction() {
    const Token& name = expect(Tok::Ident);
    expect(Tok::Colon);
    Reaction reaction;
    reaction.name = std::string(name.text);
    reaction.reactants = parse_side(Tok::Arrow);
    expect(Tok::Arrow);
    reaction.products = parse_side(Tok::Semicolon);
    expect(Tok::Semicolon);
    const Token& k = expect(Tok::Ident);
    if (k.text != "k") fail(k, "expected 'k', found '" + std::string(k.text) + "'");
    expect(Tok::Equals);
    const Token& rate_tok = expect(Tok::Number);
    const auto rate = parse_double(rate_tok.text);
    if (!rate) fail(rate_tok, "malformed number '" + std::string(rate_tok.text) + "'");
    if (*rate < 0.0) throw NegativeRateError(reaction.name);
    reaction.rate_constant = *rate;
    if (net_.find_reaction(reaction.name)) throw DuplicateNameError(reaction.name);
    net_.reactions.push_back(std::move(reaction));
  }

  std::vector<ReactionTerm> parse_side(Tok terminator) {
    std::vector<ReactionTerm> terms;
    if (peek().kind == Tok::Number && peek().text == "0" && peek(1).kind == terminator) {
      ++pos_;
      return terms;
    }
    for (;;) {
      int coefficient = 1;
      if (peek().kind == Tok::Number) {
        const Token& tok = peek();
        if (!is_unsigned_integer(tok.text)) fail(tok, "coefficient must be a positive integer");
        const auto value = parse_double(tok.text);
        if (!value || *value < 1.0 || *value > 1e6) fail(tok, "coefficient must be a positive integer");
        coefficient = static_cast<int>(*value);
        ++pos_;
      }
      const Token& species = expect(Tok::Ident);
      const std::size_t idx = resolve_species(species.text);
      auto existing = std::find_if(terms.begin(), terms.end(),
                                   [&](const ReactionTerm& t) { return t.species == idx; });
      if (existing != terms.end()) {
        existing->coefficient += coefficient;
      } else {
        terms.push_back({idx, coefficient});
      }
      if (peek().kind != Tok::Plus) break;
      ++pos_;
    }
    return terms;
  }

  std::size_t resolve_species(std::string_view name) {
    if (auto idx = net_.find_species(name)) return *idx;
    net_.species.push_back({std::string(name), 0.0});
    if (notes_)
      notes_->push_back({where(), "species '" + std::string(name) + "' used before declaration; initial amount 0"});
    return net_.species.size() - 1;
  }

  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
  std::size_t line_;
  ReactionNetwork& net_;
  std::unordered_set<std::string>& declared_;
  std::vector<ParseNote>* notes_;
};

std::string emit_side(const ReactionNetwork& network, const std::vector<ReactionTerm>& terms) {
  if (terms.empty()) return "0";
  std::string out;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (i) out += " + ";
    if (terms[i].coefficient != 1) out += std::to_string(terms[i].coefficient) + " ";
    out += network.species[terms[i].species].name;
  }
  return out;
}

}  // namespace

ReactionNetwork parse_dsl(std::string_view text, std::vector<ParseNote>* notes) {
  ReactionNetwork network;
  std::unordered_set<std::string> declared;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    LineParser(tokenize(line), line_no, network, declared, notes).parse();
    start = end + 1;
  }
  return network;
}

std::string emit_dsl(const ReactionNetwork& network) {
  std::string out;
  for (const auto& s : network.species)
    out += "species " + s.name + " = " + format_double(s.initial_amount) + "\n";
  if (!network.species.empty() && !network.reactions.empty()) out += "\n";
  for (const auto& r : network.reactions) {
    out += r.name + ": " + emit_side(network, r.reactants) + " -> " + emit_side(network, r.products) +
           " ; k = " + format_double(r.rate_constant) + "\n";
  }
  return out;
}

}  // namespace crn
