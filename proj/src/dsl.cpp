#include "chemneuron/dsl.hpp"

#include <fmt/format.h>

#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "chemneuron/errors.hpp"

namespace chemneuron {

namespace {

enum class TokenKind {
  kIdentifier,
  kNumber,
  kArrow,          // ->
  kDoubleArrow,    // <->
  kPlus,
  kAt,
  kComma,
  kEquals,
  kEnd,
};

struct Token {
  TokenKind kind = TokenKind::kEnd;
  std::string_view text;
  double number = 0.0;
  int column = 0;  // 1-based
};

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)); }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}
bool is_digit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

/// Tokenizes one line (comment already stripped).
std::vector<Token> lex_line(std::string_view line, int line_no) {
  std::vector<Token> tokens;
  std::size_t i = 0;
  auto fail = [&](std::size_t at, std::string_view what) -> void {
    throw ParseError(fmt::format("unexpected {} in line {}", what, line_no),
                     line_no, static_cast<int>(at) + 1);
  };
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (static_cast<unsigned char>(c) >= 0x80) {
      throw ParseError(
          fmt::format("non-ASCII byte in line {}; species names are "
                      "ASCII identifiers (use Eact, Astar, ...)",
                      line_no),
          line_no, static_cast<int>(i) + 1);
    }
    const int column = static_cast<int>(i) + 1;
    if (is_ident_start(c)) {
      std::size_t start = i;
      while (i < line.size() && is_ident_char(line[i])) ++i;
      tokens.push_back(
          {TokenKind::kIdentifier, line.substr(start, i - start), 0.0, column});
      continue;
    }
    const bool number_start =
        is_digit(c) || c == '.' ||
        ((c == '-' || c == '+') && i + 1 < line.size() &&
         (is_digit(line[i + 1]) || line[i + 1] == '.'));
    if (number_start) {
      double value = 0.0;
      auto [next, ec] =
          std::from_chars(line.data() + i, line.data() + line.size(), value);
      if (ec != std::errc{}) fail(i, "malformed number");
      std::size_t len = static_cast<std::size_t>(next - (line.data() + i));
      tokens.push_back(
          {TokenKind::kNumber, line.substr(i, len), value, column});
      i += len;
      continue;
    }
    if (c == '-' && i + 1 < line.size() && line[i + 1] == '>') {
      tokens.push_back({TokenKind::kArrow, line.substr(i, 2), 0.0, column});
      i += 2;
      continue;
    }
    if (c == '<' && i + 2 < line.size() && line[i + 1] == '-' &&
        line[i + 2] == '>') {
      tokens.push_back(
          {TokenKind::kDoubleArrow, line.substr(i, 3), 0.0, column});
      i += 3;
      continue;
    }
    switch (c) {
      case '+':
        tokens.push_back({TokenKind::kPlus, line.substr(i, 1), 0.0, column});
        break;
      case '@':
        tokens.push_back({TokenKind::kAt, line.substr(i, 1), 0.0, column});
        break;
      case ',':
        tokens.push_back({TokenKind::kComma, line.substr(i, 1), 0.0, column});
        break;
      case '=':
        tokens.push_back({TokenKind::kEquals, line.substr(i, 1), 0.0, column});
        break;
      default:
        fail(i, fmt::format("character '{}'", c));
    }
    ++i;
  }
  tokens.push_back({TokenKind::kEnd, line.substr(line.size()), 0.0,
                    static_cast<int>(line.size()) + 1});
  return tokens;
}

class Parser {
 public:
  NetworkSpec parse(std::string_view text) {
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
      std::size_t eol = text.find('\n', pos);
      std::string_view line = eol == std::string_view::npos
                                  ? text.substr(pos)
                                  : text.substr(pos, eol - pos);
      ++line_no;
      if (std::size_t hash = line.find('#'); hash != std::string_view::npos) {
        line = line.substr(0, hash);
      }
      parse_line(line, line_no);
      if (eol == std::string_view::npos) break;
      pos = eol + 1;
    }
    return std::move(network_);
  }

 private:
  void parse_line(std::string_view line, int line_no) {
    tokens_ = lex_line(line, line_no);
    cursor_ = 0;
    line_no_ = line_no;
    if (peek().kind == TokenKind::kEnd) return;
    if (peek().kind == TokenKind::kIdentifier) {
      if (peek().text == "species") {
        parse_species_decl();
        return;
      }
      if (peek().text == "let") {
        parse_let();
        return;
      }
    }
    parse_reaction();
  }

  const Token& peek() const { return tokens_[cursor_]; }
  const Token& advance() { return tokens_[cursor_++]; }

  [[noreturn]] void fail(const Token& at, std::string message) const {
    throw ParseError(fmt::format("{} (line {})", message, line_no_), line_no_,
                     at.column);
  }

  const Token& expect(TokenKind kind, std::string_view what) {
    if (peek().kind != kind) {
      fail(peek(), fmt::format("expected {}", what));
    }
    return advance();
  }

  void expect_end() {
    if (peek().kind != TokenKind::kEnd) {
      fail(peek(), fmt::format("unexpected trailing '{}'", peek().text));
    }
  }

  std::string_view expect_name() {
    const Token& t = expect(TokenKind::kIdentifier, "a name");
    if (t.text == "species" || t.text == "let") {
      fail(t, fmt::format("'{}' is a keyword", t.text));
    }
    return t.text;
  }

  void parse_species_decl() {
    advance();  // species
    const Token& name_token = peek();
    std::string name(expect_name());
    Count initial = 0;
    if (peek().kind == TokenKind::kEquals) {
      advance();
      const Token& count_token = expect(TokenKind::kNumber, "an initial count");
      double value = count_token.number;
      if (value < 0 || value > 9e15 ||
          value != static_cast<double>(static_cast<Count>(value))) {
        fail(count_token, "initial count must be a nonnegative integer");
      }
      initial = static_cast<Count>(value);
    }
    expect_end();
    if (declared_.contains(name)) {
      fail(name_token, fmt::format("duplicate species declaration: {}", name));
    }
    declared_.insert(name);
    if (auto id = network_.find_species(name)) {
      network_.set_initial_count(*id, initial);
    } else {
      network_.add_species(name, initial);
    }
  }

  void parse_let() {
    advance();  // let
    const Token& name_token = peek();
    std::string name(expect_name());
    expect(TokenKind::kEquals, "'='");
    const Token& value_token = expect(TokenKind::kNumber, "a value");
    expect_end();
    if (value_token.number < 0) {
      fail(value_token, "rate constants must be nonnegative");
    }
    if (lets_.contains(name)) {
      fail(name_token, fmt::format("duplicate let binding: {}", name));
    }
    lets_.emplace(std::move(name), value_token.number);
  }

  std::vector<SpeciesId> parse_side() {
    std::vector<SpeciesId> side;
    // An empty side (source/sink) is the arrow or '@' coming right up.
    if (peek().kind != TokenKind::kIdentifier) return side;
    while (true) {
      std::string name(expect_name());
      side.push_back(intern(name));
      if (peek().kind != TokenKind::kPlus) break;
      advance();
    }
    if (side.size() > 2) {
      fail(peek(), "a reaction side may have at most two species");
    }
    return side;
  }

  double parse_rate() {
    if (peek().kind == TokenKind::kNumber) {
      const Token& t = advance();
      if (t.number < 0) fail(t, "rate constants must be nonnegative");
      return t.number;
    }
    if (peek().kind == TokenKind::kIdentifier) {
      const Token& t = advance();
      auto it = lets_.find(std::string(t.text));
      if (it == lets_.end()) {
        fail(t, fmt::format("undeclared rate name: {}", t.text));
      }
      return it->second;
    }
    fail(peek(), "expected a rate (number or let name)");
  }

  void parse_reaction() {
    auto left = parse_side();
    bool reversible = false;
    if (peek().kind == TokenKind::kDoubleArrow) {
      reversible = true;
      advance();
    } else {
      expect(TokenKind::kArrow, "'->' or '<->'");
    }
    auto right = parse_side();
    expect(TokenKind::kAt, "'@' before the rate");
    double k_forward = parse_rate();
    if (reversible) {
      expect(TokenKind::kComma, "',' and a reverse rate after '<->'");
      double k_reverse = parse_rate();
      expect_end();
      network_.add_reversible(std::move(left), std::move(right), k_forward,
                              k_reverse);
      return;
    }
    if (peek().kind == TokenKind::kComma) {
      fail(peek(), "a '->' reaction takes a single rate");
    }
    expect_end();
    network_.add_reaction(std::move(left), std::move(right), k_forward);
  }

  SpeciesId intern(const std::string& name) {
    if (auto id = network_.find_species(name)) return *id;
    return network_.add_species(name, 0);
  }

  NetworkSpec network_;
  std::unordered_map<std::string, double> lets_;
  std::unordered_set<std::string> declared_;
  std::vector<Token> tokens_;
  std::size_t cursor_ = 0;
  int line_no_ = 0;
};

}  // namespace

NetworkSpec parse_network(std::string_view text) {
  return Parser{}.parse(text);
}

std::string print_network(const NetworkSpec& network) {
  std::string out;
  for (const auto& species : network.species()) {
    Count initial = network.initial_count(species.id);
    if (initial != 0) {
      out += fmt::format("species {} = {}\n", species.name, initial);
    } else {
      out += fmt::format("species {}\n", species.name);
    }
  }
  if (!network.species().empty() && !network.reactions().empty()) out += "\n";
  for (const auto& reaction : network.reactions()) {
    if (reaction.hill) {
      throw ConfigError(
          "Hill-modulated reactions have no text form; emit the plain "
          "variants instead");
    }
    auto side = [&](const std::vector<SpeciesId>& ids) {
      std::string s;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (i > 0) s += " + ";
        s += network.species_name(ids[i]);
      }
      return s;
    };
    std::string line = side(reaction.reactants);
    if (!line.empty()) line += ' ';
    line += "->";
    if (std::string rhs = side(reaction.products); !rhs.empty()) {
      line += ' ';
      line += rhs;
    }
    out += fmt::format("{} @ {}\n", line, reaction.rate_constant);
  }
  return out;
}

}  // namespace chemneuron
