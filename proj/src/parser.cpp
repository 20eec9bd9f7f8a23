#include "ltlfsynth/parser.hpp"

#include <string>
#include <vector>

#include "ltlfsynth/errors.hpp"

namespace ltlfsynth {

namespace {

std::string format_parse_error(std::size_t line, std::size_t column, const std::string& message,
                               const std::vector<std::string>& expected) {
  std::string out = std::to_string(line) + ":" + std::to_string(column) + ": " + message;
  if (!expected.empty()) {
    out += " (expected one of:";
    for (const auto& e : expected) out += " " + e;
    out += ")";
  }
  return out;
}

enum class Tok {
  Ident,
  True,
  False,
  Not,
  And,
  Or,
  Implies,
  Equiv,
  Next,
  Eventually,
  Globally,
  Until,
  LParen,
  RParen,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  std::size_t line;
  std::size_t column;
};

const std::vector<std::string> kOperandStart = {"identifier", "true", "false", "'('", "'!'", "'X'", "'F'", "'G'"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_space();
      std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Tok::End, "", line, col});
        return out;
      }
      char c = text_[pos_];
      if (is_ident_start(c)) {
        std::size_t start = pos_;
        while (pos_ < text_.size() && is_ident_char(text_[pos_])) advance();
        std::string word(text_.substr(start, pos_ - start));
        out.push_back({keyword(word, line, col), word, line, col});
        continue;
      }
      switch (c) {
        case '!': advance(); out.push_back({Tok::Not, "!", line, col}); continue;
        case '&': advance(); out.push_back({Tok::And, "&", line, col}); continue;
        case '|': advance(); out.push_back({Tok::Or, "|", line, col}); continue;
        case '(': advance(); out.push_back({Tok::LParen, "(", line, col}); continue;
        case ')': advance(); out.push_back({Tok::RParen, ")", line, col}); continue;
        case '-':
          if (peek(1) == '>') {
            advance();
            advance();
            out.push_back({Tok::Implies, "->", line, col});
            continue;
          }
          break;
        case '<':
          if (peek(1) == '-' && peek(2) == '>') {
            advance();
            advance();
            advance();
            out.push_back({Tok::Equiv, "<->", line, col});
            continue;
          }
          break;
        default:
          break;
      }
      throw ParseError(line, col, "unknown operator '" + std::string(1, c) + "'");
    }
  }

 private:
  static bool is_ident_start(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; }
  static bool is_ident_char(char c) { return is_ident_start(c) || (c >= '0' && c <= '9'); }

  static Tok keyword(const std::string& w, std::size_t line, std::size_t col) {
    if (w == "true") return Tok::True;
    if (w == "false") return Tok::False;
    if (w == "X") return Tok::Next;
    if (w == "F") return Tok::Eventually;
    if (w == "G") return Tok::Globally;
    if (w == "U") return Tok::Until;
    if (w == "R" || w == "WX") {
      throw ParseError(line, col, "unknown operator '" + w + "' (internal connective, not part of the input syntax)");
    }
    return Tok::Ident;
  }

  char peek(std::size_t ahead) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (pos_ < text_.size() &&
           (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\n' || text_[pos_] == '\r')) {
      advance();
    }
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
};

class Parser {
 public:
  Parser(std::vector<Token> tokens, ParseOptions options)
      : tokens_(std::move(tokens)), options_(options) {}

  Formula run() {
    Formula f = equiv();
    if (cur().kind == Tok::RParen) {
      throw ParseError(cur().line, cur().column, "unbalanced ')'");
    }
    if (cur().kind != Tok::End) {
      throw ParseError(cur().line, cur().column, "unexpected '" + cur().text + "'",
                       {"'&'", "'|'", "'->'", "'<->'", "'U'", "end of input"});
    }
    return f;
  }

 private:
  const Token& cur() const { return tokens_[pos_]; }
  bool accept(Tok kind) {
    if (cur().kind != kind) return false;
    ++pos_;
    return true;
  }

  Formula equiv() {
    Formula f = implies();
    while (accept(Tok::Equiv)) f = Formula::equiv(f, implies());
    return f;
  }

  Formula implies() {
    Formula f = disjunction();
    if (accept(Tok::Implies)) return Formula::implies(f, implies());
    return f;
  }

  Formula disjunction() {
    Formula f = conjunction();
    while (accept(Tok::Or)) f = Formula::disj(f, conjunction());
    return f;
  }

  Formula conjunction() {
    Formula f = until();
    while (accept(Tok::And)) f = Formula::conj(f, until());
    return f;
  }

  Formula until() {
    Formula f = unary();
    if (accept(Tok::Until)) return Formula::until(f, until());
    return f;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negate(unary());
    if (accept(Tok::Next)) return Formula::next(unary());
    if (accept(Tok::Eventually)) return Formula::eventually(unary());
    if (accept(Tok::Globally)) return Formula::globally(unary());
    return primary();
  }

  Formula primary() {
    const Token& t = cur();
    switch (t.kind) {
      case Tok::True: ++pos_; return Formula::tt();
      case Tok::False: ++pos_; return Formula::ff();
      case Tok::Ident:
        if (t.text == kAliveProp && !options_.allow_reserved) {
          throw ParseError(t.line, t.column, "'alive' is a reserved proposition");
        }
        ++pos_;
        return Formula::atom(t.text);
      case Tok::LParen: {
        ++pos_;
        Formula f = equiv();
        if (!accept(Tok::RParen)) {
          const Token& at = cur();
          if (at.kind == Tok::End) {
            throw ParseError(at.line, at.column, "unbalanced parentheses: missing ')'", {"')'"});
          }
          throw ParseError(at.line, at.column, "unexpected '" + at.text + "'", {"')'"});
        }
        return f;
      }
      case Tok::End:
        throw ParseError(t.line, t.column, "expected operand, found end of input", kOperandStart);
      case Tok::RParen:
        throw ParseError(t.line, t.column, "expected operand, found ')'", kOperandStart);
      default:
        throw ParseError(t.line, t.column, "expected operand, found '" + t.text + "'", kOperandStart);
    }
  }

  std::vector<Token> tokens_;
  ParseOptions options_;
  std::size_t pos_ = 0;
};

}  // namespace

ParseError::ParseError(std::size_t line, std::size_t column, const std::string& message,
                       std::vector<std::string> expected)
    : Error(format_parse_error(line, column, message, expected)),
      line_(line),
      column_(column),
      expected_(std::move(expected)) {}

Formula parse(std::string_view text, ParseOptions options) {
  Lexer lexer(text);
  Parser parser(lexer.run(), options);
  return parser.run();
}

}  // namespace ltlfsynth
