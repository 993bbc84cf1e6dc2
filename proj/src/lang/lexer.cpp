#include "holegen/lang/lexer.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cstdlib>

#include "holegen/lang/errors.hpp"

namespace holegen::lang {
namespace {

// Longest first so that maximal munch works with a linear scan.
constexpr std::array<std::string_view, 37> kPuncts = {
    ">>>", "&&", "||", "<<", ">>", "<=", ">=", "==", "!=", "++", "--", "+", "-", "*", "/",
    "%",   "<",  ">",  "=",  "!",  "~",  "&",  "|",  "^",  "(",  ")",  "{",  "}",  "[",  "]",
    ";",   ",",  ".",  ":",  "?",  "@",  "#"};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skipSpaceAndComments();
      Token t;
      t.span = {line_, col_};
      if (pos_ >= text_.size()) {
        t.kind = Tok::End;
        out.push_back(std::move(t));
        return out;
      }
      char ch = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
          advance();
        t.kind = Tok::Ident;
        t.text = std::string(text_.substr(start, pos_ - start));
      } else if (std::isdigit(static_cast<unsigned char>(ch))) {
        lexNumber(t);
      } else if (ch == '\'') {
        lexChar(t);
      } else if (ch == '?' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'H') {
        advance();
        advance();
        std::size_t start = pos_;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
        if (start == pos_) throw ParseError("hole marker without id", t.span);
        t.kind = Tok::HoleMarker;
        t.intValue = std::strtoull(std::string(text_.substr(start, pos_ - start)).c_str(), nullptr, 10);
        t.text = "?H" + std::to_string(t.intValue);
      } else {
        bool matched = false;
        for (auto p : kPuncts) {
          if (text_.substr(pos_, p.size()) == p) {
            t.kind = Tok::Punct;
            t.text = std::string(p);
            for (std::size_t i = 0; i < p.size(); ++i) advance();
            matched = true;
            break;
          }
        }
        if (!matched) throw ParseError(std::string("unexpected character '") + ch + "'", t.span);
      }
      out.push_back(std::move(t));
    }
  }

 private:
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skipSpaceAndComments() {
    while (pos_ < text_.size()) {
      char ch = text_[pos_];
      if (std::isspace(static_cast<unsigned char>(ch))) {
        advance();
      } else if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '/') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (ch == '/' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '*') {
        SourceSpan at{line_, col_};
        advance();
        advance();
        while (pos_ + 1 < text_.size() && !(text_[pos_] == '*' && text_[pos_ + 1] == '/')) advance();
        if (pos_ + 1 >= text_.size()) throw ParseError("unterminated comment", at);
        advance();
        advance();
      } else {
        break;
      }
    }
  }

  void lexNumber(Token& t) {
    std::size_t start = pos_;
    bool isDouble = false;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    if (pos_ + 1 < text_.size() && text_[pos_] == '.' &&
        std::isdigit(static_cast<unsigned char>(text_[pos_ + 1]))) {
      isDouble = true;
      advance();
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      int saveLine = line_, saveCol = col_;
      advance();
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) advance();
      if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
        isDouble = true;
        while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) advance();
      } else {
        pos_ = save;
        line_ = saveLine;
        col_ = saveCol;
      }
    }
    std::string lexeme(text_.substr(start, pos_ - start));
    t.text = lexeme;
    if (isDouble) {
      t.kind = Tok::DoubleLit;
      t.doubleValue = std::strtod(lexeme.c_str(), nullptr);
    } else {
      t.kind = Tok::IntLit;
      auto [p, ec] = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), t.intValue);
      if (ec != std::errc() || t.intValue > 2147483648ULL)
        throw ParseError("integer literal out of range: " + lexeme, t.span);
    }
  }

  void lexChar(Token& t) {
    advance();  // opening quote
    if (pos_ >= text_.size()) throw ParseError("unterminated char literal", t.span);
    std::uint16_t value = 0;
    char ch = text_[pos_];
    if (ch == '\\') {
      advance();
      if (pos_ >= text_.size()) throw ParseError("unterminated char literal", t.span);
      char esc = text_[pos_];
      advance();
      switch (esc) {
        case 'n': value = '\n'; break;
        case 't': value = '\t'; break;
        case 'r': value = '\r'; break;
        case '0': value = 0; break;
        case '\\': value = '\\'; break;
        case '\'': value = '\''; break;
        case 'u': {
          if (pos_ + 4 > text_.size()) throw ParseError("bad \\u escape", t.span);
          std::string hex(text_.substr(pos_, 4));
          for (char h : hex)
            if (!std::isxdigit(static_cast<unsigned char>(h))) throw ParseError("bad \\u escape", t.span);
          value = static_cast<std::uint16_t>(std::strtoul(hex.c_str(), nullptr, 16));
          for (int i = 0; i < 4; ++i) advance();
          break;
        }
        default:
          throw ParseError(std::string("unknown escape \\") + esc, t.span);
      }
    } else {
      if (static_cast<unsigned char>(ch) >= 0x80) throw ParseError("non-ASCII char literal; use \\u", t.span);
      value = static_cast<unsigned char>(ch);
      advance();
    }
    if (pos_ >= text_.size() || text_[pos_] != '\'') throw ParseError("unterminated char literal", t.span);
    advance();
    t.kind = Tok::CharLit;
    t.charValue = value;
    t.text = "char";
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace

std::vector<Token> tokenize(std::string_view text) { return Lexer(text).run(); }

}  // namespace holegen::lang
