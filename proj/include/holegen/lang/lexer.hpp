#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "holegen/lang/ast.hpp"

namespace holegen::lang {

enum class Tok : std::uint8_t {
  End,
  Ident,
  IntLit,
  DoubleLit,
  CharLit,
  HoleMarker,  // ?H<k>
  Punct,       // operators and delimiters, text in Token::text
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  std::uint64_t intValue = 0;  // IntLit (unsigned magnitude), HoleMarker id
  double doubleValue = 0;
  std::uint16_t charValue = 0;
  SourceSpan span;
};

/// Splits MiniJ source into tokens. Throws ParseError on malformed input.
std::vector<Token> tokenize(std::string_view text);

}  // namespace holegen::lang
