#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "glp/process.hpp"

namespace glp {

/// Syntax error with a 1-based source position.
class ParseError : public InputError {
 public:
  ParseError(const std::string& message, int line, int column);
  int line() const { return line_; }
  int column() const { return column_; }
  const std::string& message() const { return message_; }

 private:
  std::string message_;
  int line_;
  int column_;
};

enum class Tok : uint8_t {
  Ident,     // letters, digits, '_' and a trailing 'N instance marker
  RName,     // #ident
  Number,
  String,    // "..."
  Punct,     // one of . , ( ) { } < > | + ! @ ^ ; : = ? [ ] and ->, -
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int line = 1;
  int column = 1;

  bool is(std::string_view punct) const { return kind == Tok::Punct && text == punct; }
  bool is_word(std::string_view word) const { return kind == Tok::Ident && text == word; }
};

/// Splits source text into tokens; `//` starts a comment running to the end
/// of the line.
std::vector<Token> tokenize(std::string_view text);

}  // namespace glp
