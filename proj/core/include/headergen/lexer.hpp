#pragma once

#include <string>
#include <vector>

namespace headergen {

enum class TokKind {
  Name,    // identifiers and keywords
  Number,
  String,  // any string literal, including f-strings (kept opaque)
  Op,
  Newline, // logical line end
  Indent,
  Dedent,
  End,
};

struct Token {
  TokKind kind = TokKind::End;
  std::string text;   // operator text, identifier, or raw literal text
  int line = 0;       // 1-based script line
  int col = 0;        // 0-based column
  size_t begin = 0;   // byte offsets into the script
  size_t end = 0;

  bool is(TokKind k) const { return kind == k; }
  bool is_op(const char* s) const { return kind == TokKind::Op && text == s; }
  bool is_name(const char* s) const { return kind == TokKind::Name && text == s; }
};

bool is_python_keyword(const std::string& word);

// Tokenizes a composite script. Handles indentation (INDENT/DEDENT),
// implicit line joining inside brackets, backslash continuations, comments,
// and the usual string-prefix zoo. Throws Error(Syntax) with a script line
// on malformed input; callers translate lines to notebook locations.
std::vector<Token> tokenize(const std::string& source);

} // namespace headergen
