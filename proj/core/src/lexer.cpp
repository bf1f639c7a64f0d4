#include "headergen/lexer.hpp"

#include <array>
#include <cctype>
#include <set>

#include "headergen/error.hpp"

namespace headergen {

namespace {

const std::set<std::string>& keywords() {
  static const std::set<std::string> kw = {
      "False", "None",   "True",   "and",    "as",     "assert", "async",
      "await", "break",  "class",  "continue", "def",  "del",    "elif",
      "else",  "except", "finally", "for",   "from",   "global", "if",
      "import", "in",    "is",     "lambda", "nonlocal", "not",  "or",
      "pass",  "raise",  "return", "try",    "while",  "with",   "yield"};
  return kw;
}

// longest-match operator table, longest first
const std::array<const char*, 52>& operators() {
  static const std::array<const char*, 52> ops = {
      "**=", "//=", ">>=", "<<=", "...", "!=", ">=", "<=", "==", "->", ":=",
      "**",  "//",  "<<",  ">>",  "+=",  "-=", "*=", "/=", "%=", "&=", "|=",
      "^=",  "@=",  "+",   "-",   "*",   "/",  "%",  "@",  "&",  "|",  "^",
      "~",   "<",   ">",   "(",   ")",   "[",  "]",  "{",  "}",  ",",  ":",
      ".",   ";",   "=",   // remaining slots unused
      "",    "",    "",    "",    ""};
  return ops;
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' ||
         static_cast<unsigned char>(c) >= 0x80;
}

bool ident_cont(char c) {
  return ident_start(c) || std::isdigit(static_cast<unsigned char>(c));
}

class Lexer {
public:
  explicit Lexer(const std::string& src) : src_(src) { indents_.push_back(0); }

  std::vector<Token> run() {
    at_line_start_ = true;
    while (pos_ < src_.size()) {
      if (at_line_start_ && depth_ == 0) {
        if (!handle_indentation()) {
          continue; // blank or comment-only line was consumed
        }
        at_line_start_ = false;
      }
      lex_one();
    }
    // close the last logical line and any open indents
    if (!tokens_.empty() && !tokens_.back().is(TokKind::Newline) &&
        !tokens_.back().is(TokKind::Indent) && !tokens_.back().is(TokKind::Dedent)) {
      emit(TokKind::Newline, "\n", pos_, pos_);
    }
    while (indents_.size() > 1) {
      indents_.pop_back();
      emit(TokKind::Dedent, "", pos_, pos_);
    }
    emit(TokKind::End, "", pos_, pos_);
    return std::move(tokens_);
  }

private:
  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Syntax, "line " + std::to_string(line_) + ": " + msg);
  }

  char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char peek(size_t off = 1) const {
    return pos_ + off < src_.size() ? src_[pos_ + off] : '\0';
  }

  void advance() {
    if (src_[pos_] == '\n') {
      ++line_;
      col_ = 0;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void emit(TokKind kind, std::string text, size_t begin, size_t end) {
    Token t;
    t.kind = kind;
    t.text = std::move(text);
    t.line = tok_line_;
    t.col = tok_col_;
    t.begin = begin;
    t.end = end;
    tokens_.push_back(std::move(t));
  }

  // Returns false if the physical line was blank/comment-only and consumed.
  bool handle_indentation() {
    size_t start = pos_;
    int width = 0;
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t')) {
      width += src_[pos_] == '\t' ? 8 - (width % 8) : 1;
      advance();
    }
    if (pos_ >= src_.size()) {
      return false;
    }
    if (src_[pos_] == '\n') {
      advance();
      return false;
    }
    if (src_[pos_] == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') {
        advance();
      }
      if (pos_ < src_.size()) {
        advance();
      }
      return false;
    }
    tok_line_ = line_;
    tok_col_ = col_;
    if (width > indents_.back()) {
      indents_.push_back(width);
      emit(TokKind::Indent, "", start, pos_);
    } else {
      while (width < indents_.back()) {
        indents_.pop_back();
        emit(TokKind::Dedent, "", start, pos_);
      }
      if (width != indents_.back()) {
        error("inconsistent indentation");
      }
    }
    return true;
  }

  void lex_one() {
    char c = cur();
    tok_line_ = line_;
    tok_col_ = col_;

    if (c == '\n') {
      advance();
      if (depth_ == 0) {
        emit(TokKind::Newline, "\n", pos_ - 1, pos_);
        at_line_start_ = true;
      }
      return;
    }
    if (c == ' ' || c == '\t' || c == '\r' || c == '\f') {
      advance();
      return;
    }
    if (c == '#') {
      while (pos_ < src_.size() && src_[pos_] != '\n') {
        advance();
      }
      return;
    }
    if (c == '\\' && peek() == '\n') {
      advance();
      advance();
      return;
    }
    if (ident_start(c)) {
      lex_name_or_string_prefix();
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '.' && std::isdigit(static_cast<unsigned char>(peek())))) {
      lex_number();
      return;
    }
    if (c == '\'' || c == '"') {
      lex_string(pos_);
      return;
    }
    lex_operator();
  }

  void lex_name_or_string_prefix() {
    size_t start = pos_;
    while (pos_ < src_.size() && ident_cont(src_[pos_])) {
      advance();
    }
    std::string word = src_.substr(start, pos_ - start);
    // string prefix? (r, b, u, f and combinations, any case)
    if (word.size() <= 2 && (cur() == '\'' || cur() == '"')) {
      bool prefix_ok = true;
      for (char p : word) {
        char low = static_cast<char>(std::tolower(static_cast<unsigned char>(p)));
        if (low != 'r' && low != 'b' && low != 'u' && low != 'f') {
          prefix_ok = false;
          break;
        }
      }
      if (prefix_ok) {
        lex_string(start);
        return;
      }
    }
    emit(TokKind::Name, std::move(word), start, pos_);
  }

  void lex_number() {
    size_t start = pos_;
    if (cur() == '0' && (peek() == 'x' || peek() == 'X' || peek() == 'o' ||
                         peek() == 'O' || peek() == 'b' || peek() == 'B')) {
      advance();
      advance();
      while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_')) {
        advance();
      }
    } else {
      bool seen_dot = false;
      bool seen_exp = false;
      while (pos_ < src_.size()) {
        char c = cur();
        if (std::isdigit(static_cast<unsigned char>(c)) || c == '_') {
          advance();
        } else if (c == '.' && !seen_dot && !seen_exp) {
          seen_dot = true;
          advance();
        } else if ((c == 'e' || c == 'E') && !seen_exp &&
                   (std::isdigit(static_cast<unsigned char>(peek())) ||
                    ((peek() == '+' || peek() == '-') && std::isdigit(static_cast<unsigned char>(peek(2)))))) {
          seen_exp = true;
          advance();
          if (cur() == '+' || cur() == '-') {
            advance();
          }
        } else if (c == 'j' || c == 'J') {
          advance();
          break;
        } else {
          break;
        }
      }
    }
    emit(TokKind::Number, src_.substr(start, pos_ - start), start, pos_);
  }

  void lex_string(size_t start) {
    // pos_ is at the opening quote; start covers any prefix letters
    char quote = cur();
    bool triple = peek() == quote && peek(2) == quote;
    advance();
    if (triple) {
      advance();
      advance();
    }
    while (pos_ < src_.size()) {
      char c = cur();
      if (c == '\\') {
        advance();
        if (pos_ < src_.size()) {
          advance();
        }
        continue;
      }
      if (!triple && c == '\n') {
        error("unterminated string literal");
      }
      if (c == quote) {
        if (!triple) {
          advance();
          emit(TokKind::String, src_.substr(start, pos_ - start), start, pos_);
          return;
        }
        if (peek() == quote && peek(2) == quote) {
          advance();
          advance();
          advance();
          emit(TokKind::String, src_.substr(start, pos_ - start), start, pos_);
          return;
        }
      }
      advance();
    }
    error("unterminated string literal");
  }

  void lex_operator() {
    for (const char* op : operators()) {
      if (*op == '\0') {
        continue;
      }
      size_t len = std::char_traits<char>::length(op);
      if (src_.compare(pos_, len, op) == 0) {
        size_t start = pos_;
        for (size_t i = 0; i < len; ++i) {
          advance();
        }
        if (op[0] == '(' || op[0] == '[' || op[0] == '{') {
          ++depth_;
        } else if (op[0] == ')' || op[0] == ']' || op[0] == '}') {
          if (depth_ > 0) {
            --depth_;
          }
        }
        emit(TokKind::Op, op, start, pos_);
        return;
      }
    }
    error(std::string("unexpected character '") + cur() + "'");
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 0;
  int tok_line_ = 1;
  int tok_col_ = 0;
  int depth_ = 0;
  bool at_line_start_ = true;
  std::vector<int> indents_;
  std::vector<Token> tokens_;
};

} // namespace

bool is_python_keyword(const std::string& word) {
  return keywords().count(word) > 0;
}

std::vector<Token> tokenize(const std::string& source) {
  return Lexer(source).run();
}

} // namespace headergen
