#include "headergen/parser.hpp"

#include <cctype>
#include <functional>

#include "headergen/error.hpp"
#include "headergen/lexer.hpp"

namespace headergen {

namespace {

bool is_soft_block_keyword(const std::string& name) {
  return name == "match" || name == "case";
}

std::string decode_string_literal(const std::string& raw, bool* is_fstring) {
  size_t i = 0;
  bool fstr = false;
  while (i < raw.size() && raw[i] != '\'' && raw[i] != '"') {
    char low = static_cast<char>(std::tolower(static_cast<unsigned char>(raw[i])));
    if (low == 'f') {
      fstr = true;
    }
    ++i;
  }
  if (is_fstring) {
    *is_fstring = fstr;
  }
  if (i >= raw.size()) {
    return raw;
  }
  char quote = raw[i];
  size_t qlen = (raw.size() >= i + 6 && raw[i + 1] == quote && raw[i + 2] == quote) ? 3 : 1;
  std::string body = raw.substr(i + qlen, raw.size() - (i + qlen) - qlen);
  std::string out;
  out.reserve(body.size());
  for (size_t k = 0; k < body.size(); ++k) {
    if (body[k] == '\\' && k + 1 < body.size()) {
      char n = body[k + 1];
      if (n == '\'' || n == '"' || n == '\\') {
        out.push_back(n);
        ++k;
        continue;
      }
      if (n == 'n') {
        out.push_back('\n');
        ++k;
        continue;
      }
      if (n == 't') {
        out.push_back('\t');
        ++k;
        continue;
      }
    }
    out.push_back(body[k]);
  }
  return out;
}

class Parser {
public:
  explicit Parser(const std::string& source)
      : source_(source), tokens_(tokenize(source)) {}

  ModuleIR parse() {
    ModuleIR ir;
    skip_newlines();
    while (!cur().is(TokKind::End)) {
      parse_statement_into(ir.body);
      skip_newlines();
    }
    return ir;
  }

private:
  // --- token plumbing ------------------------------------------------------

  const Token& cur() const { return tokens_[pos_]; }
  const Token& peek(size_t off = 1) const {
    size_t i = pos_ + off;
    return i < tokens_.size() ? tokens_[i] : tokens_.back();
  }
  const Token& advance() { return tokens_[pos_++]; }

  bool accept_op(const char* op) {
    if (cur().is_op(op)) {
      ++pos_;
      return true;
    }
    return false;
  }

  bool accept_name(const char* name) {
    if (cur().is_name(name)) {
      ++pos_;
      return true;
    }
    return false;
  }

  const Token& expect_op(const char* op) {
    if (!cur().is_op(op)) {
      error(std::string("expected '") + op + "'");
    }
    return advance();
  }

  const Token& expect_name_token() {
    if (!cur().is(TokKind::Name) || is_python_keyword(cur().text)) {
      error("expected identifier");
    }
    return advance();
  }

  void expect_newline() {
    if (cur().is(TokKind::End)) {
      return;
    }
    if (!cur().is(TokKind::Newline)) {
      error("expected end of line");
    }
    ++pos_;
  }

  void skip_newlines() {
    while (cur().is(TokKind::Newline)) {
      ++pos_;
    }
  }

  [[noreturn]] void error(const std::string& msg) const {
    fail(ErrorKind::Syntax,
         "line " + std::to_string(cur().line) + ": " + msg +
             (cur().text.empty() ? "" : " (near '" + cur().text + "')"));
  }

  template <typename T>
  std::unique_ptr<T> make_expr(const Token& at) {
    auto node = std::make_unique<T>();
    node->line = at.line;
    node->col = at.col;
    node->begin = at.begin;
    node->end = at.end;
    return node;
  }

  void close_expr(Expr& e) {
    e.end = tokens_[pos_ > 0 ? pos_ - 1 : 0].end;
  }

  // --- statements ----------------------------------------------------------

  void parse_statement_into(Block& block) {
    const Token& t = cur();
    if (t.is(TokKind::Name) && is_python_keyword(t.text)) {
      const std::string& kw = t.text;
      if (kw == "import") {
        parse_import(block);
        return;
      }
      if (kw == "from") {
        parse_from_import(block);
        return;
      }
      if (kw == "def") {
        block.push_back(parse_function_def({}));
        return;
      }
      if (kw == "class") {
        block.push_back(parse_class_def({}));
        return;
      }
      if (kw == "if") {
        block.push_back(parse_if());
        return;
      }
      if (kw == "while") {
        block.push_back(parse_while());
        return;
      }
      if (kw == "for") {
        block.push_back(parse_for());
        return;
      }
      if (kw == "try") {
        block.push_back(parse_try());
        return;
      }
      if (kw == "with") {
        block.push_back(parse_with());
        return;
      }
      if (kw == "async") {
        ++pos_; // async def / async for / async with analyzed like sync forms
        if (cur().is_name("def")) {
          block.push_back(parse_function_def({}));
        } else if (cur().is_name("for")) {
          block.push_back(parse_for());
        } else if (cur().is_name("with")) {
          block.push_back(parse_with());
        } else {
          error("unexpected 'async'");
        }
        return;
      }
    }
    if (cur().is_op("@")) {
      parse_decorated(block);
      return;
    }
    // narrow escape hatch for unsupported soft-keyword blocks (match/case)
    if (t.is(TokKind::Name) && is_soft_block_keyword(t.text) && !peek().is_op("=") &&
        !peek().is_op("(") && !peek().is_op(".") && !peek().is_op("[") &&
        !peek().is(TokKind::Newline) && !peek().is_op(",") && !peek().is_op(";")) {
      block.push_back(consume_opaque_block(t));
      return;
    }
    parse_simple_statements(block);
  }

  void parse_decorated(Block& block) {
    std::vector<ExprPtr> decorators;
    while (accept_op("@")) {
      decorators.push_back(parse_expression());
      expect_newline();
      skip_newlines();
    }
    if (accept_name("async")) {
      // fallthrough to def
    }
    if (cur().is_name("def")) {
      block.push_back(parse_function_def(std::move(decorators)));
    } else if (cur().is_name("class")) {
      block.push_back(parse_class_def(std::move(decorators)));
    } else {
      error("decorator must precede a def or class");
    }
  }

  void parse_simple_statements(Block& block) {
    while (true) {
      block.push_back(parse_simple_statement());
      if (accept_op(";")) {
        if (cur().is(TokKind::Newline) || cur().is(TokKind::End)) {
          break;
        }
        continue;
      }
      break;
    }
    expect_newline();
  }

  StmtPtr parse_simple_statement() {
    const Token& t = cur();
    if (t.is(TokKind::Name) && is_python_keyword(t.text)) {
      const std::string& kw = t.text;
      if (kw == "return") {
        return parse_return();
      }
      if (kw == "pass" || kw == "break" || kw == "continue") {
        ++pos_;
        auto kind = kw == "pass" ? Stmt::Kind::Pass
                    : kw == "break" ? Stmt::Kind::Break
                                    : Stmt::Kind::Continue;
        auto s = std::make_unique<SimpleStmt>(kind);
        s->line = t.line;
        return s;
      }
      if (kw == "global" || kw == "nonlocal") {
        ++pos_;
        auto s = std::make_unique<ScopeDeclStmt>(
            kw == "global" ? Stmt::Kind::Global : Stmt::Kind::Nonlocal);
        s->line = t.line;
        s->names.push_back(expect_name_token().text);
        while (accept_op(",")) {
          s->names.push_back(expect_name_token().text);
        }
        return s;
      }
      if (kw == "del" || kw == "assert" || kw == "raise") {
        ++pos_;
        auto kind = kw == "del" ? Stmt::Kind::Delete
                    : kw == "assert" ? Stmt::Kind::Assert
                                     : Stmt::Kind::Raise;
        auto s = std::make_unique<ExprListStmt>(kind);
        s->line = t.line;
        if (!cur().is(TokKind::Newline) && !cur().is(TokKind::End) && !cur().is_op(";")) {
          s->values.push_back(parse_expression());
          while (accept_op(",")) {
            s->values.push_back(parse_expression());
          }
          if (kind == Stmt::Kind::Raise && accept_name("from")) {
            s->values.push_back(parse_expression());
          }
        }
        return s;
      }
      if (kw == "yield") {
        auto s = std::make_unique<ExprStmt>();
        s->line = t.line;
        s->value = parse_expression();
        return s;
      }
      if (kw == "import" || kw == "from") {
        // one-line suite like `if x: import os`
        Block tmp;
        ++pos_;
        if (kw == "import") {
          parse_import_clause(tmp, t);
        } else {
          parse_from_import_clause(tmp, t);
        }
        return std::move(tmp.front());
      }
    }
    return parse_expr_statement();
  }

  StmtPtr parse_return() {
    const Token& t = advance(); // return
    auto s = std::make_unique<ReturnStmt>();
    s->line = t.line;
    if (!cur().is(TokKind::Newline) && !cur().is(TokKind::End) && !cur().is_op(";")) {
      s->value = parse_testlist();
    }
    return s;
  }

  StmtPtr parse_expr_statement() {
    const Token& start = cur();
    ExprPtr first = parse_testlist_star();

    if (cur().is_op("=")) {
      auto s = std::make_unique<AssignStmt>();
      s->line = start.line;
      s->begin = start.begin;
      s->targets.push_back(std::move(first));
      while (accept_op("=")) {
        ExprPtr next = parse_testlist_star();
        if (cur().is_op("=")) {
          s->targets.push_back(std::move(next));
        } else {
          s->value = std::move(next);
          break;
        }
      }
      for (const auto& target : s->targets) {
        validate_assign_target(*target);
      }
      s->end = s->value->end;
      return s;
    }

    static const char* aug_ops[] = {"+=", "-=", "*=", "/=", "//=", "%=",  "**=",
                                    "&=", "|=", "^=", ">>=", "<<=", "@="};
    for (const char* op : aug_ops) {
      if (cur().is_op(op)) {
        ++pos_;
        auto s = std::make_unique<AugAssignStmt>();
        s->line = start.line;
        s->op = std::string(op, std::char_traits<char>::length(op) - 1);
        s->target = std::move(first);
        validate_assign_target(*s->target);
        s->value = parse_testlist();
        return s;
      }
    }

    if (cur().is_op(":")) {
      ++pos_;
      auto s = std::make_unique<AnnAssignStmt>();
      s->line = start.line;
      s->target = std::move(first);
      s->annotation = parse_expression();
      if (accept_op("=")) {
        s->value = parse_testlist();
      }
      return s;
    }

    auto s = std::make_unique<ExprStmt>();
    s->line = start.line;
    s->begin = first->begin;
    s->end = first->end;
    s->value = std::move(first);
    return s;
  }

  void validate_assign_target(const Expr& e) {
    switch (e.kind) {
    case Expr::Kind::Name:
    case Expr::Kind::Attribute:
    case Expr::Kind::Subscript:
      return;
    case Expr::Kind::Starred:
      validate_assign_target(*static_cast<const StarredExpr&>(e).value);
      return;
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
      for (const auto& el : static_cast<const SequenceExpr&>(e).elements) {
        validate_assign_target(*el);
      }
      return;
    default:
      fail(ErrorKind::Syntax,
           "line " + std::to_string(e.line) + ": cannot assign to this expression");
    }
  }

  StmtPtr consume_opaque_block(const Token& start) {
    auto s = std::make_unique<OpaqueStmt>();
    s->line = start.line;
    s->begin = start.begin;
    while (!cur().is(TokKind::Newline) && !cur().is(TokKind::End)) {
      ++pos_;
    }
    s->end = tokens_[pos_ > 0 ? pos_ - 1 : 0].end;
    if (cur().is(TokKind::Newline)) {
      ++pos_;
    }
    if (cur().is(TokKind::Indent)) {
      int depth = 0;
      do {
        if (cur().is(TokKind::Indent)) {
          ++depth;
        } else if (cur().is(TokKind::Dedent)) {
          --depth;
        }
        ++pos_;
      } while (depth > 0 && !cur().is(TokKind::End));
      s->end = tokens_[pos_ > 0 ? pos_ - 1 : 0].end;
    }
    s->text = source_.substr(s->begin, s->end - s->begin);
    return s;
  }

  void parse_import(Block& block) {
    const Token& t = advance(); // import
    parse_import_clause(block, t);
    expect_newline();
  }

  void parse_import_clause(Block& block, const Token& t) {
    auto s = std::make_unique<ImportStmt>();
    s->line = t.line;
    do {
      ImportItem item;
      item.module = parse_dotted_name();
      if (accept_name("as")) {
        item.alias = expect_name_token().text;
      } else {
        item.alias = item.module.substr(0, item.module.find('.'));
      }
      s->items.push_back(std::move(item));
    } while (accept_op(","));
    block.push_back(std::move(s));
  }

  void parse_from_import(Block& block) {
    const Token& t = advance(); // from
    parse_from_import_clause(block, t);
    expect_newline();
  }

  void parse_from_import_clause(Block& block, const Token& t) {
    auto s = std::make_unique<ImportFromStmt>();
    s->line = t.line;
    while (cur().is_op(".") || cur().is_op("...")) {
      s->level += cur().is_op("...") ? 3 : 1;
      ++pos_;
    }
    if (!cur().is_name("import")) {
      s->module = parse_dotted_name();
    }
    if (!accept_name("import")) {
      error("expected 'import'");
    }
    if (accept_op("*")) {
      s->star = true;
      block.push_back(std::move(s));
      return;
    }
    bool parens = accept_op("(");
    do {
      if (parens && cur().is_op(")")) {
        break;
      }
      ImportItem item;
      item.module = expect_name_token().text;
      item.alias = accept_name("as") ? expect_name_token().text : item.module;
      s->names.push_back(std::move(item));
    } while (accept_op(","));
    if (parens) {
      expect_op(")");
    }
    block.push_back(std::move(s));
  }

  std::string parse_dotted_name() {
    std::string path = expect_name_token().text;
    while (cur().is_op(".")) {
      ++pos_;
      path += "." + expect_name_token().text;
    }
    return path;
  }

  StmtPtr parse_function_def(std::vector<ExprPtr> decorators) {
    const Token& t = advance(); // def
    auto s = std::make_unique<FunctionDefStmt>();
    s->line = t.line;
    s->decorators = std::move(decorators);
    s->name = expect_name_token().text;
    expect_op("(");
    s->params = parse_params();
    expect_op(")");
    if (accept_op("->")) {
      parse_expression(); // return annotation, not analyzed
    }
    expect_op(":");
    s->body = parse_block();
    return s;
  }

  std::vector<Param> parse_params() {
    std::vector<Param> params;
    while (!cur().is_op(")")) {
      Param p;
      if (accept_op("/")) {
        if (!accept_op(",")) {
          break;
        }
        continue;
      }
      if (accept_op("*")) {
        p.kind = Param::Kind::Star;
        if (cur().is(TokKind::Name) && !is_python_keyword(cur().text)) {
          p.name = advance().text;
        }
      } else if (accept_op("**")) {
        p.kind = Param::Kind::DoubleStar;
        p.name = expect_name_token().text;
      } else {
        p.name = expect_name_token().text;
        if (accept_op(":")) {
          parse_expression(); // annotation, not analyzed
        }
        if (accept_op("=")) {
          p.default_value = parse_expression();
        }
      }
      params.push_back(std::move(p));
      if (!accept_op(",")) {
        break;
      }
    }
    return params;
  }

  StmtPtr parse_class_def(std::vector<ExprPtr> decorators) {
    const Token& t = advance(); // class
    auto s = std::make_unique<ClassDefStmt>();
    s->line = t.line;
    s->decorators = std::move(decorators);
    s->name = expect_name_token().text;
    if (accept_op("(")) {
      while (!cur().is_op(")")) {
        if (cur().is(TokKind::Name) && peek().is_op("=")) {
          ++pos_; // metaclass=... and other class keywords
          ++pos_;
          parse_expression();
        } else if (accept_op("**")) {
          parse_expression();
        } else {
          s->bases.push_back(parse_expression());
        }
        if (!accept_op(",")) {
          break;
        }
      }
      expect_op(")");
    }
    expect_op(":");
    s->body = parse_block();
    return s;
  }

  StmtPtr parse_if() {
    const Token& t = advance(); // if / elif
    auto s = std::make_unique<IfStmt>();
    s->line = t.line;
    s->test = parse_expression();
    expect_op(":");
    s->body = parse_block();
    skip_newlines();
    if (cur().is_name("elif")) {
      s->orelse.push_back(parse_if());
    } else if (accept_name("else")) {
      expect_op(":");
      s->orelse = parse_block();
    }
    return s;
  }

  StmtPtr parse_while() {
    const Token& t = advance();
    auto s = std::make_unique<WhileStmt>();
    s->line = t.line;
    s->test = parse_expression();
    expect_op(":");
    s->body = parse_block();
    skip_newlines();
    if (accept_name("else")) {
      expect_op(":");
      s->orelse = parse_block();
    }
    return s;
  }

  StmtPtr parse_for() {
    const Token& t = advance();
    auto s = std::make_unique<ForStmt>();
    s->line = t.line;
    s->target = parse_target_list();
    if (!accept_name("in")) {
      error("expected 'in'");
    }
    s->iter = parse_testlist();
    expect_op(":");
    s->body = parse_block();
    skip_newlines();
    if (accept_name("else")) {
      expect_op(":");
      s->orelse = parse_block();
    }
    return s;
  }

  StmtPtr parse_try() {
    const Token& t = advance();
    auto s = std::make_unique<TryStmt>();
    s->line = t.line;
    expect_op(":");
    s->body = parse_block();
    skip_newlines();
    while (cur().is_name("except")) {
      ExceptHandler handler;
      handler.line = cur().line;
      ++pos_;
      accept_op("*"); // except* groups analyzed like plain handlers
      if (!cur().is_op(":")) {
        handler.type = parse_expression();
        if (accept_name("as")) {
          handler.name = expect_name_token().text;
        }
      }
      expect_op(":");
      handler.body = parse_block();
      s->handlers.push_back(std::move(handler));
      skip_newlines();
    }
    if (accept_name("else")) {
      expect_op(":");
      s->orelse = parse_block();
      skip_newlines();
    }
    if (accept_name("finally")) {
      expect_op(":");
      s->finally = parse_block();
    }
    if (s->handlers.empty() && s->finally.empty()) {
      error("try without except or finally");
    }
    return s;
  }

  StmtPtr parse_with() {
    const Token& t = advance();
    auto s = std::make_unique<WithStmt>();
    s->line = t.line;
    bool parens = accept_op("(");
    do {
      WithItem item;
      item.context = parse_expression();
      if (accept_name("as")) {
        item.target = parse_primary_target();
      }
      s->items.push_back(std::move(item));
    } while (accept_op(","));
    if (parens) {
      expect_op(")");
    }
    expect_op(":");
    s->body = parse_block();
    return s;
  }

  Block parse_block() {
    Block block;
    if (!cur().is(TokKind::Newline)) {
      // one-line suite
      parse_simple_statements(block);
      return block;
    }
    ++pos_;
    skip_newlines();
    if (!cur().is(TokKind::Indent)) {
      error("expected an indented block");
    }
    ++pos_;
    skip_newlines();
    while (!cur().is(TokKind::Dedent) && !cur().is(TokKind::End)) {
      parse_statement_into(block);
      skip_newlines();
    }
    if (cur().is(TokKind::Dedent)) {
      ++pos_;
    }
    return block;
  }

  // --- expressions ---------------------------------------------------------

  ExprPtr parse_testlist() { return parse_testlist_impl(false); }
  ExprPtr parse_testlist_star() { return parse_testlist_impl(true); }

  ExprPtr parse_testlist_impl(bool allow_star) {
    const Token& start = cur();
    ExprPtr first = allow_star && cur().is_op("*") ? parse_starred() : parse_expression();
    if (!cur().is_op(",")) {
      return first;
    }
    auto tuple = make_expr<SequenceExpr>(start);
    tuple->kind = Expr::Kind::Tuple;
    tuple->elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (cur().is(TokKind::Newline) || cur().is(TokKind::End) || cur().is_op("=") ||
          cur().is_op(":") || cur().is_op(")") || cur().is_op("]") || cur().is_op("}") ||
          cur().is_op(";") || cur().is_name("in")) {
        break;
      }
      tuple->elements.push_back(cur().is_op("*") ? parse_starred() : parse_expression());
    }
    close_expr(*tuple);
    return tuple;
  }

  ExprPtr parse_target_list() {
    // for-loop targets: names/attrs/subscripts/tuples, no 'in' consumption
    const Token& start = cur();
    ExprPtr first = parse_primary_target();
    if (!cur().is_op(",")) {
      return first;
    }
    auto tuple = make_expr<SequenceExpr>(start);
    tuple->kind = Expr::Kind::Tuple;
    tuple->elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (cur().is_name("in")) {
        break;
      }
      tuple->elements.push_back(parse_primary_target());
    }
    close_expr(*tuple);
    return tuple;
  }

  ExprPtr parse_primary_target() {
    if (cur().is_op("*")) {
      return parse_starred();
    }
    if (cur().is_op("(") || cur().is_op("[")) {
      const char* closer = cur().is_op("(") ? ")" : "]";
      const Token& start = advance();
      auto tuple = make_expr<SequenceExpr>(start);
      tuple->kind = Expr::Kind::Tuple;
      while (!cur().is_op(closer)) {
        tuple->elements.push_back(parse_primary_target());
        if (!accept_op(",")) {
          break;
        }
      }
      expect_op(closer);
      close_expr(*tuple);
      return tuple;
    }
    ExprPtr e = parse_postfix(parse_atom());
    validate_assign_target(*e);
    return e;
  }

  ExprPtr parse_starred() {
    const Token& star = expect_op("*");
    auto s = make_expr<StarredExpr>(star);
    s->value = parse_expression();
    close_expr(*s);
    return s;
  }

  ExprPtr parse_expression() {
    if (cur().is_name("lambda")) {
      return parse_lambda();
    }
    if (cur().is(TokKind::Name) && !is_python_keyword(cur().text) && peek().is_op(":=")) {
      const Token& t = cur();
      auto walrus = std::make_unique<BinOpExpr>();
      walrus->line = t.line;
      walrus->begin = t.begin;
      walrus->op = ":=";
      auto name = make_expr<NameExpr>(t);
      name->id = t.text;
      pos_ += 2;
      walrus->lhs = std::move(name);
      walrus->rhs = parse_expression();
      walrus->end = walrus->rhs->end;
      return walrus;
    }
    ExprPtr cond = parse_or();
    if (cur().is_name("if")) {
      const Token& t = advance();
      auto node = make_expr<IfExpExpr>(t);
      node->line = cond->line;
      node->begin = cond->begin;
      node->body = std::move(cond);
      node->test = parse_or();
      if (!accept_name("else")) {
        error("expected 'else' in conditional expression");
      }
      node->orelse = parse_expression();
      close_expr(*node);
      return node;
    }
    return cond;
  }

  ExprPtr parse_lambda() {
    const Token& t = advance(); // lambda
    auto node = make_expr<LambdaExpr>(t);
    while (!cur().is_op(":")) {
      Param p;
      if (accept_op("*")) {
        p.kind = Param::Kind::Star;
        if (cur().is(TokKind::Name) && !is_python_keyword(cur().text)) {
          p.name = advance().text;
        }
      } else if (accept_op("**")) {
        p.kind = Param::Kind::DoubleStar;
        p.name = expect_name_token().text;
      } else {
        p.name = expect_name_token().text;
        if (accept_op("=")) {
          p.default_value = parse_expression();
        }
      }
      node->params.push_back(std::move(p));
      if (!accept_op(",")) {
        break;
      }
    }
    expect_op(":");
    node->body = parse_expression();
    close_expr(*node);
    return node;
  }

  ExprPtr parse_or() {
    ExprPtr lhs = parse_and();
    if (!cur().is_name("or")) {
      return lhs;
    }
    auto node = make_expr<BoolOpExpr>(cur());
    node->line = lhs->line;
    node->begin = lhs->begin;
    node->op = "or";
    node->values.push_back(std::move(lhs));
    while (accept_name("or")) {
      node->values.push_back(parse_and());
    }
    close_expr(*node);
    return node;
  }

  ExprPtr parse_and() {
    ExprPtr lhs = parse_not();
    if (!cur().is_name("and")) {
      return lhs;
    }
    auto node = make_expr<BoolOpExpr>(cur());
    node->line = lhs->line;
    node->begin = lhs->begin;
    node->op = "and";
    node->values.push_back(std::move(lhs));
    while (accept_name("and")) {
      node->values.push_back(parse_not());
    }
    close_expr(*node);
    return node;
  }

  ExprPtr parse_not() {
    if (cur().is_name("not")) {
      const Token& t = advance();
      auto node = make_expr<UnaryOpExpr>(t);
      node->op = "not";
      node->operand = parse_not();
      close_expr(*node);
      return node;
    }
    return parse_comparison();
  }

  ExprPtr parse_comparison() {
    ExprPtr lhs = parse_bitor();
    std::unique_ptr<CompareExpr> node;
    while (true) {
      std::string op;
      if (cur().is_op("==") || cur().is_op("!=") || cur().is_op("<") ||
          cur().is_op(">") || cur().is_op("<=") || cur().is_op(">=")) {
        op = advance().text;
      } else if (cur().is_name("in")) {
        ++pos_;
        op = "in";
      } else if (cur().is_name("not") && peek().is_name("in")) {
        pos_ += 2;
        op = "not in";
      } else if (cur().is_name("is")) {
        ++pos_;
        op = accept_name("not") ? "is not" : "is";
      } else {
        break;
      }
      if (!node) {
        node = make_expr<CompareExpr>(cur());
        node->line = lhs->line;
        node->begin = lhs->begin;
        node->first = std::move(lhs);
      }
      node->ops.push_back(op);
      node->rest.push_back(parse_bitor());
    }
    if (!node) {
      return lhs;
    }
    close_expr(*node);
    return node;
  }

  using BinParser = ExprPtr (Parser::*)();

  ExprPtr parse_binop_level(BinParser next, std::initializer_list<const char*> ops) {
    ExprPtr lhs = (this->*next)();
    while (true) {
      const char* matched = nullptr;
      for (const char* op : ops) {
        if (cur().is_op(op)) {
          matched = op;
          break;
        }
      }
      if (!matched) {
        return lhs;
      }
      ++pos_;
      auto node = std::make_unique<BinOpExpr>();
      node->line = lhs->line;
      node->col = lhs->col;
      node->begin = lhs->begin;
      node->op = matched;
      node->lhs = std::move(lhs);
      node->rhs = (this->*next)();
      node->end = node->rhs->end;
      lhs = std::move(node);
    }
  }

  ExprPtr parse_bitor() { return parse_binop_level(&Parser::parse_bitxor, {"|"}); }
  ExprPtr parse_bitxor() { return parse_binop_level(&Parser::parse_bitand, {"^"}); }
  ExprPtr parse_bitand() { return parse_binop_level(&Parser::parse_shift, {"&"}); }
  ExprPtr parse_shift() { return parse_binop_level(&Parser::parse_arith, {"<<", ">>"}); }
  ExprPtr parse_arith() { return parse_binop_level(&Parser::parse_term, {"+", "-"}); }
  ExprPtr parse_term() {
    return parse_binop_level(&Parser::parse_factor, {"*", "/", "//", "%", "@"});
  }

  ExprPtr parse_factor() {
    if (cur().is_op("+") || cur().is_op("-") || cur().is_op("~")) {
      const Token& t = advance();
      auto node = make_expr<UnaryOpExpr>(t);
      node->op = t.text;
      node->operand = parse_factor();
      close_expr(*node);
      return node;
    }
    return parse_power();
  }

  ExprPtr parse_power() {
    ExprPtr base = parse_postfix(parse_atom());
    if (cur().is_op("**")) {
      ++pos_;
      auto node = std::make_unique<BinOpExpr>();
      node->line = base->line;
      node->begin = base->begin;
      node->op = "**";
      node->lhs = std::move(base);
      node->rhs = parse_factor();
      node->end = node->rhs->end;
      return node;
    }
    return base;
  }

  ExprPtr parse_postfix(ExprPtr base) {
    while (true) {
      if (cur().is_op("(")) {
        const Token& t = advance();
        auto call = make_expr<CallExpr>(t);
        call->line = base->line;
        call->begin = base->begin;
        call->call_line = call_line_of(*base);
        call->func = std::move(base);
        parse_call_args(*call);
        expect_op(")");
        close_expr(*call);
        base = std::move(call);
      } else if (cur().is_op("[")) {
        const Token& t = advance();
        auto sub = make_expr<SubscriptExpr>(t);
        sub->line = base->line;
        sub->begin = base->begin;
        sub->value = std::move(base);
        sub->index = parse_subscript_index();
        expect_op("]");
        close_expr(*sub);
        base = std::move(sub);
      } else if (cur().is_op(".")) {
        ++pos_;
        const Token& name = expect_name_token();
        auto attr = std::make_unique<AttributeExpr>();
        attr->line = base->line;
        attr->begin = base->begin;
        attr->attr = name.text;
        attr->attr_line = name.line;
        attr->value = std::move(base);
        attr->end = name.end;
        base = std::move(attr);
      } else {
        return base;
      }
    }
  }

  static int call_line_of(const Expr& callee) {
    if (callee.kind == Expr::Kind::Attribute) {
      return static_cast<const AttributeExpr&>(callee).attr_line;
    }
    return callee.line;
  }

  void parse_call_args(CallExpr& call) {
    while (!cur().is_op(")")) {
      CallArg arg;
      if (accept_op("*")) {
        arg.kind = CallArg::Kind::Star;
        arg.value = parse_expression();
      } else if (accept_op("**")) {
        arg.kind = CallArg::Kind::DoubleStar;
        arg.value = parse_expression();
      } else if (cur().is(TokKind::Name) && !is_python_keyword(cur().text) &&
                 peek().is_op("=")) {
        arg.kind = CallArg::Kind::Keyword;
        arg.name = advance().text;
        ++pos_; // '='
        arg.value = parse_expression();
      } else {
        arg.value = parse_expression();
        if (cur().is_name("for")) {
          arg.value = parse_comprehension_tail(std::move(arg.value),
                                               ComprehensionExpr::Flavor::Generator);
        }
      }
      call.args.push_back(std::move(arg));
      if (!accept_op(",")) {
        break;
      }
    }
  }

  ExprPtr parse_subscript_index() {
    auto piece = [this]() -> ExprPtr {
      if (cur().is_op(":") || looks_like_slice()) {
        return parse_slice();
      }
      return parse_expression();
    };
    ExprPtr first = piece();
    if (!cur().is_op(",")) {
      return first;
    }
    auto tuple = std::make_unique<SequenceExpr>(Expr::Kind::Tuple);
    tuple->line = first->line;
    tuple->begin = first->begin;
    tuple->elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (cur().is_op("]")) {
        break;
      }
      tuple->elements.push_back(piece());
    }
    close_expr(*tuple);
    return tuple;
  }

  bool looks_like_slice() {
    // a ':' at the current bracket level before ',' or ']' means a slice
    int depth = 0;
    for (size_t i = pos_; i < tokens_.size(); ++i) {
      const Token& t = tokens_[i];
      if (t.is_op("(") || t.is_op("[") || t.is_op("{")) {
        ++depth;
      } else if (t.is_op(")") || t.is_op("}")) {
        --depth;
      } else if (t.is_op("]")) {
        if (depth == 0) {
          return false;
        }
        --depth;
      } else if (depth == 0 && t.is_op(":")) {
        return true;
      } else if (depth == 0 && t.is_op(",")) {
        return false;
      } else if (t.is(TokKind::End)) {
        break;
      }
    }
    return false;
  }

  ExprPtr parse_slice() {
    auto node = std::make_unique<SliceExpr>();
    node->line = cur().line;
    node->begin = cur().begin;
    if (!cur().is_op(":")) {
      node->lower = parse_expression();
    }
    expect_op(":");
    if (!cur().is_op("]") && !cur().is_op(":") && !cur().is_op(",")) {
      node->upper = parse_expression();
    }
    if (accept_op(":")) {
      if (!cur().is_op("]") && !cur().is_op(",")) {
        node->step = parse_expression();
      }
    }
    close_expr(*node);
    return node;
  }

  ExprPtr parse_comprehension_tail(ExprPtr element, ComprehensionExpr::Flavor flavor,
                                   ExprPtr dict_value = nullptr) {
    auto node = std::make_unique<ComprehensionExpr>();
    node->flavor = flavor;
    node->line = element->line;
    node->begin = element->begin;
    node->element = std::move(element);
    node->value = std::move(dict_value);
    while (cur().is_name("for") || cur().is_name("async")) {
      accept_name("async");
      if (!accept_name("for")) {
        break;
      }
      ComprehensionClause clause;
      clause.target = parse_target_list();
      if (!accept_name("in")) {
        error("expected 'in' in comprehension");
      }
      clause.iter = parse_or();
      while (cur().is_name("if")) {
        ++pos_;
        clause.conditions.push_back(parse_or());
      }
      node->clauses.push_back(std::move(clause));
    }
    close_expr(*node);
    return node;
  }

  ExprPtr parse_atom() {
    const Token& t = cur();
    switch (t.kind) {
    case TokKind::Name: {
      if (!is_python_keyword(t.text)) {
        ++pos_;
        auto node = make_expr<NameExpr>(t);
        node->id = t.text;
        return node;
      }
      if (t.text == "None") {
        ++pos_;
        return make_literal(t, Expr::Kind::NoneLit, false);
      }
      if (t.text == "True" || t.text == "False") {
        ++pos_;
        return make_literal(t, Expr::Kind::BoolLit, t.text == "True");
      }
      if (t.text == "lambda") {
        return parse_lambda();
      }
      if (t.text == "yield") {
        ++pos_;
        auto node = make_expr<UnaryOpExpr>(t);
        node->op = "yield";
        if (accept_name("from")) {
          node->op = "yield from";
        }
        if (!cur().is(TokKind::Newline) && !cur().is(TokKind::End) && !cur().is_op(")") &&
            !cur().is_op("]") && !cur().is_op("}") && !cur().is_op(",") && !cur().is_op(";")) {
          node->operand = parse_testlist();
        }
        close_expr(*node);
        return node;
      }
      if (t.text == "await") {
        ++pos_;
        return parse_expression(); // transparent for analysis
      }
      if (t.text == "not") {
        return parse_not();
      }
      error("unexpected keyword");
    }
    case TokKind::Number: {
      ++pos_;
      auto node = make_expr<NumberExpr>(t);
      node->literal = t.text;
      return node;
    }
    case TokKind::String: {
      auto node = make_expr<StrExpr>(t);
      std::string value;
      bool fstr_any = false;
      while (cur().is(TokKind::String)) {
        bool fstr = false;
        value += decode_string_literal(advance().text, &fstr);
        fstr_any |= fstr;
      }
      node->value = std::move(value);
      node->is_fstring = fstr_any;
      close_expr(*node);
      return node;
    }
    case TokKind::Op: {
      if (t.is_op("(")) {
        ++pos_;
        if (accept_op(")")) {
          auto node = make_expr<SequenceExpr>(t);
          node->kind = Expr::Kind::Tuple;
          close_expr(*node);
          return node;
        }
        ExprPtr inner = cur().is_op("*") ? parse_starred() : parse_expression();
        if (cur().is_name("for")) {
          ExprPtr comp = parse_comprehension_tail(std::move(inner),
                                                  ComprehensionExpr::Flavor::Generator);
          expect_op(")");
          close_expr(*comp);
          return comp;
        }
        if (cur().is_op(",")) {
          auto node = make_expr<SequenceExpr>(t);
          node->kind = Expr::Kind::Tuple;
          node->elements.push_back(std::move(inner));
          while (accept_op(",")) {
            if (cur().is_op(")")) {
              break;
            }
            node->elements.push_back(cur().is_op("*") ? parse_starred() : parse_expression());
          }
          expect_op(")");
          close_expr(*node);
          return node;
        }
        expect_op(")");
        // keep inner span; parenthesization is not represented
        return inner;
      }
      if (t.is_op("[")) {
        ++pos_;
        auto node = make_expr<SequenceExpr>(t);
        node->kind = Expr::Kind::List;
        if (!cur().is_op("]")) {
          ExprPtr first = cur().is_op("*") ? parse_starred() : parse_expression();
          if (cur().is_name("for")) {
            ExprPtr comp = parse_comprehension_tail(std::move(first),
                                                    ComprehensionExpr::Flavor::List);
            expect_op("]");
            close_expr(*comp);
            return comp;
          }
          node->elements.push_back(std::move(first));
          while (accept_op(",")) {
            if (cur().is_op("]")) {
              break;
            }
            node->elements.push_back(cur().is_op("*") ? parse_starred() : parse_expression());
          }
        }
        expect_op("]");
        close_expr(*node);
        return node;
      }
      if (t.is_op("{")) {
        return parse_braced();
      }
      if (t.is_op("...")) {
        ++pos_;
        return make_literal(t, Expr::Kind::EllipsisLit, false);
      }
      error("unexpected token");
    }
    default:
      error("unexpected token");
    }
  }

  ExprPtr make_literal(const Token& t, Expr::Kind kind, bool value) {
    auto node = std::make_unique<LiteralExpr>(kind);
    node->line = t.line;
    node->col = t.col;
    node->begin = t.begin;
    node->end = t.end;
    node->bool_value = value;
    return node;
  }

  ExprPtr parse_braced() {
    const Token& t = advance(); // '{'
    if (accept_op("}")) {
      auto node = make_expr<DictExpr>(t);
      close_expr(*node);
      return node;
    }
    if (cur().is_op("**")) {
      auto node = make_expr<DictExpr>(t);
      while (!cur().is_op("}")) {
        if (accept_op("**")) {
          node->keys.push_back(nullptr);
          node->values.push_back(parse_expression());
        } else {
          node->keys.push_back(parse_expression());
          expect_op(":");
          node->values.push_back(parse_expression());
        }
        if (!accept_op(",")) {
          break;
        }
      }
      expect_op("}");
      close_expr(*node);
      return node;
    }
    ExprPtr first = cur().is_op("*") ? parse_starred() : parse_expression();
    if (cur().is_op(":")) {
      ++pos_;
      ExprPtr first_value = parse_expression();
      if (cur().is_name("for")) {
        ExprPtr comp = parse_comprehension_tail(std::move(first),
                                                ComprehensionExpr::Flavor::Dict,
                                                std::move(first_value));
        expect_op("}");
        close_expr(*comp);
        return comp;
      }
      auto node = make_expr<DictExpr>(t);
      node->keys.push_back(std::move(first));
      node->values.push_back(std::move(first_value));
      while (accept_op(",")) {
        if (cur().is_op("}")) {
          break;
        }
        if (accept_op("**")) {
          node->keys.push_back(nullptr);
          node->values.push_back(parse_expression());
          continue;
        }
        node->keys.push_back(parse_expression());
        expect_op(":");
        node->values.push_back(parse_expression());
      }
      expect_op("}");
      close_expr(*node);
      return node;
    }
    if (cur().is_name("for")) {
      ExprPtr comp = parse_comprehension_tail(std::move(first), ComprehensionExpr::Flavor::Set);
      expect_op("}");
      close_expr(*comp);
      return comp;
    }
    auto node = make_expr<SequenceExpr>(t);
    node->kind = Expr::Kind::Set;
    node->elements.push_back(std::move(first));
    while (accept_op(",")) {
      if (cur().is_op("}")) {
        break;
      }
      node->elements.push_back(cur().is_op("*") ? parse_starred() : parse_expression());
    }
    expect_op("}");
    close_expr(*node);
    return node;
  }

  const std::string& source_;
  std::vector<Token> tokens_;
  size_t pos_ = 0;
};

// --- scope resolution -------------------------------------------------------

class ScopeResolver {
public:
  explicit ScopeResolver(ModuleIR& ir) : ir_(ir) {
    Scope module;
    module.kind = Scope::Kind::Module;
    module.id = 0;
    module.parent = -1;
    ir_.scopes.push_back(std::move(module));
  }

  void run() { walk_block(ir_.body, 0); }

private:
  int new_scope(Scope::Kind kind, int parent, std::string name) {
    Scope s;
    s.kind = kind;
    s.id = static_cast<int>(ir_.scopes.size());
    s.parent = parent;
    s.name = std::move(name);
    ir_.scopes.push_back(std::move(s));
    return ir_.scopes.back().id;
  }

  void bind(int scope_id, const std::string& name) {
    Scope& s = ir_.scopes[static_cast<size_t>(scope_id)];
    if (s.globals.count(name)) {
      ir_.scopes[0].bindings.insert(name);
      return;
    }
    if (s.nonlocals.count(name)) {
      for (int p = s.parent; p >= 0; p = ir_.scopes[static_cast<size_t>(p)].parent) {
        if (ir_.scopes[static_cast<size_t>(p)].bindings.count(name)) {
          return; // already bound where it belongs
        }
      }
      return;
    }
    s.bindings.insert(name);
  }

  void bind_target(const Expr& target, int scope_id) {
    switch (target.kind) {
    case Expr::Kind::Name:
      bind(scope_id, static_cast<const NameExpr&>(target).id);
      return;
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
      for (const auto& el : static_cast<const SequenceExpr&>(target).elements) {
        bind_target(*el, scope_id);
      }
      return;
    case Expr::Kind::Starred:
      bind_target(*static_cast<const StarredExpr&>(target).value, scope_id);
      return;
    default:
      return; // attribute/subscript targets do not bind names
    }
  }

  void walk_block(Block& block, int scope_id) {
    // first pass: global/nonlocal declarations affect the whole scope
    for (auto& stmt : block) {
      if (stmt->kind == Stmt::Kind::Global) {
        for (const auto& n : static_cast<ScopeDeclStmt&>(*stmt).names) {
          ir_.scopes[static_cast<size_t>(scope_id)].globals.insert(n);
          ir_.scopes[0].bindings.insert(n);
        }
      } else if (stmt->kind == Stmt::Kind::Nonlocal) {
        for (const auto& n : static_cast<ScopeDeclStmt&>(*stmt).names) {
          ir_.scopes[static_cast<size_t>(scope_id)].nonlocals.insert(n);
        }
      }
    }
    for (auto& stmt : block) {
      walk_stmt(*stmt, scope_id);
    }
  }

  void walk_stmt(Stmt& stmt, int scope_id) {
    switch (stmt.kind) {
    case Stmt::Kind::FunctionDef: {
      auto& fn = static_cast<FunctionDefStmt&>(stmt);
      bind(scope_id, fn.name);
      for (auto& dec : fn.decorators) {
        walk_expr(*dec, scope_id);
      }
      for (auto& p : fn.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, scope_id);
        }
      }
      fn.scope_id = new_scope(Scope::Kind::Function, scope_id, fn.name);
      for (auto& p : fn.params) {
        if (!p.name.empty()) {
          bind(fn.scope_id, p.name);
        }
      }
      walk_block(fn.body, fn.scope_id);
      return;
    }
    case Stmt::Kind::ClassDef: {
      auto& cls = static_cast<ClassDefStmt&>(stmt);
      bind(scope_id, cls.name);
      for (auto& dec : cls.decorators) {
        walk_expr(*dec, scope_id);
      }
      for (auto& base : cls.bases) {
        walk_expr(*base, scope_id);
      }
      cls.scope_id = new_scope(Scope::Kind::Class, scope_id, cls.name);
      walk_block(cls.body, cls.scope_id);
      return;
    }
    case Stmt::Kind::Assign: {
      auto& s = static_cast<AssignStmt&>(stmt);
      walk_expr(*s.value, scope_id);
      for (auto& target : s.targets) {
        walk_expr(*target, scope_id);
        bind_target(*target, scope_id);
      }
      return;
    }
    case Stmt::Kind::AugAssign: {
      auto& s = static_cast<AugAssignStmt&>(stmt);
      walk_expr(*s.value, scope_id);
      walk_expr(*s.target, scope_id);
      bind_target(*s.target, scope_id);
      return;
    }
    case Stmt::Kind::AnnAssign: {
      auto& s = static_cast<AnnAssignStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, scope_id);
      }
      walk_expr(*s.target, scope_id);
      if (s.annotation) {
        walk_expr(*s.annotation, scope_id);
      }
      bind_target(*s.target, scope_id);
      return;
    }
    case Stmt::Kind::Import: {
      for (const auto& item : static_cast<ImportStmt&>(stmt).items) {
        bind(scope_id, item.alias);
      }
      return;
    }
    case Stmt::Kind::ImportFrom: {
      for (const auto& item : static_cast<ImportFromStmt&>(stmt).names) {
        bind(scope_id, item.alias);
      }
      return;
    }
    case Stmt::Kind::Expr:
      walk_expr(*static_cast<ExprStmt&>(stmt).value, scope_id);
      return;
    case Stmt::Kind::Return: {
      auto& s = static_cast<ReturnStmt&>(stmt);
      if (s.value) {
        walk_expr(*s.value, scope_id);
      }
      return;
    }
    case Stmt::Kind::If: {
      auto& s = static_cast<IfStmt&>(stmt);
      walk_expr(*s.test, scope_id);
      walk_block(s.body, scope_id);
      walk_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::While: {
      auto& s = static_cast<WhileStmt&>(stmt);
      walk_expr(*s.test, scope_id);
      walk_block(s.body, scope_id);
      walk_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::For: {
      auto& s = static_cast<ForStmt&>(stmt);
      walk_expr(*s.iter, scope_id);
      bind_target(*s.target, scope_id);
      walk_block(s.body, scope_id);
      walk_block(s.orelse, scope_id);
      return;
    }
    case Stmt::Kind::Try: {
      auto& s = static_cast<TryStmt&>(stmt);
      walk_block(s.body, scope_id);
      for (auto& h : s.handlers) {
        if (h.type) {
          walk_expr(*h.type, scope_id);
        }
        if (!h.name.empty()) {
          bind(scope_id, h.name);
        }
        walk_block(h.body, scope_id);
      }
      walk_block(s.orelse, scope_id);
      walk_block(s.finally, scope_id);
      return;
    }
    case Stmt::Kind::With: {
      auto& s = static_cast<WithStmt&>(stmt);
      for (auto& item : s.items) {
        walk_expr(*item.context, scope_id);
        if (item.target) {
          bind_target(*item.target, scope_id);
        }
      }
      walk_block(s.body, scope_id);
      return;
    }
    case Stmt::Kind::Delete:
    case Stmt::Kind::Assert:
    case Stmt::Kind::Raise: {
      for (auto& v : static_cast<ExprListStmt&>(stmt).values) {
        walk_expr(*v, scope_id);
      }
      return;
    }
    default:
      return;
    }
  }

  void walk_expr(Expr& expr, int scope_id) {
    switch (expr.kind) {
    case Expr::Kind::Lambda: {
      auto& lam = static_cast<LambdaExpr&>(expr);
      for (auto& p : lam.params) {
        if (p.default_value) {
          walk_expr(*p.default_value, scope_id);
        }
      }
      lam.scope_id = new_scope(Scope::Kind::Lambda, scope_id,
                               "<lambda:" + std::to_string(lam.line) + ">");
      for (auto& p : lam.params) {
        if (!p.name.empty()) {
          bind(lam.scope_id, p.name);
        }
      }
      walk_expr(*lam.body, lam.scope_id);
      return;
    }
    case Expr::Kind::Comprehension: {
      auto& comp = static_cast<ComprehensionExpr&>(expr);
      comp.scope_id = new_scope(Scope::Kind::Comprehension, scope_id,
                                "<comp:" + std::to_string(comp.line) + ">");
      for (auto& clause : comp.clauses) {
        walk_expr(*clause.iter, scope_id); // iterables evaluate outside
        bind_target(*clause.target, comp.scope_id);
        for (auto& cond : clause.conditions) {
          walk_expr(*cond, comp.scope_id);
        }
      }
      walk_expr(*comp.element, comp.scope_id);
      if (comp.value) {
        walk_expr(*comp.value, comp.scope_id);
      }
      return;
    }
    case Expr::Kind::Attribute:
      walk_expr(*static_cast<AttributeExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Subscript: {
      auto& s = static_cast<SubscriptExpr&>(expr);
      walk_expr(*s.value, scope_id);
      walk_expr(*s.index, scope_id);
      return;
    }
    case Expr::Kind::Call: {
      auto& c = static_cast<CallExpr&>(expr);
      walk_expr(*c.func, scope_id);
      for (auto& arg : c.args) {
        walk_expr(*arg.value, scope_id);
      }
      return;
    }
    case Expr::Kind::Tuple:
    case Expr::Kind::List:
    case Expr::Kind::Set:
      for (auto& el : static_cast<SequenceExpr&>(expr).elements) {
        walk_expr(*el, scope_id);
      }
      return;
    case Expr::Kind::Dict: {
      auto& d = static_cast<DictExpr&>(expr);
      for (auto& k : d.keys) {
        if (k) {
          walk_expr(*k, scope_id);
        }
      }
      for (auto& v : d.values) {
        walk_expr(*v, scope_id);
      }
      return;
    }
    case Expr::Kind::BinOp: {
      auto& b = static_cast<BinOpExpr&>(expr);
      if (b.op == ":=" && b.lhs->kind == Expr::Kind::Name) {
        bind(scope_id, static_cast<NameExpr&>(*b.lhs).id);
        walk_expr(*b.rhs, scope_id);
        return;
      }
      walk_expr(*b.lhs, scope_id);
      walk_expr(*b.rhs, scope_id);
      return;
    }
    case Expr::Kind::UnaryOp: {
      auto& u = static_cast<UnaryOpExpr&>(expr);
      if (u.operand) {
        walk_expr(*u.operand, scope_id);
      }
      return;
    }
    case Expr::Kind::BoolOp:
      for (auto& v : static_cast<BoolOpExpr&>(expr).values) {
        walk_expr(*v, scope_id);
      }
      return;
    case Expr::Kind::Compare: {
      auto& c = static_cast<CompareExpr&>(expr);
      walk_expr(*c.first, scope_id);
      for (auto& r : c.rest) {
        walk_expr(*r, scope_id);
      }
      return;
    }
    case Expr::Kind::IfExp: {
      auto& i = static_cast<IfExpExpr&>(expr);
      walk_expr(*i.body, scope_id);
      walk_expr(*i.test, scope_id);
      walk_expr(*i.orelse, scope_id);
      return;
    }
    case Expr::Kind::Starred:
      walk_expr(*static_cast<StarredExpr&>(expr).value, scope_id);
      return;
    case Expr::Kind::Slice: {
      auto& s = static_cast<SliceExpr&>(expr);
      if (s.lower) {
        walk_expr(*s.lower, scope_id);
      }
      if (s.upper) {
        walk_expr(*s.upper, scope_id);
      }
      if (s.step) {
        walk_expr(*s.step, scope_id);
      }
      return;
    }
    default:
      return;
    }
  }

  ModuleIR& ir_;
};

} // namespace

std::string ModuleIR::scope_path(int id) const {
  std::vector<const Scope*> chain;
  for (int s = id; s > 0; s = scopes[static_cast<size_t>(s)].parent) {
    chain.push_back(&scopes[static_cast<size_t>(s)]);
  }
  std::string path;
  for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
    if (!path.empty()) {
      path += ".";
    }
    path += (*it)->name;
  }
  return path;
}

ModuleIR parse_module(const std::string& source) {
  Parser parser(source);
  ModuleIR ir = parser.parse();
  ScopeResolver(ir).run();
  return ir;
}

ModuleIR parse_script(const CompositeScript& script) {
  try {
    return parse_module(script.text);
  } catch (const Error& err) {
    if (err.kind() != ErrorKind::Syntax) {
      throw;
    }
    // rewrite "line N" into "cell C, line L"
    std::string msg = err.what();
    if (msg.rfind("line ", 0) == 0) {
      size_t colon = msg.find(':');
      int script_line = std::stoi(msg.substr(5, colon - 5));
      if (script.map.contains(script_line)) {
        CellLocation loc = script.map.location(script_line);
        fail(ErrorKind::Syntax, "cell " + std::to_string(loc.code_index) + ", line " +
                                    std::to_string(loc.cell_line) + msg.substr(colon));
      }
    }
    throw;
  }
}

} // namespace headergen
