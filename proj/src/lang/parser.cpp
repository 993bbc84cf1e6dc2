#include "holegen/lang/parser.hpp"

#include <limits>
#include <set>

#include "holegen/lang/errors.hpp"
#include "holegen/lang/lexer.hpp"
#include "holegen/lang/typecheck.hpp"

namespace holegen::lang {
namespace {

const std::set<std::string> kKeywords = {
    "record", "global", "final", "fn",   "entry",    "args",   "yield", "harness", "if",
    "else",   "while",  "for",   "return", "new",    "true",   "false", "null",    "this",
    "int",    "double", "bool",  "char", "void",     "unfilled", "nondet", "NaN", "Infinity"};

bool isPrimitiveKeyword(const std::string& s) {
  return s == "int" || s == "double" || s == "bool" || s == "char";
}

class Parser {
 public:
  explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

  Program unit() {
    Program p;
    while (!atEnd()) {
      if (isWord("record")) {
        p.records.push_back(record());
      } else if (isWord("global")) {
        p.globals.push_back(global());
      } else if (isWord("fn")) {
        p.functions.push_back(function());
      } else if (isWord("entry")) {
        SourceSpan at = next().span;
        if (p.entry) throw ParseError("duplicate entry declaration", at);
        p.entry = qualifiedName();
        expect(";");
      } else if (isWord("args")) {
        SourceSpan at = next().span;
        if (p.args) throw ParseError("duplicate args block", at);
        p.args = argsBlock();
      } else if (isWord("harness")) {
        SourceSpan at = next().span;
        if (p.harnessLoops) throw ParseError("duplicate harness declaration", at);
        const Token& n = peek();
        if (n.kind != Tok::IntLit || n.intValue == 0) throw ParseError("harness expects a positive loop count", n.span);
        p.harnessLoops = static_cast<std::int64_t>(next().intValue);
        expect(";");
      } else {
        throw ParseError("expected a top-level declaration, found '" + peek().text + "'", peek().span);
      }
    }
    return p;
  }

  ExprPtr standaloneExpr() {
    auto e = expr();
    if (!atEnd()) throw ParseError("trailing tokens after expression", peek().span);
    return e;
  }

 private:
  // ---- token helpers -------------------------------------------------------
  const Token& peek(std::size_t ahead = 0) const {
    std::size_t i = std::min(pos_ + ahead, toks_.size() - 1);
    return toks_[i];
  }
  const Token& next() {
    const Token& t = toks_[pos_];
    if (pos_ + 1 < toks_.size()) ++pos_;
    return t;
  }
  bool atEnd() const { return peek().kind == Tok::End; }
  bool isPunct(std::string_view p, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Punct && peek(ahead).text == p;
  }
  bool isWord(std::string_view w, std::size_t ahead = 0) const {
    return peek(ahead).kind == Tok::Ident && peek(ahead).text == w;
  }
  bool accept(std::string_view p) {
    if (isPunct(p)) {
      next();
      return true;
    }
    return false;
  }
  const Token& expect(std::string_view p) {
    if (!isPunct(p))
      throw ParseError("expected '" + std::string(p) + "', found '" + describe(peek()) + "'", peek().span);
    return next();
  }
  void expectWord(std::string_view w) {
    if (!isWord(w)) throw ParseError("expected '" + std::string(w) + "'", peek().span);
    next();
  }
  static std::string describe(const Token& t) { return t.kind == Tok::End ? "end of input" : t.text; }

  std::string name() {
    const Token& t = peek();
    if (t.kind != Tok::Ident || kKeywords.count(t.text))
      throw ParseError("expected an identifier, found '" + describe(t) + "'", t.span);
    return next().text;
  }

  std::string qualifiedName() {
    std::string n = name();
    if (accept(".")) n += "." + name();
    return n;
  }

  // ---- types ---------------------------------------------------------------
  bool startsType() const {
    const Token& t = peek();
    if (t.kind != Tok::Ident) return false;
    if (isPrimitiveKeyword(t.text) || t.text == "void") return true;
    return !kKeywords.count(t.text);
  }

  Type type() {
    const Token& t = peek();
    if (t.kind != Tok::Ident) throw ParseError("expected a type", t.span);
    Type ty;
    if (t.text == "int") ty = Type::intT();
    else if (t.text == "double") ty = Type::doubleT();
    else if (t.text == "bool") ty = Type::boolT();
    else if (t.text == "char") ty = Type::charT();
    else if (t.text == "void") ty = Type::unit();
    else if (!kKeywords.count(t.text)) ty = Type::recordRef(t.text);
    else throw ParseError("expected a type, found '" + t.text + "'", t.span);
    SourceSpan at = next().span;
    if (isPunct("[") && isPunct("]", 1)) {
      next();
      next();
      if (ty.kind != TypeKind::Int && ty.kind != TypeKind::Double && ty.kind != TypeKind::Char)
        throw ParseError("arrays may only hold int, double or char", at);
      ty = Type::arrayOf(ty.kind);
    }
    return ty;
  }

  // ---- declarations --------------------------------------------------------
  RecordDecl record() {
    RecordDecl r;
    r.span = next().span;
    r.name = name();
    expect("{");
    while (!accept("}")) {
      FieldDecl f;
      f.type = type();
      f.name = name();
      expect(";");
      r.fields.push_back(std::move(f));
    }
    return r;
  }

  GlobalDecl global() {
    GlobalDecl g;
    g.span = next().span;
    if (isWord("final")) {
      next();
      g.isFinal = true;
    }
    g.type = type();
    g.name = name();
    expect("=");
    g.init = expr();
    expect(";");
    return g;
  }

  FunctionDecl function() {
    FunctionDecl f;
    f.span = next().span;
    f.returnType = type();
    std::string first = name();
    if (accept(".")) {
      f.receiver = first;
      f.name = name();
    } else {
      f.name = first;
    }
    expect("(");
    if (!isPunct(")")) {
      do {
        Param p;
        p.type = type();
        p.name = name();
        f.params.push_back(std::move(p));
      } while (accept(","));
    }
    expect(")");
    f.body = block();
    return f;
  }

  ArgsBlock argsBlock() {
    ArgsBlock a;
    expect("{");
    while (!isWord("yield")) {
      if (isPunct("}") || atEnd()) throw ParseError("args block must end with a yield", peek().span);
      a.body.push_back(statement());
    }
    next();
    if (!isPunct(";")) {
      do {
        a.yields.push_back(expr());
      } while (accept(","));
    }
    expect(";");
    expect("}");
    return a;
  }

  // ---- statements ----------------------------------------------------------
  Block block() {
    expect("{");
    Block b;
    while (!accept("}")) {
      if (atEnd()) throw ParseError("unterminated block", peek().span);
      b.push_back(statement());
    }
    return b;
  }

  StmtPtr statement() {
    auto s = std::make_unique<Stmt>();
    s->span = peek().span;
    if (isPunct("{")) {
      s->kind = StmtKind::Block;
      s->body = block();
    } else if (isWord("if")) {
      next();
      s->kind = StmtKind::If;
      expect("(");
      s->expr = expr();
      expect(")");
      s->body = block();
      if (isWord("else")) {
        next();
        s->hasElse = true;
        if (isWord("if")) {
          s->elseBody.push_back(statement());
        } else {
          s->elseBody = block();
        }
      }
    } else if (isWord("while")) {
      next();
      s->kind = StmtKind::While;
      expect("(");
      s->expr = expr();
      expect(")");
      s->body = block();
    } else if (isWord("for")) {
      next();
      s->kind = StmtKind::For;
      expect("(");
      if (!isPunct(";")) s->init = simpleStatement();
      expect(";");
      s->expr = expr();
      expect(";");
      if (!isPunct(")")) s->update = simpleStatement();
      expect(")");
      s->body = block();
    } else if (isWord("return")) {
      next();
      s->kind = StmtKind::Return;
      if (!isPunct(";")) s->expr = expr();
      expect(";");
    } else {
      s = simpleStatement();
      expect(";");
    }
    return s;
  }

  bool startsDeclaration() const {
    const Token& t = peek();
    if (t.kind != Tok::Ident) return false;
    if (isPrimitiveKeyword(t.text)) return true;
    if (kKeywords.count(t.text)) return false;
    return peek(1).kind == Tok::Ident && !kKeywords.count(peek(1).text);
  }

  StmtPtr simpleStatement() {
    auto s = std::make_unique<Stmt>();
    s->span = peek().span;
    if (startsDeclaration()) {
      s->kind = StmtKind::VarDecl;
      s->declType = type();
      s->name = name();
      expect("=");
      s->expr = expr();
      return s;
    }
    auto lhs = expr();
    if (accept("=")) {
      if (lhs->kind != ExprKind::Ident && lhs->kind != ExprKind::FieldAccess &&
          lhs->kind != ExprKind::ArrayAccess)
        throw ParseError("left-hand side is not assignable", lhs->span);
      s->kind = StmtKind::Assign;
      s->target = std::move(lhs);
      s->expr = expr();
    } else {
      s->kind = StmtKind::ExprStmt;
      s->expr = std::move(lhs);
    }
    return s;
  }

  // ---- expressions ---------------------------------------------------------
  static int precedence(const Token& t, BinOp& op) {
    if (t.kind != Tok::Punct) return -1;
    static const std::pair<const char*, std::pair<BinOp, int>> table[] = {
        {"||", {BinOp::Or, 1}},     {"&&", {BinOp::And, 2}},   {"|", {BinOp::BitOr, 3}},
        {"^", {BinOp::BitXor, 4}},  {"&", {BinOp::BitAnd, 5}}, {"==", {BinOp::Eq, 6}},
        {"!=", {BinOp::Ne, 6}},     {"<", {BinOp::Lt, 7}},     {"<=", {BinOp::Le, 7}},
        {">", {BinOp::Gt, 7}},      {">=", {BinOp::Ge, 7}},    {"<<", {BinOp::Shl, 8}},
        {">>", {BinOp::Shr, 8}},    {">>>", {BinOp::UShr, 8}}, {"+", {BinOp::Add, 9}},
        {"-", {BinOp::Sub, 9}},     {"*", {BinOp::Mul, 10}},   {"/", {BinOp::Div, 10}},
        {"%", {BinOp::Rem, 10}},
    };
    for (const auto& [s, v] : table) {
      if (t.text == s) {
        op = v.first;
        return v.second;
      }
    }
    return -1;
  }

  ExprPtr expr(int minPrec = 1) {
    auto lhs = unary();
    for (;;) {
      BinOp op{};
      int prec = precedence(peek(), op);
      if (prec < minPrec) return lhs;
      SourceSpan at = next().span;
      auto rhs = expr(prec + 1);
      lhs = makeBinary(op, std::move(lhs), std::move(rhs), at);
    }
  }

  bool startsCast() const {
    return isPunct("(") && peek(1).kind == Tok::Ident && isPrimitiveKeyword(peek(1).text) && isPunct(")", 2);
  }

  ExprPtr unary() {
    const Token& t = peek();
    if (isPunct("-")) {
      SourceSpan at = next().span;
      const Token& n = peek();
      bool followedByPostfix = isPunct(".", 1) || isPunct("[", 1);
      if (!followedByPostfix && n.kind == Tok::IntLit) {
        next();
        std::int64_t v = -static_cast<std::int64_t>(n.intValue);
        return makeLiteral(Value::ofInt(static_cast<std::int32_t>(v)), at);
      }
      if (!followedByPostfix && n.kind == Tok::DoubleLit) {
        next();
        return makeLiteral(Value::ofDouble(-n.doubleValue), at);
      }
      if (!followedByPostfix && isWord("Infinity")) {
        next();
        return makeLiteral(Value::ofDouble(-std::numeric_limits<double>::infinity()), at);
      }
      return makeUnary(UnOp::Neg, unary(), at);
    }
    if (isPunct("!")) {
      SourceSpan at = next().span;
      return makeUnary(UnOp::Not, unary(), at);
    }
    if (isPunct("~")) {
      SourceSpan at = next().span;
      return makeUnary(UnOp::BitNot, unary(), at);
    }
    if (startsCast()) {
      SourceSpan at = next().span;
      auto e = std::make_unique<Expr>();
      e->kind = ExprKind::Cast;
      e->span = at;
      e->castType = type();
      expect(")");
      e->kids.push_back(unary());
      return e;
    }
    (void)t;
    return postfix(primary());
  }

  ExprPtr postfix(ExprPtr e) {
    for (;;) {
      if (isPunct(".")) {
        SourceSpan at = next().span;
        std::string member = name();
        if (isPunct("(")) {
          auto call = std::make_unique<Expr>();
          call->kind = ExprKind::Call;
          call->span = at;
          call->name = member;
          call->hasReceiver = true;
          call->kids.push_back(std::move(e));
          callArgs(*call);
          e = std::move(call);
        } else {
          auto f = std::make_unique<Expr>();
          f->kind = ExprKind::FieldAccess;
          f->span = at;
          f->name = member;
          f->kids.push_back(std::move(e));
          e = std::move(f);
        }
      } else if (isPunct("[")) {
        SourceSpan at = next().span;
        auto a = std::make_unique<Expr>();
        a->kind = ExprKind::ArrayAccess;
        a->span = at;
        a->kids.push_back(std::move(e));
        a->kids.push_back(expr());
        expect("]");
        e = std::move(a);
      } else if (isPunct("++") || isPunct("--")) {
        SourceSpan at = peek().span;
        UnOp op = next().text == "++" ? UnOp::PostInc : UnOp::PostDec;
        if (e->kind != ExprKind::Ident) throw ParseError("++/-- applies to variables only", at);
        e = makeUnary(op, std::move(e), at);
      } else {
        return e;
      }
    }
  }

  void callArgs(Expr& call) {
    expect("(");
    if (!isPunct(")")) {
      do {
        call.kids.push_back(expr());
      } while (accept(","));
    }
    expect(")");
  }

  ExprPtr primary() {
    const Token& t = peek();
    SourceSpan at = t.span;
    switch (t.kind) {
      case Tok::IntLit: {
        if (t.intValue > 2147483647ULL) throw ParseError("integer literal out of range", at);
        auto v = static_cast<std::int32_t>(next().intValue);
        return makeLiteral(Value::ofInt(v), at);
      }
      case Tok::DoubleLit:
        return makeLiteral(Value::ofDouble(next().doubleValue), at);
      case Tok::CharLit:
        return makeLiteral(Value::ofChar(next().charValue), at);
      case Tok::HoleMarker: {
        auto e = std::make_unique<Expr>();
        e->kind = ExprKind::Hole;
        e->span = at;
        e->holeId = static_cast<int>(next().intValue);
        e->hole = std::make_unique<HoleSpec>(descriptor());
        return e;
      }
      case Tok::Punct:
        if (t.text == "(") {
          next();
          auto e = expr();
          expect(")");
          return e;
        }
        break;
      case Tok::Ident: {
        const std::string& w = t.text;
        if (w == "true" || w == "false") {
          next();
          return makeLiteral(Value::ofBool(w == "true"), at);
        }
        if (w == "null") {
          next();
          return makeLiteral(Value::null(), at);
        }
        if (w == "NaN") {
          next();
          return makeLiteral(Value::ofDouble(std::numeric_limits<double>::quiet_NaN()), at);
        }
        if (w == "Infinity") {
          next();
          return makeLiteral(Value::ofDouble(std::numeric_limits<double>::infinity()), at);
        }
        if (w == "this") {
          next();
          auto e = std::make_unique<Expr>();
          e->kind = ExprKind::This;
          e->span = at;
          return e;
        }
        if (w == "new") return newExpr();
        if (w == "unfilled") {
          next();
          expect("(");
          const Token& n = peek();
          if (n.kind != Tok::IntLit) throw ParseError("unfilled expects a hole id", n.span);
          auto e = std::make_unique<Expr>();
          e->kind = ExprKind::Unfilled;
          e->span = at;
          e->holeId = static_cast<int>(next().intValue);
          expect(",");
          e->castType = type();
          expect(")");
          return e;
        }
        if (w == "nondet") {
          next();
          expect("(");
          expect(")");
          auto e = std::make_unique<Expr>();
          e->kind = ExprKind::Nondet;
          e->span = at;
          return e;
        }
        std::string n = name();
        if (isPunct("(")) {
          auto call = std::make_unique<Expr>();
          call->kind = ExprKind::Call;
          call->span = at;
          call->name = n;
          callArgs(*call);
          return call;
        }
        return makeIdent(n, at);
      }
      default:
        break;
    }
    throw ParseError("expected an expression, found '" + describe(t) + "'", at);
  }

  ExprPtr newExpr() {
    SourceSpan at = next().span;
    auto e = std::make_unique<Expr>();
    e->span = at;
    const Token& t = peek();
    if (t.kind == Tok::Ident && isPrimitiveKeyword(t.text)) {
      Type elem = type();
      if (elem.kind == TypeKind::Bool) throw ParseError("arrays may only hold int, double or char", at);
      e->kind = ExprKind::NewArray;
      e->castType = Type::arrayOf(elem.kind);
      expect("[");
      e->kids.push_back(expr());
      expect("]");
      return e;
    }
    e->kind = ExprKind::New;
    e->name = name();
    callArgs(*e);
    return e;
  }

  // ?H<k>{kind=K; type=T; ops={...}; operands=[...]; src=expr}
  HoleSpec descriptor() {
    HoleSpec h;
    expect("{");
    expectWord("kind");
    expect("=");
    const Token& k = peek();
    auto kind = k.kind == Tok::Ident ? holeKindFromString(k.text) : std::nullopt;
    if (!kind) throw ParseError("unknown hole kind '" + describe(k) + "'", k.span);
    next();
    h.kind = *kind;
    expect(";");
    expectWord("type");
    expect("=");
    h.type = type();
    expect(";");
    expectWord("ops");
    expect("=");
    expect("{");
    if (!isPunct("}")) {
      do {
        BinOp op{};
        const Token& o = peek();
        if (precedence(o, op) < 0) throw ParseError("unknown operator '" + describe(o) + "'", o.span);
        next();
        h.ops.push_back(op);
      } while (accept(","));
    }
    expect("}");
    expect(";");
    expectWord("operands");
    expect("=");
    expect("[");
    if (!isPunct("]")) {
      do {
        h.operands.push_back(descriptor());
      } while (accept(","));
    }
    expect("]");
    expect(";");
    expectWord("src");
    expect("=");
    h.source = expr();
    expect("}");
    return h;
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

Program parseSyntax(std::string_view text) { return Parser(tokenize(text)).unit(); }

Program parse(std::string_view text) {
  Program p = parseSyntax(text);
  typecheck(p);
  return p;
}

ExprPtr parseExpression(std::string_view text) { return Parser(tokenize(text)).standaloneExpr(); }

}  // namespace holegen::lang
