#include "holegen/lang/printer.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>

namespace holegen::lang {
namespace {

constexpr int kUnaryPrec = 11;
constexpr int kPostfixPrec = 12;

int binaryPrec(BinOp op) {
  switch (op) {
    case BinOp::Or: return 1;
    case BinOp::And: return 2;
    case BinOp::BitOr: return 3;
    case BinOp::BitXor: return 4;
    case BinOp::BitAnd: return 5;
    case BinOp::Eq:
    case BinOp::Ne: return 6;
    case BinOp::Lt:
    case BinOp::Le:
    case BinOp::Gt:
    case BinOp::Ge: return 7;
    case BinOp::Shl:
    case BinOp::Shr:
    case BinOp::UShr: return 8;
    case BinOp::Add:
    case BinOp::Sub: return 9;
    default: return 10;
  }
}

bool isNegativeLiteral(const Expr& e) {
  if (e.kind != ExprKind::Literal) return false;
  if (e.literal.tag == ValueTag::Int) return e.literal.i < 0;
  if (e.literal.tag == ValueTag::Double) return std::signbit(e.literal.d) && !std::isnan(e.literal.d);
  return false;
}

int precOf(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Binary: return binaryPrec(e.binOp);
    case ExprKind::Unary:
      return (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec) ? kPostfixPrec : kUnaryPrec;
    case ExprKind::Cast: return kUnaryPrec;
    case ExprKind::Literal: return isNegativeLiteral(e) ? kUnaryPrec : kPostfixPrec;
    default: return kPostfixPrec;
  }
}

std::string printDouble(double d) {
  if (std::isnan(d)) return "NaN";
  if (std::isinf(d)) return d > 0 ? "Infinity" : "-Infinity";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, d);
  std::string s(buf, end);
  if (s.find_first_of(".en") == std::string::npos) s += ".0";
  return s;
}

std::string printChar(std::uint16_t c) {
  switch (c) {
    case '\n': return "'\\n'";
    case '\t': return "'\\t'";
    case '\r': return "'\\r'";
    case '\\': return "'\\\\'";
    case '\'': return "'\\''";
    default: break;
  }
  if (c >= 0x20 && c < 0x7f) return std::string("'") + static_cast<char>(c) + "'";
  char buf[16];
  std::snprintf(buf, sizeof buf, "'\\u%04x'", c);
  return buf;
}

class Printer {
 public:
  std::string out;

  void expr(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        out += printLiteral(e.literal);
        break;
      case ExprKind::Ident:
        out += e.name;
        break;
      case ExprKind::This:
        out += "this";
        break;
      case ExprKind::FieldAccess:
        sub(*e.kids[0], kPostfixPrec);
        out += "." + e.name;
        break;
      case ExprKind::ArrayLength:
        sub(*e.kids[0], kPostfixPrec);
        out += ".length";
        break;
      case ExprKind::ArrayAccess:
        sub(*e.kids[0], kPostfixPrec);
        out += "[";
        expr(*e.kids[1]);
        out += "]";
        break;
      case ExprKind::Unary:
        if (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec) {
          sub(*e.kids[0], kPostfixPrec);
          out += spelling(e.unOp);
        } else {
          out += spelling(e.unOp);
          const Expr& k = *e.kids[0];
          bool clash = e.unOp == UnOp::Neg &&
                       ((k.kind == ExprKind::Literal && (k.literal.tag == ValueTag::Int || k.literal.tag == ValueTag::Double)) ||
                        (k.kind == ExprKind::Unary && k.unOp == UnOp::Neg));
          if (clash) {
            out += "(";
            expr(k);
            out += ")";
          } else {
            sub(k, kUnaryPrec);
          }
        }
        break;
      case ExprKind::Binary: {
        int p = binaryPrec(e.binOp);
        sub(*e.kids[0], p);
        out += " ";
        out += spelling(e.binOp);
        out += " ";
        sub(*e.kids[1], p + 1);
        break;
      }
      case ExprKind::Cast:
        out += "(" + toString(e.castType) + ") ";
        sub(*e.kids[0], kUnaryPrec);
        break;
      case ExprKind::Call:
        if (e.hasReceiver) {
          sub(*e.kids[0], kPostfixPrec);
          out += ".";
        }
        out += e.name;
        args(e, e.hasReceiver ? 1 : 0);
        break;
      case ExprKind::New:
        out += "new " + e.name;
        args(e, 0);
        break;
      case ExprKind::NewArray:
        out += "new " + toString(e.castType.elementType()) + "[";
        expr(*e.kids[0]);
        out += "]";
        break;
      case ExprKind::Hole:
        out += "?H" + std::to_string(e.holeId);
        spec(*e.hole);
        break;
      case ExprKind::Unfilled:
        out += "unfilled(" + std::to_string(e.holeId) + ", " + toString(e.castType) + ")";
        break;
      case ExprKind::Nondet:
        out += "nondet()";
        break;
    }
  }

  void spec(const HoleSpec& h) {
    out += "{kind=";
    out += spelling(h.kind);
    out += "; type=" + toString(h.type) + "; ops={";
    for (std::size_t i = 0; i < h.ops.size(); ++i) {
      if (i) out += ", ";
      out += spelling(h.ops[i]);
    }
    out += "}; operands=[";
    for (std::size_t i = 0; i < h.operands.size(); ++i) {
      if (i) out += ", ";
      spec(h.operands[i]);
    }
    out += "]; src=";
    if (h.source) expr(*h.source);
    out += "}";
  }

  void stmt(const Stmt& s, int indent) {
    pad(indent);
    switch (s.kind) {
      case StmtKind::Block:
        block(s.body, indent);
        out += "\n";
        return;
      case StmtKind::If:
        ifChain(s, indent);
        out += "\n";
        return;
      case StmtKind::While:
        out += "while (";
        expr(*s.expr);
        out += ") ";
        block(s.body, indent);
        out += "\n";
        return;
      case StmtKind::For:
        out += "for (";
        if (s.init) simple(*s.init);
        out += "; ";
        expr(*s.expr);
        out += "; ";
        if (s.update) simple(*s.update);
        out += ") ";
        block(s.body, indent);
        out += "\n";
        return;
      case StmtKind::Return:
        out += "return";
        if (s.expr) {
          out += " ";
          expr(*s.expr);
        }
        out += ";\n";
        return;
      default:
        simple(s);
        out += ";\n";
        return;
    }
  }

  void simple(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl:
        out += toString(s.declType) + " " + s.name + " = ";
        expr(*s.expr);
        break;
      case StmtKind::Assign:
        expr(*s.target);
        out += " = ";
        expr(*s.expr);
        break;
      default:
        expr(*s.expr);
        break;
    }
  }

  void block(const Block& b, int indent) {
    out += "{\n";
    for (const auto& s : b) stmt(*s, indent + 1);
    pad(indent);
    out += "}";
  }

  void pad(int indent) { out.append(static_cast<std::size_t>(indent) * 2, ' '); }

 private:
  void sub(const Expr& e, int minPrec) {
    if (precOf(e) < minPrec) {
      out += "(";
      expr(e);
      out += ")";
    } else {
      expr(e);
    }
  }

  void args(const Expr& e, std::size_t from) {
    out += "(";
    for (std::size_t i = from; i < e.kids.size(); ++i) {
      if (i > from) out += ", ";
      expr(*e.kids[i]);
    }
    out += ")";
  }

  void ifChain(const Stmt& s, int indent) {
    out += "if (";
    expr(*s.expr);
    out += ") ";
    block(s.body, indent);
    if (!s.hasElse) return;
    out += " else ";
    if (s.elseBody.size() == 1 && s.elseBody[0]->kind == StmtKind::If) {
      ifChain(*s.elseBody[0], indent);
    } else {
      block(s.elseBody, indent);
    }
  }
};

}  // namespace

std::string printLiteral(const Value& v) {
  switch (v.tag) {
    case ValueTag::Int: return std::to_string(v.i);
    case ValueTag::Double: return printDouble(v.d);
    case ValueTag::Bool: return v.b ? "true" : "false";
    case ValueTag::Char: return printChar(v.c);
    case ValueTag::Null: return "null";
    default: return "?";
  }
}

std::string printExpr(const Expr& e) {
  Printer p;
  p.expr(e);
  return p.out;
}

std::string printStmt(const Stmt& s, int indent) {
  Printer p;
  p.stmt(s, indent);
  return p.out;
}

std::string printHoleSpec(const HoleSpec& h) {
  Printer p;
  p.spec(h);
  return p.out;
}

std::string print(const Program& prog) {
  Printer p;
  std::string& out = p.out;
  auto separate = [&] {
    if (!out.empty()) out += "\n";
  };
  for (const auto& r : prog.records) {
    separate();
    out += "record " + r.name + " {\n";
    for (const auto& f : r.fields) out += "  " + toString(f.type) + " " + f.name + ";\n";
    out += "}\n";
  }
  if (!prog.globals.empty()) {
    separate();
    for (const auto& g : prog.globals) {
      out += "global ";
      if (g.isFinal) out += "final ";
      out += toString(g.type) + " " + g.name + " = ";
      p.expr(*g.init);
      out += ";\n";
    }
  }
  for (const auto& f : prog.functions) {
    separate();
    out += "fn " + toString(f.returnType) + " " + f.qualifiedName() + "(";
    for (std::size_t i = 0; i < f.params.size(); ++i) {
      if (i) out += ", ";
      out += toString(f.params[i].type) + " " + f.params[i].name;
    }
    out += ") ";
    p.block(f.body, 0);
    out += "\n";
  }
  if (prog.entry) {
    separate();
    out += "entry " + *prog.entry + ";\n";
  }
  if (prog.args) {
    separate();
    out += "args {\n";
    for (const auto& s : prog.args->body) p.stmt(*s, 1);
    out += "  yield";
    for (std::size_t i = 0; i < prog.args->yields.size(); ++i) {
      out += i ? ", " : " ";
      p.expr(*prog.args->yields[i]);
    }
    out += ";\n}\n";
  }
  if (prog.harnessLoops) {
    separate();
    out += "harness " + std::to_string(*prog.harnessLoops) + ";\n";
  }
  return out;
}

}  // namespace holegen::lang
