#include "holegen/lang/ast.hpp"

namespace holegen::lang {

const char* spelling(BinOp op) {
  switch (op) {
    case BinOp::Add: return "+";
    case BinOp::Sub: return "-";
    case BinOp::Mul: return "*";
    case BinOp::Div: return "/";
    case BinOp::Rem: return "%";
    case BinOp::Shl: return "<<";
    case BinOp::Shr: return ">>";
    case BinOp::UShr: return ">>>";
    case BinOp::Lt: return "<";
    case BinOp::Le: return "<=";
    case BinOp::Gt: return ">";
    case BinOp::Ge: return ">=";
    case BinOp::Eq: return "==";
    case BinOp::Ne: return "!=";
    case BinOp::And: return "&&";
    case BinOp::Or: return "||";
    case BinOp::BitAnd: return "&";
    case BinOp::BitOr: return "|";
    case BinOp::BitXor: return "^";
  }
  return "?";
}

const char* spelling(UnOp op) {
  switch (op) {
    case UnOp::Neg: return "-";
    case UnOp::Not: return "!";
    case UnOp::BitNot: return "~";
    case UnOp::PostInc: return "++";
    case UnOp::PostDec: return "--";
  }
  return "?";
}

bool isArith(BinOp op) { return op <= BinOp::Rem; }
bool isShift(BinOp op) { return op == BinOp::Shl || op == BinOp::Shr || op == BinOp::UShr; }
bool isRelational(BinOp op) { return op >= BinOp::Lt && op <= BinOp::Ne; }
bool isLogical(BinOp op) { return op == BinOp::And || op == BinOp::Or; }
bool isBitwise(BinOp op) { return op >= BinOp::BitAnd; }

const char* spelling(HoleKind k) {
  switch (k) {
    case HoleKind::Id: return "Id";
    case HoleKind::Val: return "Val";
    case HoleKind::Arith: return "Arith";
    case HoleKind::Shift: return "Shift";
    case HoleKind::Relation: return "Relation";
    case HoleKind::Logic: return "Logic";
    case HoleKind::ArrAcc: return "ArrAcc";
    case HoleKind::Cast: return "Cast";
    case HoleKind::Fixed: return "Fixed";
  }
  return "?";
}

std::optional<HoleKind> holeKindFromString(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(HoleKind::Fixed); ++i) {
    auto k = static_cast<HoleKind>(i);
    if (s == spelling(k)) return k;
  }
  return std::nullopt;
}

HoleSpec::HoleSpec(const HoleSpec& other)
    : kind(other.kind),
      type(other.type),
      ops(other.ops),
      operands(other.operands),
      source(other.source ? other.source->clone() : nullptr) {}

HoleSpec& HoleSpec::operator=(const HoleSpec& other) {
  if (this != &other) {
    HoleSpec tmp(other);
    *this = std::move(tmp);
  }
  return *this;
}

HoleSpec::~HoleSpec() = default;

ExprPtr Expr::clone() const {
  auto e = std::make_unique<Expr>();
  e->kind = kind;
  e->span = span;
  e->literal = literal;
  e->name = name;
  e->binOp = binOp;
  e->unOp = unOp;
  e->castType = castType;
  e->hasReceiver = hasReceiver;
  e->holeId = holeId;
  if (hole) e->hole = std::make_unique<HoleSpec>(*hole);
  e->kids.reserve(kids.size());
  for (const auto& k : kids) e->kids.push_back(k->clone());
  e->type = type;
  e->binding = binding;
  e->target = target;
  e->initFn = initFn;
  e->site = site;
  return e;
}

ExprPtr makeLiteral(Value v, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Literal;
  e->literal = v;
  e->span = span;
  return e;
}

ExprPtr makeIdent(std::string name, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Ident;
  e->name = std::move(name);
  e->span = span;
  return e;
}

ExprPtr makeBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Binary;
  e->binOp = op;
  e->span = span;
  e->kids.push_back(std::move(lhs));
  e->kids.push_back(std::move(rhs));
  return e;
}

ExprPtr makeUnary(UnOp op, ExprPtr operand, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Unary;
  e->unOp = op;
  e->span = span;
  e->kids.push_back(std::move(operand));
  return e;
}

StmtPtr Stmt::clone() const {
  auto s = std::make_unique<Stmt>();
  s->kind = kind;
  s->span = span;
  s->declType = declType;
  s->name = name;
  s->slot = slot;
  if (target) s->target = target->clone();
  if (expr) s->expr = expr->clone();
  s->body = cloneBlock(body);
  s->elseBody = cloneBlock(elseBody);
  s->hasElse = hasElse;
  if (init) s->init = init->clone();
  if (update) s->update = update->clone();
  return s;
}

Block cloneBlock(const Block& b) {
  Block out;
  out.reserve(b.size());
  for (const auto& s : b) out.push_back(s->clone());
  return out;
}

Program Program::clone() const {
  Program p;
  p.records = records;
  for (const auto& g : globals) {
    GlobalDecl d;
    d.isFinal = g.isFinal;
    d.type = g.type;
    d.name = g.name;
    d.init = g.init ? g.init->clone() : nullptr;
    d.span = g.span;
    p.globals.push_back(std::move(d));
  }
  for (const auto& f : functions) {
    FunctionDecl d;
    d.receiver = f.receiver;
    d.name = f.name;
    d.returnType = f.returnType;
    d.params = f.params;
    d.body = cloneBlock(f.body);
    d.span = f.span;
    d.numSlots = f.numSlots;
    p.functions.push_back(std::move(d));
  }
  p.entry = entry;
  if (args) {
    ArgsBlock a;
    a.body = cloneBlock(args->body);
    for (const auto& y : args->yields) a.yields.push_back(y->clone());
    a.numSlots = args->numSlots;
    p.args = std::move(a);
  }
  p.harnessLoops = harnessLoops;
  return p;
}

int Program::findRecord(const std::string& name) const {
  for (std::size_t i = 0; i < records.size(); ++i)
    if (records[i].name == name) return static_cast<int>(i);
  return -1;
}

int Program::findGlobal(const std::string& name) const {
  for (std::size_t i = 0; i < globals.size(); ++i)
    if (globals[i].name == name) return static_cast<int>(i);
  return -1;
}

int Program::findFunction(const std::string& qualified) const {
  for (std::size_t i = 0; i < functions.size(); ++i)
    if (functions[i].qualifiedName() == qualified) return static_cast<int>(i);
  return -1;
}

int Program::entryIndex() const { return entry ? findFunction(*entry) : -1; }

namespace {

bool eqPtr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return structurallyEqual(*a, *b);
}

bool eqStmtPtr(const StmtPtr& a, const StmtPtr& b) {
  if (!a || !b) return !a && !b;
  return structurallyEqual(*a, *b);
}

bool eqBlock(const Block& a, const Block& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!structurallyEqual(*a[i], *b[i])) return false;
  return true;
}

}  // namespace

bool structurallyEqual(const HoleSpec& a, const HoleSpec& b) {
  if (a.kind != b.kind || !(a.type == b.type) || a.ops != b.ops) return false;
  if (a.operands.size() != b.operands.size()) return false;
  for (std::size_t i = 0; i < a.operands.size(); ++i)
    if (!structurallyEqual(a.operands[i], b.operands[i])) return false;
  return eqPtr(a.source, b.source);
}

bool structurallyEqual(const Expr& a, const Expr& b) {
  if (a.kind != b.kind || a.kids.size() != b.kids.size()) return false;
  switch (a.kind) {
    case ExprKind::Literal:
      if (!identical(a.literal, b.literal)) return false;
      break;
    case ExprKind::Ident:
    case ExprKind::FieldAccess:
    case ExprKind::New:
      if (a.name != b.name) return false;
      break;
    case ExprKind::Call:
      if (a.name != b.name || a.hasReceiver != b.hasReceiver) return false;
      break;
    case ExprKind::Unary:
      if (a.unOp != b.unOp) return false;
      break;
    case ExprKind::Binary:
      if (a.binOp != b.binOp) return false;
      break;
    case ExprKind::Cast:
    case ExprKind::NewArray:
      if (!(a.castType == b.castType)) return false;
      break;
    case ExprKind::Hole:
      if (a.holeId != b.holeId) return false;
      if (!a.hole || !b.hole) return !a.hole && !b.hole;
      if (!structurallyEqual(*a.hole, *b.hole)) return false;
      break;
    case ExprKind::Unfilled:
      if (a.holeId != b.holeId || !(a.castType == b.castType)) return false;
      break;
    default:
      break;
  }
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (!structurallyEqual(*a.kids[i], *b.kids[i])) return false;
  return true;
}

bool structurallyEqual(const Stmt& a, const Stmt& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == StmtKind::VarDecl && (!(a.declType == b.declType) || a.name != b.name)) return false;
  if (a.hasElse != b.hasElse) return false;
  return eqPtr(a.target, b.target) && eqPtr(a.expr, b.expr) && eqBlock(a.body, b.body) &&
         eqBlock(a.elseBody, b.elseBody) && eqStmtPtr(a.init, b.init) && eqStmtPtr(a.update, b.update);
}

bool structurallyEqual(const Program& a, const Program& b) {
  if (a.records.size() != b.records.size() || a.globals.size() != b.globals.size() ||
      a.functions.size() != b.functions.size())
    return false;
  for (std::size_t i = 0; i < a.records.size(); ++i) {
    const auto& x = a.records[i];
    const auto& y = b.records[i];
    if (x.name != y.name || x.fields.size() != y.fields.size()) return false;
    for (std::size_t j = 0; j < x.fields.size(); ++j)
      if (x.fields[j].name != y.fields[j].name || !(x.fields[j].type == y.fields[j].type)) return false;
  }
  for (std::size_t i = 0; i < a.globals.size(); ++i) {
    const auto& x = a.globals[i];
    const auto& y = b.globals[i];
    if (x.isFinal != y.isFinal || !(x.type == y.type) || x.name != y.name || !eqPtr(x.init, y.init))
      return false;
  }
  for (std::size_t i = 0; i < a.functions.size(); ++i) {
    const auto& x = a.functions[i];
    const auto& y = b.functions[i];
    if (x.receiver != y.receiver || x.name != y.name || !(x.returnType == y.returnType)) return false;
    if (x.params.size() != y.params.size()) return false;
    for (std::size_t j = 0; j < x.params.size(); ++j)
      if (x.params[j].name != y.params[j].name || !(x.params[j].type == y.params[j].type)) return false;
    if (!eqBlock(x.body, y.body)) return false;
  }
  if (a.entry != b.entry || a.harnessLoops != b.harnessLoops) return false;
  if (a.args.has_value() != b.args.has_value()) return false;
  if (a.args) {
    if (!eqBlock(a.args->body, b.args->body)) return false;
    if (a.args->yields.size() != b.args->yields.size()) return false;
    for (std::size_t i = 0; i < a.args->yields.size(); ++i)
      if (!structurallyEqual(*a.args->yields[i], *b.args->yields[i])) return false;
  }
  return true;
}

}  // namespace holegen::lang
