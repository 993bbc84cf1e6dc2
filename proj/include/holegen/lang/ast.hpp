#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "holegen/lang/type.hpp"
#include "holegen/lang/value.hpp"

namespace holegen::lang {

struct SourceSpan {
  int line = 0;
  int column = 0;
};

enum class BinOp : std::uint8_t {
  Add, Sub, Mul, Div, Rem,
  Shl, Shr, UShr,
  Lt, Le, Gt, Ge, Eq, Ne,
  And, Or,
  BitAnd, BitOr, BitXor,
};

enum class UnOp : std::uint8_t { Neg, Not, BitNot, PostInc, PostDec };

const char* spelling(BinOp op);
const char* spelling(UnOp op);
bool isArith(BinOp op);
bool isShift(BinOp op);
bool isRelational(BinOp op);
bool isLogical(BinOp op);
bool isBitwise(BinOp op);

enum class ExprKind : std::uint8_t {
  Literal,
  Ident,
  This,
  FieldAccess,   // kids[0].name
  ArrayAccess,   // kids[0][kids[1]]
  ArrayLength,   // kids[0].length
  Unary,
  Binary,
  Cast,          // (castType) kids[0]
  Call,          // name(kids...) or kids[0].name(kids[1..]) when hasReceiver
  New,           // new name(kids...)
  NewArray,      // new castType.elem[kids[0]]
  Hole,          // ?H<holeId>{...}
  Unfilled,      // unfilled(holeId, castType)
  Nondet,        // nondet()
};

enum class VarKind : std::uint8_t { Local, Global, Field };

struct Binding {
  VarKind kind = VarKind::Local;
  int index = -1;
  friend bool operator==(const Binding&, const Binding&) = default;
};

/// One variable visible at a hole site, in candidate order.
struct ScopeVar {
  std::string name;
  Type type;
  Binding binding;
  bool isFinal = false;
};

/// Static context of a hole: everything an Id hole may legally pick there.
struct HoleSite {
  std::vector<ScopeVar> scope;
  std::string assignTarget;  // variable being assigned by the enclosing statement, if any
};

struct Expr;
struct HoleSpec;
using ExprPtr = std::unique_ptr<Expr>;

enum class HoleKind : std::uint8_t { Id, Val, Arith, Shift, Relation, Logic, ArrAcc, Cast, Fixed };

const char* spelling(HoleKind k);
std::optional<HoleKind> holeKindFromString(const std::string& s);

/// The search space of one hole. Operand specs nest; only the outermost spec
/// of a converted expression carries a hole id.
struct HoleSpec {
  HoleKind kind = HoleKind::Val;
  Type type;
  std::vector<BinOp> ops;
  std::vector<HoleSpec> operands;
  ExprPtr source;  // the original expression; always a legal fill

  HoleSpec() = default;
  HoleSpec(const HoleSpec& other);
  HoleSpec& operator=(const HoleSpec& other);
  HoleSpec(HoleSpec&&) noexcept = default;
  HoleSpec& operator=(HoleSpec&&) noexcept = default;
  ~HoleSpec();
};

struct Expr {
  ExprKind kind = ExprKind::Literal;
  SourceSpan span;

  Value literal;          // Literal
  std::string name;       // Ident, FieldAccess, Call, New
  BinOp binOp = BinOp::Add;
  UnOp unOp = UnOp::Neg;
  Type castType;          // Cast target, NewArray array type, Unfilled type
  bool hasReceiver = false;
  int holeId = -1;        // Hole, Unfilled
  std::unique_ptr<HoleSpec> hole;
  std::vector<ExprPtr> kids;

  // Filled in by the type checker.
  Type type;
  Binding binding;        // Ident
  int target = -1;        // Call: function index; New: record index; FieldAccess: field index
  int initFn = -1;        // New: index of the record's init method, or -1
  std::shared_ptr<const HoleSite> site;  // Hole

  ExprPtr clone() const;
};

ExprPtr makeLiteral(Value v, SourceSpan span = {});
ExprPtr makeIdent(std::string name, SourceSpan span = {});
ExprPtr makeBinary(BinOp op, ExprPtr lhs, ExprPtr rhs, SourceSpan span = {});
ExprPtr makeUnary(UnOp op, ExprPtr operand, SourceSpan span = {});

enum class StmtKind : std::uint8_t { VarDecl, Assign, ExprStmt, If, While, For, Return, Block };

struct Stmt;
using StmtPtr = std::unique_ptr<Stmt>;
using Block = std::vector<StmtPtr>;

struct Stmt {
  StmtKind kind = StmtKind::ExprStmt;
  SourceSpan span;

  Type declType;          // VarDecl
  std::string name;       // VarDecl
  int slot = -1;          // VarDecl (type checker)

  ExprPtr target;         // Assign lvalue
  ExprPtr expr;           // VarDecl init, Assign value, ExprStmt, If/While/For cond, Return value

  Block body;             // Block, If-then, While, For
  Block elseBody;         // If
  bool hasElse = false;
  StmtPtr init;           // For
  StmtPtr update;         // For

  StmtPtr clone() const;
};

Block cloneBlock(const Block& b);

struct GlobalDecl {
  bool isFinal = false;
  Type type;
  std::string name;
  ExprPtr init;
  SourceSpan span;
};

struct FieldDecl {
  Type type;
  std::string name;
};

struct RecordDecl {
  std::string name;
  std::vector<FieldDecl> fields;
  SourceSpan span;
};

struct Param {
  Type type;
  std::string name;
};

struct FunctionDecl {
  std::string receiver;  // empty for free functions
  std::string name;
  Type returnType;
  std::vector<Param> params;
  Block body;
  SourceSpan span;
  int numSlots = 0;  // type checker: this (if any) + params + locals

  std::string qualifiedName() const { return receiver.empty() ? name : receiver + "." + name; }
};

/// Argument provider block: runs its statements, then yields the entry's
/// arguments (receiver first).
struct ArgsBlock {
  Block body;
  std::vector<ExprPtr> yields;
  int numSlots = 0;
};

struct Program {
  std::vector<RecordDecl> records;
  std::vector<GlobalDecl> globals;
  std::vector<FunctionDecl> functions;
  std::optional<std::string> entry;
  std::optional<ArgsBlock> args;
  std::optional<std::int64_t> harnessLoops;

  Program() = default;
  Program(Program&&) noexcept = default;
  Program& operator=(Program&&) noexcept = default;
  Program(const Program&) = delete;
  Program& operator=(const Program&) = delete;

  Program clone() const;

  int findRecord(const std::string& name) const;
  int findGlobal(const std::string& name) const;
  int findFunction(const std::string& qualified) const;
  int entryIndex() const;
};

// Structural equality ignoring spans and checker annotations.
bool structurallyEqual(const Expr& a, const Expr& b);
bool structurallyEqual(const Stmt& a, const Stmt& b);
bool structurallyEqual(const HoleSpec& a, const HoleSpec& b);
bool structurallyEqual(const Program& a, const Program& b);

/// Pre-order walk over every expression (including hole sources is optional).
template <typename F>
void forEachExpr(Expr& e, F&& f) {
  f(e);
  for (auto& k : e.kids) forEachExpr(*k, f);
}

template <typename F>
void forEachExpr(Stmt& s, F&& f) {
  if (s.init) forEachExpr(*s.init, f);
  if (s.target) forEachExpr(*s.target, f);
  if (s.expr) forEachExpr(*s.expr, f);
  if (s.update) forEachExpr(*s.update, f);
  for (auto& b : s.body) forEachExpr(*b, f);
  for (auto& b : s.elseBody) forEachExpr(*b, f);
}

}  // namespace holegen::lang
