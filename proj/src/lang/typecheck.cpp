#include "holegen/lang/typecheck.hpp"

#include <set>

#include "holegen/lang/errors.hpp"
#include "holegen/lang/printer.hpp"

namespace holegen::lang {
namespace {

struct Local {
  std::string name;
  Type type;
  int slot;
};

bool isElemKind(TypeKind k) { return k == TypeKind::Int || k == TypeKind::Double || k == TypeKind::Char; }

bool alwaysReturns(const Block& b);

bool alwaysReturns(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::Return: return true;
    case StmtKind::Block: return alwaysReturns(s.body);
    case StmtKind::If: return s.hasElse && alwaysReturns(s.body) && alwaysReturns(s.elseBody);
    default: return false;
  }
}

bool alwaysReturns(const Block& b) {
  for (const auto& s : b)
    if (alwaysReturns(*s)) return true;
  return false;
}

class Checker {
 public:
  explicit Checker(Program& p) : p_(p) {}

  void program() {
    declarations();
    for (std::size_t i = 0; i < p_.globals.size(); ++i) {
      auto& g = p_.globals[i];
      globalLimit_ = static_cast<int>(i);
      inGlobalInit_ = true;
      resetFrame(-1, Type::unit());
      Type t = expr(*g.init);
      if (!assignable(g.type, t))
        throw TypeError("global '" + g.name + "' of type " + toString(g.type) + " initialized with " + toString(t),
                        g.init->span);
    }
    inGlobalInit_ = false;
    globalLimit_ = static_cast<int>(p_.globals.size());
    for (auto& f : p_.functions) function(f);
    if (p_.entry) {
      int idx = p_.entryIndex();
      if (idx < 0) throw TypeError("unknown entry '" + *p_.entry + "'", {});
      if (p_.functions[idx].name == "init" && !p_.functions[idx].receiver.empty())
        throw TypeError("an init method cannot be the entry", p_.functions[idx].span);
    }
    if (p_.args) {
      if (!p_.entry) throw TypeError("args block without an entry", {});
      argsBlock(*p_.args, p_.functions[p_.entryIndex()]);
    }
  }

  Type standalone(Expr& e, const std::vector<ScopeVar>& scope) {
    declarations();
    globalLimit_ = static_cast<int>(p_.globals.size());
    resetFrame(-1, Type::unit());
    for (const auto& v : scope) {
      if (v.binding.kind == VarKind::Local) declare(v.name, v.type, e.span);
    }
    return expr(e);
  }

 private:
  // ---- declarations --------------------------------------------------------
  void checkType(const Type& t, SourceSpan at) {
    if (t.kind == TypeKind::Record && p_.findRecord(t.record) < 0)
      throw TypeError("unknown record type '" + t.record + "'", at);
    if (t.kind == TypeKind::Array && !isElemKind(t.elem)) throw TypeError("bad array element type", at);
  }

  void declarations() {
    std::set<std::string> names;
    for (const auto& r : p_.records) {
      if (!names.insert(r.name).second) throw TypeError("duplicate record '" + r.name + "'", r.span);
      std::set<std::string> fields;
      for (const auto& f : r.fields) {
        if (!fields.insert(f.name).second) throw TypeError("duplicate field '" + f.name + "'", r.span);
        if (f.type.kind == TypeKind::Unit) throw TypeError("void field", r.span);
      }
    }
    for (const auto& r : p_.records)
      for (const auto& f : r.fields) checkType(f.type, r.span);
    std::set<std::string> globals;
    for (const auto& g : p_.globals) {
      if (!globals.insert(g.name).second) throw TypeError("duplicate global '" + g.name + "'", g.span);
      if (g.type.kind == TypeKind::Unit) throw TypeError("void global", g.span);
      checkType(g.type, g.span);
    }
    std::set<std::string> fns;
    for (const auto& f : p_.functions) {
      if (!fns.insert(f.qualifiedName()).second)
        throw TypeError("duplicate function '" + f.qualifiedName() + "'", f.span);
      if (!f.receiver.empty() && p_.findRecord(f.receiver) < 0)
        throw TypeError("method on unknown record '" + f.receiver + "'", f.span);
      checkType(f.returnType, f.span);
      for (const auto& prm : f.params) {
        if (prm.type.kind == TypeKind::Unit) throw TypeError("void parameter", f.span);
        checkType(prm.type, f.span);
      }
      if (!f.receiver.empty() && f.name == "init" && f.returnType.kind != TypeKind::Unit)
        throw TypeError("init must return void", f.span);
    }
  }

  // ---- frames and scopes ---------------------------------------------------
  void resetFrame(int receiver, Type ret) {
    receiver_ = receiver;
    returnType_ = std::move(ret);
    scopes_.clear();
    scopes_.emplace_back();
    nextSlot_ = receiver >= 0 ? 1 : 0;
    maxSlot_ = nextSlot_;
  }

  int declare(const std::string& name, const Type& t, SourceSpan at) {
    if (name.empty()) throw TypeError("empty name", at);
    for (const auto& sc : scopes_)
      for (const auto& l : sc)
        if (l.name == name) throw TypeError("'" + name + "' is already declared", at);
    int slot = nextSlot_++;
    maxSlot_ = std::max(maxSlot_, nextSlot_);
    scopes_.back().push_back({name, t, slot});
    return slot;
  }

  void push() { scopes_.emplace_back(); }
  void pop() { scopes_.pop_back(); }

  const Local* findLocal(const std::string& name) const {
    for (auto it = scopes_.rbegin(); it != scopes_.rend(); ++it)
      for (const auto& l : *it)
        if (l.name == name) return &l;
    return nullptr;
  }

  int findField(int record, const std::string& name) const {
    const auto& fields = p_.records[record].fields;
    for (std::size_t i = 0; i < fields.size(); ++i)
      if (fields[i].name == name) return static_cast<int>(i);
    return -1;
  }

  int findVisibleGlobal(const std::string& name) const {
    int g = p_.findGlobal(name);
    return (g >= 0 && g < globalLimit_) ? g : -1;
  }

  std::shared_ptr<HoleSite> site() const {
    auto s = std::make_shared<HoleSite>();
    std::set<std::string> seen;
    for (const auto& sc : scopes_)
      for (const auto& l : sc) {
        s->scope.push_back({l.name, l.type, {VarKind::Local, l.slot}, false});
        seen.insert(l.name);
      }
    if (receiver_ >= 0) {
      const auto& fields = p_.records[receiver_].fields;
      for (std::size_t i = 0; i < fields.size(); ++i) {
        if (!seen.insert(fields[i].name).second) continue;
        s->scope.push_back({fields[i].name, fields[i].type, {VarKind::Field, static_cast<int>(i)}, false});
      }
    }
    for (int i = 0; i < globalLimit_; ++i) {
      const auto& g = p_.globals[i];
      if (!seen.insert(g.name).second) continue;
      s->scope.push_back({g.name, g.type, {VarKind::Global, i}, g.isFinal});
    }
    s->assignTarget = assignTarget_;
    return s;
  }

  // ---- functions and statements --------------------------------------------
  void function(FunctionDecl& f) {
    int recv = f.receiver.empty() ? -1 : p_.findRecord(f.receiver);
    resetFrame(recv, f.returnType);
    for (const auto& prm : f.params) declare(prm.name, prm.type, f.span);
    block(f.body, false);
    if (f.returnType.kind != TypeKind::Unit && !alwaysReturns(f.body))
      throw TypeError("function '" + f.qualifiedName() + "' may finish without returning a value", f.span);
    f.numSlots = maxSlot_;
  }

  void argsBlock(ArgsBlock& a, const FunctionDecl& entry) {
    resetFrame(-1, Type::unit());
    block(a.body, false);
    std::vector<Type> want;
    if (!entry.receiver.empty()) want.push_back(Type::recordRef(entry.receiver));
    for (const auto& prm : entry.params) want.push_back(prm.type);
    if (a.yields.size() != want.size())
      throw TypeError("args block yields " + std::to_string(a.yields.size()) + " values, entry takes " +
                          std::to_string(want.size()),
                      {});
    for (std::size_t i = 0; i < want.size(); ++i) {
      Type t = expr(*a.yields[i]);
      if (!assignable(want[i], t))
        throw TypeError("yield " + std::to_string(i) + " has type " + toString(t) + ", expected " +
                            toString(want[i]),
                        a.yields[i]->span);
    }
    a.numSlots = maxSlot_;
  }

  void block(Block& b, bool scoped = true) {
    if (scoped) push();
    for (auto& s : b) stmt(*s);
    if (scoped) pop();
  }

  void condition(Expr& e) {
    Type t = expr(e);
    if (t.kind != TypeKind::Bool) throw TypeError("condition must be bool, found " + toString(t), e.span);
  }

  void stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl: {
        if (s.declType.kind == TypeKind::Unit) throw TypeError("void variable", s.span);
        checkType(s.declType, s.span);
        Type t = expr(*s.expr);
        if (!assignable(s.declType, t))
          throw TypeError("cannot initialize " + toString(s.declType) + " '" + s.name + "' with " + toString(t),
                          s.expr->span);
        s.slot = declare(s.name, s.declType, s.span);
        break;
      }
      case StmtKind::Assign: {
        Expr& target = *s.target;
        Type lt = lvalue(target);
        assignTarget_ = target.kind == ExprKind::Ident ? target.name : std::string();
        Type rt = expr(*s.expr);
        assignTarget_.clear();
        if (!assignable(lt, rt))
          throw TypeError("cannot assign " + toString(rt) + " to " + toString(lt), s.expr->span);
        break;
      }
      case StmtKind::ExprStmt: {
        const Expr& e = *s.expr;
        bool ok = e.kind == ExprKind::Call || e.kind == ExprKind::New ||
                  (e.kind == ExprKind::Unary && (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec));
        if (!ok) throw TypeError("expression is not a statement", e.span);
        expr(*s.expr);
        break;
      }
      case StmtKind::If:
        condition(*s.expr);
        block(s.body);
        block(s.elseBody);
        break;
      case StmtKind::While:
        condition(*s.expr);
        block(s.body);
        break;
      case StmtKind::For:
        push();
        if (s.init) stmt(*s.init);
        condition(*s.expr);
        if (s.update) stmt(*s.update);
        block(s.body);
        pop();
        break;
      case StmtKind::Return: {
        Type t = s.expr ? expr(*s.expr) : Type::unit();
        if (returnType_.kind == TypeKind::Unit) {
          if (s.expr) throw TypeError("void function returns a value", s.span);
        } else if (!s.expr || !assignable(returnType_, t)) {
          throw TypeError("returns " + toString(t) + ", expected " + toString(returnType_),
                          s.expr ? s.expr->span : s.span);
        }
        break;
      }
      case StmtKind::Block:
        block(s.body);
        break;
    }
  }

  Type lvalue(Expr& target) {
    Type t = expr(target);
    if (target.kind == ExprKind::Ident && target.binding.kind == VarKind::Global &&
        p_.globals[target.binding.index].isFinal)
      throw TypeError("cannot assign to final global '" + target.name + "'", target.span);
    if (target.kind == ExprKind::ArrayLength) throw TypeError("cannot assign to length", target.span);
    return t;
  }

  // ---- expressions ---------------------------------------------------------
  Type expr(Expr& e) {
    Type t = typeOf(e);
    e.type = t;
    return t;
  }

  Type ident(Expr& e) {
    if (const Local* l = findLocal(e.name)) {
      e.binding = {VarKind::Local, l->slot};
      return l->type;
    }
    if (receiver_ >= 0) {
      int f = findField(receiver_, e.name);
      if (f >= 0) {
        e.binding = {VarKind::Field, f};
        return p_.records[receiver_].fields[f].type;
      }
    }
    int g = findVisibleGlobal(e.name);
    if (g >= 0) {
      e.binding = {VarKind::Global, g};
      return p_.globals[g].type;
    }
    throw TypeError("unknown name '" + e.name + "'", e.span);
  }

  void arguments(Expr& e, std::size_t from, const std::vector<Type>& want, const std::string& what) {
    std::size_t n = e.kids.size() - from;
    if (n != want.size())
      throw TypeError(what + " expects " + std::to_string(want.size()) + " arguments, got " + std::to_string(n),
                      e.span);
    for (std::size_t i = 0; i < n; ++i) {
      Type t = expr(*e.kids[from + i]);
      if (!assignable(want[i], t))
        throw TypeError(what + " argument " + std::to_string(i) + ": expected " + toString(want[i]) + ", found " +
                            toString(t),
                        e.kids[from + i]->span);
    }
  }

  Type binary(Expr& e) {
    Type l = expr(*e.kids[0]);
    Type r = expr(*e.kids[1]);
    BinOp op = e.binOp;
    auto fail = [&]() -> Type {
      throw TypeError(std::string("operator ") + spelling(op) + " cannot combine " + toString(l) + " and " +
                          toString(r),
                      e.span);
    };
    if (isArith(op)) {
      if (l == r && l.isNumeric()) return l;
      return fail();
    }
    if (isShift(op) || isBitwise(op)) {
      if (l.kind == TypeKind::Int && r.kind == TypeKind::Int) return l;
      return fail();
    }
    if (isLogical(op)) {
      if (l.kind == TypeKind::Bool && r.kind == TypeKind::Bool) return l;
      return fail();
    }
    if (op == BinOp::Eq || op == BinOp::Ne) {
      if (l.isPrimitive() && l == r) return Type::boolT();
      bool lref = l.isReference() || l.kind == TypeKind::Null;
      bool rref = r.isReference() || r.kind == TypeKind::Null;
      if (lref && rref && (l == r || l.kind == TypeKind::Null || r.kind == TypeKind::Null)) {
        if ((l.isArray() && r.kind == TypeKind::Null) || (r.isArray() && l.kind == TypeKind::Null)) return fail();
        return Type::boolT();
      }
      return fail();
    }
    // < <= > >=
    if (l == r && (l.isNumeric() || l.kind == TypeKind::Char)) return Type::boolT();
    return fail();
  }

  Type typeOf(Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        switch (e.literal.tag) {
          case ValueTag::Int: return Type::intT();
          case ValueTag::Double: return Type::doubleT();
          case ValueTag::Bool: return Type::boolT();
          case ValueTag::Char: return Type::charT();
          case ValueTag::Null: return Type::nullT();
          default: throw TypeError("bad literal", e.span);
        }
      case ExprKind::Ident:
        return ident(e);
      case ExprKind::This:
        if (receiver_ < 0) throw TypeError("'this' outside a method", e.span);
        return Type::recordRef(p_.records[receiver_].name);
      case ExprKind::FieldAccess: {
        Type t = expr(*e.kids[0]);
        if (t.isArray() && e.name == "length") {
          e.kind = ExprKind::ArrayLength;
          e.name.clear();
          return Type::intT();
        }
        if (!t.isRecord()) throw TypeError("field access on " + toString(t), e.span);
        int rec = p_.findRecord(t.record);
        int f = findField(rec, e.name);
        if (f < 0) throw TypeError("record " + t.record + " has no field '" + e.name + "'", e.span);
        e.target = f;
        return p_.records[rec].fields[f].type;
      }
      case ExprKind::ArrayLength: {
        Type t = expr(*e.kids[0]);
        if (!t.isArray()) throw TypeError("length of non-array", e.span);
        return Type::intT();
      }
      case ExprKind::ArrayAccess: {
        Type a = expr(*e.kids[0]);
        Type i = expr(*e.kids[1]);
        if (!a.isArray()) throw TypeError("indexing a non-array " + toString(a), e.span);
        if (i.kind != TypeKind::Int) throw TypeError("array index must be int", e.kids[1]->span);
        return a.elementType();
      }
      case ExprKind::Unary: {
        Type t = expr(*e.kids[0]);
        switch (e.unOp) {
          case UnOp::Neg:
            if (!t.isNumeric()) throw TypeError("cannot negate " + toString(t), e.span);
            return t;
          case UnOp::Not:
            if (t.kind != TypeKind::Bool) throw TypeError("! needs bool", e.span);
            return t;
          case UnOp::BitNot:
            if (t.kind != TypeKind::Int) throw TypeError("~ needs int", e.span);
            return t;
          case UnOp::PostInc:
          case UnOp::PostDec:
            if (e.kids[0]->kind != ExprKind::Ident || t.kind != TypeKind::Int)
              throw TypeError("++/-- needs an int variable", e.span);
            lvalue(*e.kids[0]);
            return t;
        }
        break;
      }
      case ExprKind::Binary:
        return binary(e);
      case ExprKind::Cast: {
        Type t = expr(*e.kids[0]);
        bool ok = (t.isNumeric() || t.kind == TypeKind::Char) &&
                  (e.castType.isNumeric() || e.castType.kind == TypeKind::Char);
        if (!ok) throw TypeError("cannot cast " + toString(t) + " to " + toString(e.castType), e.span);
        return e.castType;
      }
      case ExprKind::Call: {
        if (inGlobalInit_) throw TypeError("calls are not allowed in global initializers", e.span);
        std::string qualified = e.name;
        std::size_t from = 0;
        if (e.hasReceiver) {
          Type r = expr(*e.kids[0]);
          if (!r.isRecord()) throw TypeError("method call on " + toString(r), e.span);
          qualified = r.record + "." + e.name;
          from = 1;
        }
        int f = p_.findFunction(qualified);
        if (f < 0 || (!e.hasReceiver && !p_.functions[f].receiver.empty()))
          throw TypeError("unknown function '" + qualified + "'", e.span);
        const auto& fn = p_.functions[f];
        std::vector<Type> want;
        for (const auto& prm : fn.params) want.push_back(prm.type);
        arguments(e, from, want, qualified);
        e.target = f;
        return fn.returnType;
      }
      case ExprKind::New: {
        int rec = p_.findRecord(e.name);
        if (rec < 0) throw TypeError("unknown record '" + e.name + "'", e.span);
        e.target = rec;
        int init = p_.findFunction(e.name + ".init");
        e.initFn = init;
        if (init >= 0) {
          if (inGlobalInit_) throw TypeError("constructors with init are not allowed in global initializers", e.span);
          std::vector<Type> want;
          for (const auto& prm : p_.functions[init].params) want.push_back(prm.type);
          arguments(e, 0, want, "new " + e.name);
        } else if (!e.kids.empty()) {
          std::vector<Type> want;
          for (const auto& f : p_.records[rec].fields) want.push_back(f.type);
          arguments(e, 0, want, "new " + e.name);
        }
        return Type::recordRef(e.name);
      }
      case ExprKind::NewArray: {
        Type n = expr(*e.kids[0]);
        if (n.kind != TypeKind::Int) throw TypeError("array size must be int", e.span);
        return e.castType;
      }
      case ExprKind::Hole: {
        if (!e.hole) throw TypeError("hole without descriptor", e.span);
        e.site = site();
        holeSpec(*e.hole, e.span);
        return e.hole->type;
      }
      case ExprKind::Unfilled:
        if (e.castType.kind == TypeKind::Unit) throw TypeError("unfilled hole of type void", e.span);
        checkType(e.castType, e.span);
        return e.castType;
      case ExprKind::Nondet:
        return Type::intT();
    }
    throw TypeError("unhandled expression", e.span);
  }

  void holeSpec(HoleSpec& h, SourceSpan at) {
    checkType(h.type, at);
    if (!h.source) throw TypeError("hole without source expression", at);
    Type src = expr(*h.source);
    if (!(src == h.type) && !(h.type.isRecord() && src.kind == TypeKind::Null))
      throw TypeError("hole of type " + toString(h.type) + " has source of type " + toString(src), at);
    for (auto& o : h.operands) holeSpec(o, at);
    auto need = [&](bool ok) {
      if (!ok) throw TypeError(std::string("malformed ") + spelling(h.kind) + " hole: " + printHoleSpec(h), at);
    };
    auto opsIn = [&](bool (*pred)(BinOp)) {
      for (BinOp op : h.ops)
        if (!pred(op)) return false;
      return !h.ops.empty();
    };
    switch (h.kind) {
      case HoleKind::Id:
      case HoleKind::Val:
      case HoleKind::Fixed:
        need(h.operands.empty() && h.ops.empty());
        if (h.kind == HoleKind::Val) need(h.type.isPrimitive());
        break;
      case HoleKind::Arith:
        need(h.operands.size() == 2 && opsIn(isArith) && h.type.isNumeric() && h.operands[0].type == h.type &&
             h.operands[1].type == h.type);
        break;
      case HoleKind::Shift:
        need(h.operands.size() == 2 && opsIn(isShift) && h.type.kind == TypeKind::Int &&
             h.operands[0].type == h.type && h.operands[1].type == h.type);
        break;
      case HoleKind::Relation: {
        need(h.operands.size() == 2 && opsIn(isRelational) && h.type.kind == TypeKind::Bool);
        const Type& a = h.operands[0].type;
        need(a == h.operands[1].type && a.isPrimitive());
        if (a.kind == TypeKind::Bool)
          for (BinOp op : h.ops) need(op == BinOp::Eq || op == BinOp::Ne);
        break;
      }
      case HoleKind::Logic:
        need(h.operands.size() == 2 && opsIn(isLogical) && h.type.kind == TypeKind::Bool &&
             h.operands[0].type.kind == TypeKind::Bool && h.operands[1].type.kind == TypeKind::Bool);
        break;
      case HoleKind::ArrAcc:
        need(h.operands.size() == 2 && h.ops.empty() && h.operands[0].type.isArray() &&
             h.operands[0].type.elementType() == h.type && h.operands[1].type.kind == TypeKind::Int);
        break;
      case HoleKind::Cast: {
        need(h.operands.size() == 1 && h.ops.empty());
        const Type& from = h.operands[0].type;
        need((from.isNumeric() || from.kind == TypeKind::Char) &&
             (h.type.isNumeric() || h.type.kind == TypeKind::Char));
        break;
      }
    }
  }

  Program& p_;
  int receiver_ = -1;
  Type returnType_;
  std::vector<std::vector<Local>> scopes_;
  int nextSlot_ = 0;
  int maxSlot_ = 0;
  int globalLimit_ = 0;
  bool inGlobalInit_ = false;
  std::string assignTarget_;
};

}  // namespace

void typecheck(Program& p) { Checker(p).program(); }

Type resolveType(Expr& e, const Program& p, const std::vector<ScopeVar>& scope) {
  return Checker(const_cast<Program&>(p)).standalone(e, scope);
}

}  // namespace holegen::lang
