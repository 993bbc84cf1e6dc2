#include "holegen/optvm/compiler.hpp"

#include <bit>
#include <cstring>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace holegen::optvm {

using namespace lang;

const char* levelName(OptLevel l) {
  switch (l) {
    case OptLevel::L0: return "L0";
    case OptLevel::L1: return "L1";
    case OptLevel::L2: return "L2";
  }
  return "?";
}

std::optional<OptLevel> levelFromString(const std::string& s) {
  if (s == "L0" || s == "0") return OptLevel::L0;
  if (s == "L1" || s == "1") return OptLevel::L1;
  if (s == "L2" || s == "2") return OptLevel::L2;
  return std::nullopt;
}

namespace {

constexpr const char* kFremClobber = "FREM_CLOBBER";
constexpr const char* kBceOveraggressive = "BCE_OVERAGGRESSIVE";
constexpr const char* kLoopcondForce = "LOOPCOND_FORCE";
constexpr const char* kCharWidenSign = "CHAR_WIDEN_SIGN";

}  // namespace

std::vector<std::string> FaultSet::names() const {
  std::vector<std::string> out;
  if (fremClobber) out.emplace_back(kFremClobber);
  if (bceOveraggressive) out.emplace_back(kBceOveraggressive);
  if (loopcondForce) out.emplace_back(kLoopcondForce);
  if (charWidenSign) out.emplace_back(kCharWidenSign);
  return out;
}

FaultSet FaultSet::parse(const std::string& list) {
  FaultSet f;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    if (item == "none") continue;
    if (item == kFremClobber) f.fremClobber = true;
    else if (item == kBceOveraggressive) f.bceOveraggressive = true;
    else if (item == kLoopcondForce) f.loopcondForce = true;
    else if (item == kCharWidenSign) f.charWidenSign = true;
    else throw std::invalid_argument("unknown fault '" + item + "'");
  }
  return f;
}

std::string FaultSet::toString() const {
  std::string out;
  for (const auto& n : names()) out += (out.empty() ? "" : ",") + n;
  return out.empty() ? "none" : out;
}

namespace {

class ModuleCompiler;

bool containsIntRem(const Expr& e) {
  if (e.kind == ExprKind::Binary && e.binOp == BinOp::Rem && e.type.kind == TypeKind::Int) return true;
  for (const auto& k : e.kids)
    if (containsIntRem(*k)) return true;
  return false;
}

bool isLocal(const Expr& e, int slot) {
  return e.kind == ExprKind::Ident && e.binding.kind == VarKind::Local && e.binding.index == slot;
}

void collectWrites(const Expr& e, std::set<int>& out) {
  if (e.kind == ExprKind::Unary && (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec)) {
    const Expr& v = *e.kids[0];
    if (v.binding.kind == VarKind::Local) out.insert(v.binding.index);
  }
  for (const auto& k : e.kids) collectWrites(*k, out);
}

void collectWrites(const Stmt& s, std::set<int>& out) {
  if (s.kind == StmtKind::VarDecl) out.insert(s.slot);
  if (s.kind == StmtKind::Assign && s.target->kind == ExprKind::Ident && s.target->binding.kind == VarKind::Local)
    out.insert(s.target->binding.index);
  if (s.target) collectWrites(*s.target, out);
  if (s.expr) collectWrites(*s.expr, out);
  if (s.init) collectWrites(*s.init, out);
  if (s.update) collectWrites(*s.update, out);
  for (const auto& b : s.body) collectWrites(*b, out);
  for (const auto& b : s.elseBody) collectWrites(*b, out);
}

std::optional<int> powerOfTwo(const Expr& e) {
  if (e.kind != ExprKind::Literal || e.literal.tag != ValueTag::Int) return std::nullopt;
  std::int32_t v = e.literal.i;
  if (v < 2 || !std::has_single_bit(static_cast<std::uint32_t>(v))) return std::nullopt;
  return std::countr_zero(static_cast<std::uint32_t>(v));
}

class FnCompiler {
 public:
  FnCompiler(ModuleCompiler& mc, Function& out, int numSlots, int receiverRecord)
      : mc_(mc), out_(out), next_(numSlots), receiverRecord_(receiverRecord) {}

  void block(const Block& b) {
    for (const auto& s : b) stmt(*s);
  }

  void stmt(const Stmt& s);
  int expr(const Expr& e);

  int emit(Op op, int a = -1, int b = -1, int c = -1, SourceSpan span = {}) {
    Instr in;
    in.op = op;
    in.a = a;
    in.b = b;
    in.c = c;
    in.span = span;
    out_.code.push_back(std::move(in));
    return static_cast<int>(out_.code.size()) - 1;
  }

  int here() const { return static_cast<int>(out_.code.size()); }
  void patch(int at, int target) {
    Instr& in = out_.code[at];
    if (in.op == Op::Jmp) in.a = target;
    else in.b = target;
  }

  int reg() { return next_++; }

  void finish() {
    emit(Op::RetVoid);
    out_.numRegs = next_;
  }

 private:
  void loop(const Stmt& s);
  std::optional<std::pair<int, int>> bceCandidate(const Stmt& s) const;
  bool invariant(const Expr& e, const std::set<int>& written) const;
  void store(const Expr& ident, int v);
  int binary(const Expr& e);
  int cast(const Expr& e);
  std::vector<int> arguments(const Expr& e, std::size_t first);
  bool unchecked(const Expr& access);

  ModuleCompiler& mc_;
  Function& out_;
  int next_;
  int receiverRecord_;
  std::unordered_map<const Expr*, int> pre_;
  std::vector<std::pair<int, int>> bce_;  // (array slot, index slot) of enclosing safe loops
};

class ModuleCompiler {
 public:
  ModuleCompiler(const Program& p, OptLevel level, FaultSet faults) : p_(p), level_(level), faults_(faults) {}

  BytecodeModule run() {
    m_.program = &p_;
    m_.entry = p_.entry ? p_.findFunction(*p_.entry) : -1;

    m_.globalInit.name = "<globals>";
    {
      FnCompiler fc(*this, m_.globalInit, 0, -1);
      for (std::size_t i = 0; i < p_.globals.size(); ++i) {
        int v = fc.expr(*p_.globals[i].init);
        fc.emit(Op::StoreGlobal, static_cast<int>(i), v);
      }
      fc.finish();
    }

    m_.functions.resize(p_.functions.size());
    for (std::size_t i = 0; i < p_.functions.size(); ++i) {
      const auto& fd = p_.functions[i];
      Function& f = m_.functions[i];
      f.name = fd.qualifiedName();
      int recv = fd.receiver.empty() ? -1 : p_.findRecord(fd.receiver);
      f.numParams = static_cast<int>(fd.params.size()) + (recv >= 0 ? 1 : 0);
      FnCompiler fc(*this, f, fd.numSlots, recv);
      fc.block(fd.body);
      fc.finish();
    }

    m_.argsBlock.name = "<args>";
    if (p_.args) {
      FnCompiler fc(*this, m_.argsBlock, p_.args->numSlots, -1);
      fc.block(p_.args->body);
      std::vector<int> ys;
      for (const auto& y : p_.args->yields) ys.push_back(fc.expr(*y));
      int at = fc.emit(Op::Yield);
      m_.argsBlock.code[at].list.assign(ys.begin(), ys.end());
      fc.finish();
    } else {
      FnCompiler fc(*this, m_.argsBlock, 0, -1);
      fc.emit(Op::Yield);
      fc.finish();
    }

    if (level_ >= OptLevel::L1) {
      optimize(m_.globalInit);
      for (auto& f : m_.functions) optimize(f);
      optimize(m_.argsBlock);
    }
    verify(m_);
    return std::move(m_);
  }

  int constant(const Value& v) {
    std::uint64_t bits = 0;
    if (v.tag == ValueTag::Double) std::memcpy(&bits, &v.d, sizeof bits);
    else if (v.tag == ValueTag::Int) bits = static_cast<std::uint32_t>(v.i);
    else if (v.tag == ValueTag::Char) bits = v.c;
    else if (v.tag == ValueTag::Bool) bits = v.b ? 1 : 0;
    auto key = std::make_pair(static_cast<int>(v.tag), bits);
    auto it = pool_.find(key);
    if (it != pool_.end()) return it->second;
    int idx = static_cast<int>(m_.constants.size());
    m_.constants.push_back(v);
    pool_.emplace(key, idx);
    return idx;
  }

  bool l2() const { return level_ == OptLevel::L2; }
  const FaultSet& faults() const { return faults_; }
  const Program& program() const { return p_; }
  void fired(const char* fault) { m_.firedFaults.insert(fault); }

 private:
  void optimize(Function& f) {
    foldConstants(m_, f, p_);
    propagateCopies(f);
    foldConstants(m_, f, p_);
    eliminateDeadCode(f);
    compact(f);
  }

  const Program& p_;
  OptLevel level_;
  FaultSet faults_;
  BytecodeModule m_;
  std::map<std::pair<int, std::uint64_t>, int> pool_;
};

void FnCompiler::stmt(const Stmt& s) {
  switch (s.kind) {
    case StmtKind::VarDecl: {
      int v = expr(*s.expr);
      emit(Op::Mov, s.slot, v, -1, s.span);
      return;
    }
    case StmtKind::Assign: {
      const Expr& t = *s.target;
      if (t.kind == ExprKind::Ident) {
        int v = expr(*s.expr);
        store(t, v);
      } else if (t.kind == ExprKind::FieldAccess) {
        int o = expr(*t.kids[0]);
        int v = expr(*s.expr);
        emit(Op::PutField, o, t.target, v, s.span);
      } else if (t.kind == ExprKind::ArrayAccess) {
        bool u = unchecked(t);
        int arr = expr(*t.kids[0]);
        int idx = expr(*t.kids[1]);
        int v = expr(*s.expr);
        emit(u ? Op::AStoreU : Op::AStore, arr, idx, v, s.span);
      } else {
        throw InternalCompileError("bad assignment target");
      }
      return;
    }
    case StmtKind::ExprStmt:
      expr(*s.expr);
      return;
    case StmtKind::If: {
      int c = expr(*s.expr);
      int br = emit(Op::BrFalse, c, -1, -1, s.span);
      block(s.body);
      if (s.elseBody.empty()) {
        patch(br, here());
        return;
      }
      int skip = emit(Op::Jmp);
      patch(br, here());
      block(s.elseBody);
      patch(skip, here());
      return;
    }
    case StmtKind::While:
    case StmtKind::For:
      loop(s);
      return;
    case StmtKind::Return:
      if (s.expr) emit(Op::Ret, expr(*s.expr), -1, -1, s.span);
      else emit(Op::RetVoid, -1, -1, -1, s.span);
      return;
    case StmtKind::Block:
      block(s.body);
      return;
  }
}

std::optional<std::pair<int, int>> FnCompiler::bceCandidate(const Stmt& s) const {
  if (s.kind != StmtKind::For || !s.init || !s.update) return std::nullopt;
  const Stmt& init = *s.init;
  if (init.kind != StmtKind::VarDecl || init.declType.kind != TypeKind::Int) return std::nullopt;
  if (init.expr->kind != ExprKind::Literal || init.expr->literal.i < 0) return std::nullopt;
  int i = init.slot;
  const Expr& g = *s.expr;
  if (g.kind != ExprKind::Binary || g.binOp != BinOp::Lt || !isLocal(*g.kids[0], i)) return std::nullopt;
  const Expr& len = *g.kids[1];
  if (len.kind != ExprKind::ArrayLength || len.kids[0]->kind != ExprKind::Ident ||
      len.kids[0]->binding.kind != VarKind::Local)
    return std::nullopt;
  int a = len.kids[0]->binding.index;
  const Stmt& u = *s.update;
  if (u.kind != StmtKind::ExprStmt || u.expr->kind != ExprKind::Unary || u.expr->unOp != UnOp::PostInc ||
      !isLocal(*u.expr->kids[0], i))
    return std::nullopt;
  std::set<int> written;
  for (const auto& b : s.body) collectWrites(*b, written);
  if (written.count(i) || written.count(a)) return std::nullopt;
  return std::make_pair(a, i);
}

bool FnCompiler::invariant(const Expr& e, const std::set<int>& written) const {
  switch (e.kind) {
    case ExprKind::Literal:
      return true;
    case ExprKind::Ident:
      if (e.binding.kind == VarKind::Local) return !written.count(e.binding.index);
      if (e.binding.kind == VarKind::Global) return mc_.program().globals[e.binding.index].isFinal;
      return false;
    case ExprKind::ArrayLength:
      return e.kids[0]->kind == ExprKind::Ident && invariant(*e.kids[0], written);
    case ExprKind::Unary:
      if (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec) return false;
      return invariant(*e.kids[0], written);
    case ExprKind::Cast:
      return invariant(*e.kids[0], written);
    case ExprKind::Binary:
      if (e.type.kind == TypeKind::Int && (e.binOp == BinOp::Div || e.binOp == BinOp::Rem)) return false;
      return invariant(*e.kids[0], written) && invariant(*e.kids[1], written);
    default:
      return false;
  }
}

void FnCompiler::loop(const Stmt& s) {
  if (s.kind == StmtKind::For && s.init) stmt(*s.init);

  bool pushedBce = false;
  if (mc_.l2()) {
    if (auto c = bceCandidate(s)) {
      bce_.push_back(*c);
      pushedBce = true;
    }
  }

  const Expr* hoisted = nullptr;
  int tA = -1, tUse = -1;
  int enter = -1;
  if (mc_.l2()) {
    const Expr* first = s.expr.get();
    while (first->kind == ExprKind::Binary && first->binOp == BinOp::And) first = first->kids[0].get();
    std::set<int> written;
    collectWrites(*s.expr, written);
    for (const auto& b : s.body) collectWrites(*b, written);
    if (s.update) collectWrites(*s.update, written);
    if (invariant(*first, written)) {
      hoisted = first;
      emit(Op::Tick, -1, -1, -1, s.span);
      tA = expr(*first);
      if (mc_.faults().loopcondForce) {
        mc_.fired(kLoopcondForce);
        tUse = reg();
        emit(Op::Const, tUse, mc_.constant(Value::ofBool(true)));
        pre_[hoisted] = tUse;
      } else {
        pre_[hoisted] = tA;
      }
      enter = emit(Op::Jmp);
    }
  }

  int head = here();
  emit(Op::Tick, -1, -1, -1, s.span);
  if (enter >= 0) patch(enter, here());
  int c = expr(*s.expr);
  int exit = emit(Op::BrFalse, c);
  block(s.body);
  if (s.update) stmt(*s.update);
  if (tUse >= 0) emit(Op::Mov, tUse, tA);
  emit(Op::Jmp, head);
  patch(exit, here());

  if (hoisted) pre_.erase(hoisted);
  if (pushedBce) bce_.pop_back();
}

void FnCompiler::store(const Expr& ident, int v) {
  switch (ident.binding.kind) {
    case VarKind::Local: emit(Op::Mov, ident.binding.index, v, -1, ident.span); return;
    case VarKind::Global: emit(Op::StoreGlobal, ident.binding.index, v, -1, ident.span); return;
    case VarKind::Field: emit(Op::PutField, 0, ident.binding.index, v, ident.span); return;
  }
}

bool FnCompiler::unchecked(const Expr& access) {
  const Expr& arr = *access.kids[0];
  const Expr& idx = *access.kids[1];
  if (arr.kind == ExprKind::Ident && arr.binding.kind == VarKind::Local && idx.kind == ExprKind::Ident &&
      idx.binding.kind == VarKind::Local) {
    for (const auto& [a, i] : bce_)
      if (a == arr.binding.index && i == idx.binding.index) return true;
  }
  if (mc_.l2() && mc_.faults().bceOveraggressive && containsIntRem(idx)) {
    mc_.fired(kBceOveraggressive);
    return true;
  }
  return false;
}

std::vector<int> FnCompiler::arguments(const Expr& e, std::size_t first) {
  std::vector<int> regs;
  for (const auto& k : e.kids) regs.push_back(expr(*k));
  if (mc_.l2() && mc_.faults().fremClobber) {
    int frem = -1;
    for (std::size_t i = first; i < e.kids.size(); ++i) {
      const Expr& k = *e.kids[i];
      if (k.kind == ExprKind::Binary && k.binOp == BinOp::Rem && k.type.kind == TypeKind::Double) {
        frem = static_cast<int>(i);
        break;
      }
    }
    if (frem >= 0) {
      mc_.fired(kFremClobber);
      for (std::size_t i = first; i < e.kids.size(); ++i)
        if (static_cast<int>(i) != frem && e.kids[i]->type.kind == TypeKind::Double) regs[i] = regs[frem];
    }
  }
  return regs;
}

int FnCompiler::cast(const Expr& e) {
  TypeKind from = e.kids[0]->type.kind;
  TypeKind to = e.castType.kind;
  int v = expr(*e.kids[0]);
  if (from == to) return v;
  Op op = Op::Nop;
  if (from == TypeKind::Int && to == TypeKind::Double) op = Op::I2D;
  else if (from == TypeKind::Int && to == TypeKind::Char) op = Op::I2C;
  else if (from == TypeKind::Double && to == TypeKind::Int) op = Op::D2I;
  else if (from == TypeKind::Double && to == TypeKind::Char) op = Op::D2C;
  else if (from == TypeKind::Char && to == TypeKind::Double) op = Op::C2D;
  else if (from == TypeKind::Char && to == TypeKind::Int) {
    op = Op::C2I;
    if (mc_.l2() && mc_.faults().charWidenSign) {
      mc_.fired(kCharWidenSign);
      op = Op::C2ISext;
    }
  } else {
    throw InternalCompileError("unsupported cast");
  }
  int t = reg();
  emit(op, t, v, -1, e.span);
  return t;
}

int FnCompiler::binary(const Expr& e) {
  BinOp op = e.binOp;
  if (op == BinOp::And || op == BinOp::Or) {
    int t = reg();
    int l = expr(*e.kids[0]);
    emit(Op::Mov, t, l);
    int br = emit(op == BinOp::And ? Op::BrFalse : Op::BrTrue, t);
    int r = expr(*e.kids[1]);
    emit(Op::Mov, t, r);
    patch(br, here());
    return t;
  }

  TypeKind k = e.kids[0]->type.kind;
  if (mc_.l2() && k == TypeKind::Int && (op == BinOp::Mul || op == BinOp::Div || op == BinOp::Rem)) {
    if (auto sh = powerOfTwo(*e.kids[1])) {
      int x = expr(*e.kids[0]);
      int kr = reg();
      emit(Op::Const, kr, mc_.constant(Value::ofInt(*sh)));
      if (op == BinOp::Mul) {
        int t = reg();
        emit(Op::IShl, t, x, kr, e.span);
        return t;
      }
      int c31 = reg(), cw = reg(), sign = reg(), bias = reg(), sum = reg(), q = reg();
      emit(Op::Const, c31, mc_.constant(Value::ofInt(31)));
      emit(Op::Const, cw, mc_.constant(Value::ofInt(32 - *sh)));
      emit(Op::IShr, sign, x, c31);
      emit(Op::IUShr, bias, sign, cw);
      emit(Op::IAdd, sum, x, bias);
      emit(Op::IShr, q, sum, kr, e.span);
      if (op == BinOp::Div) return q;
      int back = reg(), t = reg();
      emit(Op::IShl, back, q, kr);
      emit(Op::ISub, t, x, back, e.span);
      return t;
    }
  }

  int l = expr(*e.kids[0]);
  int r = expr(*e.kids[1]);
  Op o = Op::Nop;
  if (op == BinOp::Eq) o = Op::Eq;
  else if (op == BinOp::Ne) o = Op::Ne;
  else if (k == TypeKind::Int) {
    switch (op) {
      case BinOp::Add: o = Op::IAdd; break;
      case BinOp::Sub: o = Op::ISub; break;
      case BinOp::Mul: o = Op::IMul; break;
      case BinOp::Div: o = Op::IDiv; break;
      case BinOp::Rem: o = Op::IRem; break;
      case BinOp::Shl: o = Op::IShl; break;
      case BinOp::Shr: o = Op::IShr; break;
      case BinOp::UShr: o = Op::IUShr; break;
      case BinOp::BitAnd: o = Op::IAnd; break;
      case BinOp::BitOr: o = Op::IOr; break;
      case BinOp::BitXor: o = Op::IXor; break;
      case BinOp::Lt: o = Op::ILt; break;
      case BinOp::Le: o = Op::ILe; break;
      case BinOp::Gt: o = Op::IGt; break;
      case BinOp::Ge: o = Op::IGe; break;
      default: break;
    }
  } else if (k == TypeKind::Double) {
    switch (op) {
      case BinOp::Add: o = Op::DAdd; break;
      case BinOp::Sub: o = Op::DSub; break;
      case BinOp::Mul: o = Op::DMul; break;
      case BinOp::Div: o = Op::DDiv; break;
      case BinOp::Rem: o = Op::DRem; break;
      case BinOp::Lt: o = Op::DLt; break;
      case BinOp::Le: o = Op::DLe; break;
      case BinOp::Gt: o = Op::DGt; break;
      case BinOp::Ge: o = Op::DGe; break;
      default: break;
    }
  } else if (k == TypeKind::Char) {
    switch (op) {
      case BinOp::Lt: o = Op::CLt; break;
      case BinOp::Le: o = Op::CLe; break;
      case BinOp::Gt: o = Op::CGt; break;
      case BinOp::Ge: o = Op::CGe; break;
      default: break;
    }
  }
  if (o == Op::Nop) throw InternalCompileError(std::string("ill-typed operator ") + spelling(op));
  int t = reg();
  emit(o, t, l, r, e.span);
  return t;
}

int FnCompiler::expr(const Expr& e) {
  if (auto it = pre_.find(&e); it != pre_.end()) return it->second;
  switch (e.kind) {
    case ExprKind::Literal: {
      int t = reg();
      emit(Op::Const, t, mc_.constant(e.literal), -1, e.span);
      return t;
    }
    case ExprKind::Ident: {
      int t = reg();
      switch (e.binding.kind) {
        case VarKind::Local: emit(Op::Mov, t, e.binding.index, -1, e.span); break;
        case VarKind::Global: emit(Op::LoadGlobal, t, e.binding.index, -1, e.span); break;
        case VarKind::Field: emit(Op::GetField, t, 0, e.binding.index, e.span); break;
      }
      return t;
    }
    case ExprKind::This: {
      int t = reg();
      emit(Op::Mov, t, 0, -1, e.span);
      return t;
    }
    case ExprKind::FieldAccess: {
      int o = expr(*e.kids[0]);
      int t = reg();
      emit(Op::GetField, t, o, e.target, e.span);
      return t;
    }
    case ExprKind::ArrayLength: {
      int o = expr(*e.kids[0]);
      int t = reg();
      emit(Op::ALen, t, o, -1, e.span);
      return t;
    }
    case ExprKind::ArrayAccess: {
      bool u = unchecked(e);
      int arr = expr(*e.kids[0]);
      int idx = expr(*e.kids[1]);
      int t = reg();
      emit(u ? Op::ALoadU : Op::ALoad, t, arr, idx, e.span);
      return t;
    }
    case ExprKind::Unary: {
      if (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec) {
        int old = expr(*e.kids[0]);
        int one = reg();
        emit(Op::Const, one, mc_.constant(Value::ofInt(1)));
        int nv = reg();
        emit(e.unOp == UnOp::PostInc ? Op::IAdd : Op::ISub, nv, old, one, e.span);
        store(*e.kids[0], nv);
        return old;
      }
      int v = expr(*e.kids[0]);
      int t = reg();
      Op o = e.unOp == UnOp::Not      ? Op::BNot
             : e.unOp == UnOp::BitNot ? Op::IBitNot
             : e.type.kind == TypeKind::Int ? Op::INeg
                                            : Op::DNeg;
      emit(o, t, v, -1, e.span);
      return t;
    }
    case ExprKind::Binary:
      return binary(e);
    case ExprKind::Cast:
      return cast(e);
    case ExprKind::Call: {
      std::vector<int> regs = arguments(e, e.hasReceiver ? 1 : 0);
      if (e.hasReceiver) emit(Op::NullCheck, regs[0], -1, -1, e.span);
      int t = reg();
      int at = emit(Op::Call, t, e.target, -1, e.span);
      out_.code[at].list.assign(regs.begin(), regs.end());
      return t;
    }
    case ExprKind::New: {
      std::vector<int> regs = arguments(e, 0);
      int t = reg();
      emit(Op::NewRecord, t, e.target, -1, e.span);
      if (e.initFn >= 0) {
        int at = emit(Op::Call, reg(), e.initFn, -1, e.span);
        out_.code[at].list.push_back(t);
        out_.code[at].list.insert(out_.code[at].list.end(), regs.begin(), regs.end());
      } else {
        for (std::size_t i = 0; i < regs.size(); ++i) emit(Op::PutField, t, static_cast<int>(i), regs[i]);
      }
      return t;
    }
    case ExprKind::NewArray: {
      int n = expr(*e.kids[0]);
      int t = reg();
      emit(Op::NewArray, t, n, static_cast<int>(e.castType.elem), e.span);
      return t;
    }
    case ExprKind::Unfilled: {
      emit(Op::TrapUnfilled, e.holeId, -1, -1, e.span);
      return reg();
    }
    case ExprKind::Nondet: {
      int t = reg();
      emit(Op::Nondet, t, -1, -1, e.span);
      return t;
    }
    case ExprKind::Hole:
      throw InternalCompileError("cannot compile a program with holes");
  }
  throw InternalCompileError("unhandled expression");
}

}  // namespace

BytecodeModule compile(const Program& p, OptLevel level, FaultSet faults) {
  return ModuleCompiler(p, level, faults).run();
}

}  // namespace holegen::optvm
