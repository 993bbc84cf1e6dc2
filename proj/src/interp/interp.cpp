#include "holegen/interp/interp.hpp"

#include <chrono>
#include <random>
#include <stdexcept>

#include "holegen/interp/runtime.hpp"
#include "holegen/lang/printer.hpp"

namespace holegen::interp {

using namespace lang;

const char* trapName(TrapKind k) {
  switch (k) {
    case TrapKind::DivByZero: return "DivByZero";
    case TrapKind::IndexOutOfBounds: return "IndexOutOfBounds";
    case TrapKind::NullDeref: return "NullDeref";
    case TrapKind::UnfilledHole: return "UnfilledHole";
  }
  return "?";
}

const char* limitName(LimitKind k) {
  switch (k) {
    case LimitKind::Steps: return "Steps";
    case LimitKind::HeapCells: return "HeapCells";
    case LimitKind::WallTime: return "WallTime";
    case LimitKind::CallDepth: return "CallDepth";
  }
  return "?";
}

std::string Outcome::describe() const {
  switch (kind) {
    case Kind::Returned: return "Returned(" + lang::describe(value) + ")";
    case Kind::Trapped:
      return std::string("Trapped(") + trapName(trap) + (holeId >= 0 ? ", " + std::to_string(holeId) : "") + ")";
    case Kind::Exhausted: return std::string("Exhausted(") + limitName(limit) + ")";
  }
  return "?";
}

bool sameOutcome(const Outcome& a, const Outcome& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Outcome::Kind::Returned: return identical(a.value, b.value);
    case Outcome::Kind::Trapped: return a.trap == b.trap && a.holeId == b.holeId;
    case Outcome::Kind::Exhausted: return a.limit == b.limit;
  }
  return false;
}

namespace rt {

std::int32_t nondetValue() {
  static std::random_device device;
  auto now = std::chrono::high_resolution_clock::now().time_since_epoch().count();
  std::uint64_t x = static_cast<std::uint64_t>(now) ^ (static_cast<std::uint64_t>(device()) << 17);
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  return static_cast<std::int32_t>(x);
}

}  // namespace rt

namespace {

class Evaluator {
 public:
  Evaluator(const Program& p, GlobalState& st, HoleOracle& oracle, const ExecLimits& limits)
      : p_(p), st_(st), oracle_(oracle), budget_(limits) {}

  void initGlobals() {
    std::vector<Value> frame;
    frame_ = &frame;
    st_.globals.assign(p_.globals.size(), Value());
    for (std::size_t i = 0; i < p_.globals.size(); ++i) st_.globals[i] = eval(*p_.globals[i].init);
  }

  void runArgs(std::vector<Value>& out) {
    out.clear();
    if (!p_.args) return;
    std::vector<Value> frame(static_cast<std::size_t>(p_.args->numSlots));
    frame_ = &frame;
    for (const auto& s : p_.args->body) exec(*s);
    for (const auto& y : p_.args->yields) out.push_back(eval(*y));
  }

  Value callEntry(int fn, const std::vector<Value>& args) {
    const auto& f = p_.functions[fn];
    std::size_t expected = f.params.size() + (f.receiver.empty() ? 0 : 1);
    if (args.size() != expected) throw std::invalid_argument("argument count mismatch for " + f.qualifiedName());
    if (!f.receiver.empty()) {
      if (args[0].tag != ValueTag::Record) throw TrapSignal{TrapKind::NullDeref};
      return call(fn, args[0], args.data() + 1, args.size() - 1);
    }
    return call(fn, Value(), args.data(), args.size());
  }

 private:
  enum class Flow { Normal, Return };

  Value call(int fn, Value self, const Value* args, std::size_t n) {
    budget_.tick();
    budget_.enter();
    const auto& f = p_.functions[fn];
    std::vector<Value> frame(static_cast<std::size_t>(f.numSlots));
    std::size_t base = 0;
    if (!f.receiver.empty()) frame[base++] = self;
    for (std::size_t i = 0; i < n; ++i) frame[base + i] = args[i];
    std::vector<Value>* saved = frame_;
    frame_ = &frame;
    Value result;
    if (execBlock(f.body) == Flow::Return) result = ret_;
    frame_ = saved;
    budget_.leave();
    return result;
  }

  Flow execBlock(const Block& b) {
    for (const auto& s : b)
      if (exec(*s) == Flow::Return) return Flow::Return;
    return Flow::Normal;
  }

  bool truth(const Expr& e) { return eval(e).b; }

  Flow exec(const Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl:
        (*frame_)[s.slot] = eval(*s.expr);
        return Flow::Normal;
      case StmtKind::Assign:
        assign(*s.target, *s.expr);
        return Flow::Normal;
      case StmtKind::ExprStmt:
        eval(*s.expr);
        return Flow::Normal;
      case StmtKind::If:
        if (truth(*s.expr)) return execBlock(s.body);
        return execBlock(s.elseBody);
      case StmtKind::While:
        for (;;) {
          budget_.tick();
          if (!truth(*s.expr)) return Flow::Normal;
          if (execBlock(s.body) == Flow::Return) return Flow::Return;
        }
      case StmtKind::For:
        if (s.init) exec(*s.init);
        for (;;) {
          budget_.tick();
          if (!truth(*s.expr)) return Flow::Normal;
          if (execBlock(s.body) == Flow::Return) return Flow::Return;
          if (s.update) exec(*s.update);
        }
      case StmtKind::Return:
        ret_ = s.expr ? eval(*s.expr) : Value();
        return Flow::Return;
      case StmtKind::Block:
        return execBlock(s.body);
    }
    return Flow::Normal;
  }

  HeapObject& deref(const Value& v) {
    if (!v.isRef()) throw TrapSignal{TrapKind::NullDeref};
    return st_.heap.at(v.ref);
  }

  Value& variable(const Expr& e) {
    switch (e.binding.kind) {
      case VarKind::Local: return (*frame_)[e.binding.index];
      case VarKind::Global: return st_.globals[e.binding.index];
      case VarKind::Field: return st_.heap.at((*frame_)[0].ref).slots[e.binding.index];
    }
    throw std::logic_error("bad binding");
  }

  void assign(const Expr& target, const Expr& rhs) {
    switch (target.kind) {
      case ExprKind::Ident: {
        Value v = eval(rhs);
        variable(target) = v;
        return;
      }
      case ExprKind::FieldAccess: {
        Value obj = eval(*target.kids[0]);
        Value v = eval(rhs);
        deref(obj).slots[target.target] = v;
        return;
      }
      case ExprKind::ArrayAccess: {
        Value arr = eval(*target.kids[0]);
        std::int32_t idx = eval(*target.kids[1]).i;
        Value v = eval(rhs);
        auto& slots = deref(arr).slots;
        if (idx < 0 || static_cast<std::size_t>(idx) >= slots.size()) throw TrapSignal{TrapKind::IndexOutOfBounds};
        slots[idx] = v;
        return;
      }
      default:
        throw std::logic_error("bad assignment target");
    }
  }

  Value binary(const Expr& e) {
    BinOp op = e.binOp;
    if (op == BinOp::And) return Value::ofBool(truth(*e.kids[0]) && truth(*e.kids[1]));
    if (op == BinOp::Or) return Value::ofBool(truth(*e.kids[0]) || truth(*e.kids[1]));
    Value a = eval(*e.kids[0]);
    Value b = eval(*e.kids[1]);
    if (op == BinOp::Eq) return Value::ofBool(rt::equalValues(a, b));
    if (op == BinOp::Ne) return Value::ofBool(!rt::equalValues(a, b));
    if (a.tag == ValueTag::Int) {
      std::int32_t x = a.i, y = b.i;
      switch (op) {
        case BinOp::Add: return Value::ofInt(rt::wrapAdd(x, y));
        case BinOp::Sub: return Value::ofInt(rt::wrapSub(x, y));
        case BinOp::Mul: return Value::ofInt(rt::wrapMul(x, y));
        case BinOp::Div: return Value::ofInt(rt::intDiv(x, y));
        case BinOp::Rem: return Value::ofInt(rt::intRem(x, y));
        case BinOp::Shl: return Value::ofInt(rt::shl(x, y));
        case BinOp::Shr: return Value::ofInt(rt::shr(x, y));
        case BinOp::UShr: return Value::ofInt(rt::ushr(x, y));
        case BinOp::BitAnd: return Value::ofInt(x & y);
        case BinOp::BitOr: return Value::ofInt(x | y);
        case BinOp::BitXor: return Value::ofInt(x ^ y);
        case BinOp::Lt: return Value::ofBool(x < y);
        case BinOp::Le: return Value::ofBool(x <= y);
        case BinOp::Gt: return Value::ofBool(x > y);
        case BinOp::Ge: return Value::ofBool(x >= y);
        default: break;
      }
    } else if (a.tag == ValueTag::Double) {
      double x = a.d, y = b.d;
      switch (op) {
        case BinOp::Add: return Value::ofDouble(x + y);
        case BinOp::Sub: return Value::ofDouble(x - y);
        case BinOp::Mul: return Value::ofDouble(x * y);
        case BinOp::Div: return Value::ofDouble(x / y);
        case BinOp::Rem: return Value::ofDouble(rt::doubleRem(x, y));
        case BinOp::Lt: return Value::ofBool(x < y);
        case BinOp::Le: return Value::ofBool(x <= y);
        case BinOp::Gt: return Value::ofBool(x > y);
        case BinOp::Ge: return Value::ofBool(x >= y);
        default: break;
      }
    } else if (a.tag == ValueTag::Char) {
      std::uint16_t x = a.c, y = b.c;
      switch (op) {
        case BinOp::Lt: return Value::ofBool(x < y);
        case BinOp::Le: return Value::ofBool(x <= y);
        case BinOp::Gt: return Value::ofBool(x > y);
        case BinOp::Ge: return Value::ofBool(x >= y);
        default: break;
      }
    }
    throw std::logic_error(std::string("ill-typed binary operator ") + spelling(op));
  }

  Value eval(const Expr& e) {
    switch (e.kind) {
      case ExprKind::Literal:
        return e.literal;
      case ExprKind::Ident:
        return variable(e);
      case ExprKind::This:
        return (*frame_)[0];
      case ExprKind::FieldAccess: {
        Value obj = eval(*e.kids[0]);
        return deref(obj).slots[e.target];
      }
      case ExprKind::ArrayLength: {
        Value arr = eval(*e.kids[0]);
        return Value::ofInt(static_cast<std::int32_t>(deref(arr).slots.size()));
      }
      case ExprKind::ArrayAccess: {
        Value arr = eval(*e.kids[0]);
        std::int32_t idx = eval(*e.kids[1]).i;
        const auto& slots = deref(arr).slots;
        if (idx < 0 || static_cast<std::size_t>(idx) >= slots.size()) throw TrapSignal{TrapKind::IndexOutOfBounds};
        return slots[idx];
      }
      case ExprKind::Unary: {
        switch (e.unOp) {
          case UnOp::Neg: {
            Value v = eval(*e.kids[0]);
            return v.tag == ValueTag::Int ? Value::ofInt(rt::wrapNeg(v.i)) : Value::ofDouble(-v.d);
          }
          case UnOp::Not:
            return Value::ofBool(!truth(*e.kids[0]));
          case UnOp::BitNot:
            return Value::ofInt(~eval(*e.kids[0]).i);
          case UnOp::PostInc:
          case UnOp::PostDec: {
            Value& var = variable(*e.kids[0]);
            Value old = var;
            var = Value::ofInt(e.unOp == UnOp::PostInc ? rt::wrapAdd(old.i, 1) : rt::wrapSub(old.i, 1));
            return old;
          }
        }
        break;
      }
      case ExprKind::Binary:
        return binary(e);
      case ExprKind::Cast:
        return rt::convert(eval(*e.kids[0]), e.castType.kind);
      case ExprKind::Call: {
        std::vector<Value> args;
        args.reserve(e.kids.size());
        for (const auto& k : e.kids) args.push_back(eval(*k));
        if (e.hasReceiver) {
          if (!args[0].isRef()) throw TrapSignal{TrapKind::NullDeref};
          return call(e.target, args[0], args.data() + 1, args.size() - 1);
        }
        return call(e.target, Value(), args.data(), args.size());
      }
      case ExprKind::New: {
        std::vector<Value> args;
        args.reserve(e.kids.size());
        for (const auto& k : e.kids) args.push_back(eval(*k));
        Value obj = rt::newRecord(st_, p_, e.target, budget_);
        if (e.initFn >= 0) {
          call(e.initFn, obj, args.data(), args.size());
        } else {
          auto& slots = st_.heap.at(obj.ref).slots;
          for (std::size_t i = 0; i < args.size(); ++i) slots[i] = args[i];
        }
        return obj;
      }
      case ExprKind::NewArray: {
        std::int32_t n = eval(*e.kids[0]).i;
        return rt::newArray(st_, e.castType.elem, n, budget_);
      }
      case ExprKind::Hole: {
        switch (oracle_.mode()) {
          case HoleOracle::Mode::Trapping:
            throw TrapSignal{TrapKind::UnfilledHole, e.holeId};
          case HoleOracle::Mode::Replay: {
            const Expr* d = oracle_.decision(e.holeId);
            if (!d) throw TrapSignal{TrapKind::UnfilledHole, e.holeId};
            return eval(*d);
          }
          case HoleOracle::Mode::Filling:
            return eval(oracle_.decide(e));
        }
        break;
      }
      case ExprKind::Unfilled:
        throw TrapSignal{TrapKind::UnfilledHole, e.holeId};
      case ExprKind::Nondet:
        return Value::ofInt(rt::nondetValue());
    }
    throw std::logic_error("unhandled expression");
  }

  const Program& p_;
  GlobalState& st_;
  HoleOracle& oracle_;
  Budget budget_;
  std::vector<Value>* frame_ = nullptr;
  Value ret_;
};

template <typename F>
Outcome guarded(F&& f) {
  try {
    return Outcome::returned(f());
  } catch (const TrapSignal& t) {
    return Outcome::trapped(t.kind, t.holeId);
  } catch (const LimitSignal& l) {
    return Outcome::exhausted(l.kind);
  }
}

}  // namespace

Outcome initGlobals(const Program& p, GlobalState& out, HoleOracle& oracle, const ExecLimits& limits) {
  out = GlobalState{};
  out.globals.assign(p.globals.size(), Value());
  return guarded([&] {
    Evaluator(p, out, oracle, limits).initGlobals();
    return Value();
  });
}

Outcome runArgs(const Program& p, GlobalState& st, std::vector<Value>& out, HoleOracle& oracle,
                const ExecLimits& limits) {
  return guarded([&] {
    Evaluator(p, st, oracle, limits).runArgs(out);
    return Value();
  });
}

Outcome callEntry(const Program& p, GlobalState& st, const std::string& entry, const std::vector<Value>& args,
                  HoleOracle& oracle, const ExecLimits& limits) {
  int fn = p.findFunction(entry);
  if (fn < 0) throw std::invalid_argument("unknown entry " + entry);
  return guarded([&] { return Evaluator(p, st, oracle, limits).callEntry(fn, args); });
}

InterpEngine::InterpEngine(const Program& p, HoleOracle& oracle, ExecLimits limits)
    : p_(p), oracle_(oracle), limits_(limits), entry_(p.entry.value_or("")) {}

Outcome InterpEngine::initGlobals(GlobalState& st) { return interp::initGlobals(p_, st, oracle_, limits_); }

Outcome InterpEngine::runArgs(GlobalState& st, std::vector<Value>& args) {
  return interp::runArgs(p_, st, args, oracle_, limits_);
}

Outcome InterpEngine::callEntry(GlobalState& st, const std::vector<Value>& args) {
  return interp::callEntry(p_, st, entry_, args, oracle_, limits_);
}

}  // namespace holegen::interp
