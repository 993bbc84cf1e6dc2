#include "holegen/optvm/vm.hpp"

#include <stdexcept>

#include "holegen/optvm/ops.hpp"

namespace holegen::optvm {

using namespace lang;
using interp::Budget;
using interp::LimitSignal;
using interp::TrapKind;
using interp::TrapSignal;

namespace {

class Machine {
 public:
  Machine(const BytecodeModule& m, GlobalState& st, const ExecLimits& limits)
      : m_(m), st_(st), budget_(limits) {}

  Value call(int fn, const Value* args, std::size_t n) {
    budget_.tick();
    budget_.enter();
    Value r = exec(m_.functions[fn], args, n);
    budget_.leave();
    return r;
  }

  Value exec(const Function& f, const Value* args, std::size_t n) {
    std::vector<Value> regs(static_cast<std::size_t>(f.numRegs));
    for (std::size_t i = 0; i < n; ++i) regs[i] = args[i];
    const Instr* code = f.code.data();
    std::size_t pc = 0;
    for (;;) {
      const Instr& in = code[pc++];
      switch (in.op) {
        case Op::Nop:
          break;
        case Op::Const:
          regs[in.a] = m_.constants[in.b];
          break;
        case Op::Jmp:
          pc = static_cast<std::size_t>(in.a);
          break;
        case Op::BrTrue:
          if (regs[in.a].b) pc = static_cast<std::size_t>(in.b);
          break;
        case Op::BrFalse:
          if (!regs[in.a].b) pc = static_cast<std::size_t>(in.b);
          break;
        case Op::LoadGlobal:
          regs[in.a] = st_.globals[in.b];
          break;
        case Op::StoreGlobal:
          st_.globals[in.a] = regs[in.b];
          break;
        case Op::GetField:
          regs[in.a] = deref(regs[in.b]).slots[in.c];
          break;
        case Op::PutField:
          deref(regs[in.a]).slots[in.b] = regs[in.c];
          break;
        case Op::NewRecord:
          regs[in.a] = rt::newRecord(st_, *m_.program, in.b, budget_);
          break;
        case Op::NewArray:
          regs[in.a] = rt::newArray(st_, static_cast<TypeKind>(in.c), regs[in.b].i, budget_);
          break;
        case Op::ALoad:
        case Op::ALoadU: {
          const HeapObject& o = deref(regs[in.b]);
          std::int32_t idx = regs[in.c].i;
          if (idx < 0 || static_cast<std::size_t>(idx) >= o.slots.size()) {
            if (in.op == Op::ALoad) throw TrapSignal{TrapKind::IndexOutOfBounds};
            regs[in.a] = zeroOf(Type{o.elem, TypeKind::Unit, {}});
          } else {
            regs[in.a] = o.slots[idx];
          }
          break;
        }
        case Op::AStore:
        case Op::AStoreU: {
          HeapObject& o = deref(regs[in.a]);
          std::int32_t idx = regs[in.b].i;
          if (idx < 0 || static_cast<std::size_t>(idx) >= o.slots.size()) {
            if (in.op == Op::AStore) throw TrapSignal{TrapKind::IndexOutOfBounds};
          } else {
            o.slots[idx] = regs[in.c];
          }
          break;
        }
        case Op::ALen:
          regs[in.a] = Value::ofInt(static_cast<std::int32_t>(deref(regs[in.b]).slots.size()));
          break;
        case Op::NullCheck:
          if (!regs[in.a].isRef()) throw TrapSignal{TrapKind::NullDeref};
          break;
        case Op::Call: {
          std::vector<Value> args(in.list.size());
          for (std::size_t k = 0; k < in.list.size(); ++k) args[k] = regs[in.list[k]];
          Value r = call(in.b, args.data(), args.size());
          if (in.a >= 0) regs[in.a] = r;
          break;
        }
        case Op::Ret:
          return regs[in.a];
        case Op::RetVoid:
          return Value();
        case Op::Yield:
          yields_.clear();
          for (auto r : in.list) yields_.push_back(regs[r]);
          break;
        case Op::TrapUnfilled:
          throw TrapSignal{TrapKind::UnfilledHole, in.a};
        case Op::Nondet:
          regs[in.a] = Value::ofInt(rt::nondetValue());
          break;
        case Op::Tick:
          budget_.tick();
          break;
        default:
          regs[in.a] = applyOp(in.op, regs[in.b], in.c >= 0 ? regs[in.c] : Value());
          break;
      }
    }
  }

  std::vector<Value>& yields() { return yields_; }

 private:
  HeapObject& deref(const Value& v) {
    if (!v.isRef()) throw TrapSignal{TrapKind::NullDeref};
    return st_.heap.at(v.ref);
  }

  const BytecodeModule& m_;
  GlobalState& st_;
  Budget budget_;
  std::vector<Value> yields_;
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

Outcome initGlobals(const BytecodeModule& m, GlobalState& out, const ExecLimits& limits) {
  out = GlobalState{};
  out.globals.assign(m.program->globals.size(), Value());
  return guarded([&] {
    Machine(m, out, limits).exec(m.globalInit, nullptr, 0);
    return Value();
  });
}

Outcome runArgs(const BytecodeModule& m, GlobalState& st, std::vector<Value>& out, const ExecLimits& limits) {
  out.clear();
  return guarded([&] {
    Machine vm(m, st, limits);
    vm.exec(m.argsBlock, nullptr, 0);
    out = std::move(vm.yields());
    return Value();
  });
}

Outcome run(const BytecodeModule& m, GlobalState& st, int fn, const std::vector<Value>& args,
            const ExecLimits& limits) {
  if (fn < 0 || static_cast<std::size_t>(fn) >= m.functions.size()) throw std::invalid_argument("bad function index");
  const Function& f = m.functions[fn];
  if (static_cast<int>(args.size()) != f.numParams)
    throw std::invalid_argument("argument count mismatch for " + f.name);
  bool hasReceiver = !m.program->functions[fn].receiver.empty();
  return guarded([&] {
    if (hasReceiver && args[0].tag != ValueTag::Record) throw TrapSignal{TrapKind::NullDeref};
    return Machine(m, st, limits).call(fn, args.data(), args.size());
  });
}

VmEngine::VmEngine(const Program& p, OptLevel level, FaultSet faults, ExecLimits limits)
    : module_(compile(p, level, faults)), limits_(limits) {}

Outcome VmEngine::initGlobals(GlobalState& st) { return optvm::initGlobals(module_, st, limits_); }

Outcome VmEngine::runArgs(GlobalState& st, std::vector<Value>& args) {
  return optvm::runArgs(module_, st, args, limits_);
}

Outcome VmEngine::callEntry(GlobalState& st, const std::vector<Value>& args) {
  return optvm::run(module_, st, module_.entry, args, limits_);
}

}  // namespace holegen::optvm
