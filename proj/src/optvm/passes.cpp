#include <unordered_map>
#include <vector>

#include "holegen/optvm/compiler.hpp"
#include "holegen/optvm/ops.hpp"

namespace holegen::optvm {

using namespace lang;

namespace {

bool isTerminator(Op op) {
  return op == Op::Jmp || op == Op::Ret || op == Op::RetVoid || op == Op::TrapUnfilled;
}

std::vector<bool> leaders(const Function& f) {
  std::vector<bool> lead(f.code.size() + 1, false);
  lead[0] = true;
  for (std::size_t i = 0; i < f.code.size(); ++i) {
    const Instr& in = f.code[i];
    if (in.op == Op::Jmp) lead[in.a] = true;
    if (in.op == Op::BrTrue || in.op == Op::BrFalse) lead[in.b] = true;
    if (isBranch(in.op) || isTerminator(in.op)) lead[i + 1] = true;
  }
  return lead;
}

std::vector<std::int32_t*> readRefs(Instr& in) {
  std::vector<std::int32_t> regs;
  readsOf(in, regs);
  std::vector<std::int32_t*> out;
  switch (in.op) {
    case Op::Call:
    case Op::Yield:
      for (auto& r : in.list) out.push_back(&r);
      return out;
    case Op::BrTrue:
    case Op::BrFalse:
    case Op::NullCheck:
    case Op::Ret:
      out.push_back(&in.a);
      return out;
    case Op::PutField:
      out.push_back(&in.a);
      out.push_back(&in.c);
      return out;
    case Op::AStore:
    case Op::AStoreU:
      out.push_back(&in.a);
      out.push_back(&in.b);
      out.push_back(&in.c);
      return out;
    default:
      if (regs.size() >= 1) out.push_back(&in.b);
      if (regs.size() >= 2) out.push_back(&in.c);
      return out;
  }
}

void removeUnreachable(Function& f) {
  std::vector<bool> seen(f.code.size(), false);
  std::vector<std::size_t> work{0};
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    if (i >= f.code.size() || seen[i]) continue;
    seen[i] = true;
    const Instr& in = f.code[i];
    if (in.op == Op::Jmp) work.push_back(in.a);
    if (in.op == Op::BrTrue || in.op == Op::BrFalse) work.push_back(in.b);
    if (!isTerminator(in.op)) work.push_back(i + 1);
  }
  for (std::size_t i = 0; i < f.code.size(); ++i)
    if (!seen[i]) f.code[i] = Instr{};
}

}  // namespace

void foldConstants(BytecodeModule& m, Function& f, const Program& p) {
  auto lead = leaders(f);
  std::unordered_map<int, Value> known;
  auto addConst = [&](const Value& v) {
    for (std::size_t k = 0; k < m.constants.size(); ++k)
      if (identical(m.constants[k], v)) return static_cast<int>(k);
    m.constants.push_back(v);
    return static_cast<int>(m.constants.size()) - 1;
  };
  for (std::size_t i = 0; i < f.code.size(); ++i) {
    if (lead[i]) known.clear();
    Instr& in = f.code[i];
    if (in.op == Op::LoadGlobal) {
      const auto& g = p.globals[in.b];
      if (g.isFinal && g.init->kind == ExprKind::Literal) {
        in.op = Op::Const;
        in.b = addConst(g.init->literal);
      }
    }
    if (in.op == Op::Const) {
      known[in.a] = m.constants[in.b];
      continue;
    }
    if (isFoldable(in.op)) {
      auto b = known.find(in.b);
      bool unary = isUnaryOp(in.op);
      auto c = unary ? known.end() : known.find(in.c);
      if (b != known.end() && (unary || c != known.end())) {
        Value cv = unary ? Value() : c->second;
        bool traps = (in.op == Op::IDiv || in.op == Op::IRem) && cv.i == 0;
        if (!traps) {
          Value r = applyOp(in.op, b->second, cv);
          int dst = in.a;
          in = Instr{Op::Const, dst, addConst(r), -1, {}, in.span};
          known[dst] = r;
          continue;
        }
      }
    }
    if (in.op == Op::BrTrue || in.op == Op::BrFalse) {
      auto c = known.find(in.a);
      if (c != known.end()) {
        bool taken = c->second.b == (in.op == Op::BrTrue);
        if (taken) in = Instr{Op::Jmp, in.b, -1, -1, {}, in.span};
        else in = Instr{};
      }
      continue;
    }
    std::int32_t w = writeOf(in);
    if (w >= 0) known.erase(w);
  }
  removeUnreachable(f);
}

void propagateCopies(Function& f) {
  auto lead = leaders(f);
  std::unordered_map<int, int> copyOf;
  for (std::size_t i = 0; i < f.code.size(); ++i) {
    if (lead[i]) copyOf.clear();
    Instr& in = f.code[i];
    for (std::int32_t* r : readRefs(in)) {
      auto it = copyOf.find(*r);
      if (it != copyOf.end()) *r = it->second;
    }
    std::int32_t w = writeOf(in);
    if (w < 0) continue;
    copyOf.erase(w);
    for (auto it = copyOf.begin(); it != copyOf.end();) {
      if (it->second == w) it = copyOf.erase(it);
      else ++it;
    }
    if (in.op == Op::Mov && in.b != in.a) copyOf[in.a] = in.b;
  }
}

void eliminateDeadCode(Function& f) {
  std::vector<std::int32_t> regs;
  for (bool changed = true; changed;) {
    changed = false;
    std::vector<int> uses(static_cast<std::size_t>(f.numRegs), 0);
    for (const auto& in : f.code) {
      readsOf(in, regs);
      for (auto r : regs) ++uses[r];
    }
    for (auto& in : f.code) {
      if (in.op == Op::Nop) continue;
      bool selfMove = in.op == Op::Mov && in.a == in.b;
      if (selfMove || (isPure(in) && uses[in.a] == 0)) {
        in = Instr{};
        changed = true;
      }
    }
  }
}

void compact(Function& f) {
  for (bool changed = true; changed;) {
    changed = false;
    std::size_t n = f.code.size();
    std::vector<int> newIndex(n + 1, 0);
    int next = 0;
    for (std::size_t i = 0; i < n; ++i) {
      newIndex[i] = next;
      if (f.code[i].op != Op::Nop) ++next;
    }
    newIndex[n] = next;
    std::vector<Instr> out;
    out.reserve(static_cast<std::size_t>(next));
    for (auto& in : f.code) {
      if (in.op == Op::Nop) continue;
      if (in.op == Op::Jmp) in.a = newIndex[in.a];
      if (in.op == Op::BrTrue || in.op == Op::BrFalse) in.b = newIndex[in.b];
      out.push_back(std::move(in));
    }
    for (std::size_t i = 0; i < out.size(); ++i) {
      Instr& in = out[i];
      int target = in.op == Op::Jmp ? in.a : (in.op == Op::BrTrue || in.op == Op::BrFalse) ? in.b : -1;
      if (target == static_cast<int>(i) + 1) {
        in = Instr{};
        changed = true;
      }
    }
    f.code = std::move(out);
  }
}

}  // namespace holegen::optvm
