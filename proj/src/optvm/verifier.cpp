#include <cstdint>
#include <vector>

#include "holegen/optvm/compiler.hpp"

namespace holegen::optvm {

namespace {

using Bits = std::vector<std::uint64_t>;

struct RegSet {
  explicit RegSet(int n, bool full) : words((static_cast<std::size_t>(n) + 63) / 64, full ? ~0ULL : 0ULL) {}
  bool has(int r) const { return (words[r / 64] >> (r % 64)) & 1ULL; }
  void add(int r) { words[r / 64] |= 1ULL << (r % 64); }
  bool intersect(const RegSet& o) {
    bool changed = false;
    for (std::size_t i = 0; i < words.size(); ++i) {
      std::uint64_t w = words[i] & o.words[i];
      changed |= w != words[i];
      words[i] = w;
    }
    return changed;
  }
  Bits words;
};

[[noreturn]] void fail(const Function& f, std::size_t at, const std::string& what) {
  throw InternalCompileError("verify " + f.name + " @" + std::to_string(at) + ": " + what);
}

void verifyFunction(const BytecodeModule& m, const Function& f) {
  const std::size_t n = f.code.size();
  if (n == 0) throw InternalCompileError("verify " + f.name + ": empty function");
  if (f.numParams > f.numRegs) throw InternalCompileError("verify " + f.name + ": too few registers");
  Op last = f.code.back().op;
  if (last != Op::Ret && last != Op::RetVoid && last != Op::Jmp && last != Op::TrapUnfilled)
    fail(f, n - 1, "falls off the end");

  std::vector<std::int32_t> reads;
  auto checkReg = [&](std::size_t at, std::int32_t r) {
    if (r < 0 || r >= f.numRegs) fail(f, at, "register out of range");
  };
  auto checkTarget = [&](std::size_t at, std::int32_t t) {
    if (t < 0 || static_cast<std::size_t>(t) >= n) fail(f, at, "jump target out of range");
  };
  std::vector<std::vector<std::size_t>> succ(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Instr& in = f.code[i];
    readsOf(in, reads);
    for (auto r : reads) checkReg(i, r);
    if (std::int32_t w = writeOf(in); w >= 0) checkReg(i, w);
    switch (in.op) {
      case Op::Const:
        if (in.b < 0 || static_cast<std::size_t>(in.b) >= m.constants.size()) fail(f, i, "bad constant");
        break;
      case Op::Call:
        if (in.b < 0 || static_cast<std::size_t>(in.b) >= m.functions.size()) fail(f, i, "bad callee");
        if (static_cast<int>(in.list.size()) != m.functions[in.b].numParams) fail(f, i, "arity mismatch");
        break;
      case Op::Jmp:
        checkTarget(i, in.a);
        succ[i].push_back(in.a);
        continue;
      case Op::BrTrue:
      case Op::BrFalse:
        checkTarget(i, in.b);
        succ[i].push_back(in.b);
        break;
      case Op::Ret:
      case Op::RetVoid:
      case Op::TrapUnfilled:
        continue;
      default:
        break;
    }
    if (i + 1 < n) succ[i].push_back(i + 1);
  }

  std::vector<RegSet> in(n, RegSet(f.numRegs, true));
  in[0] = RegSet(f.numRegs, false);
  for (int r = 0; r < f.numParams; ++r) in[0].add(r);
  std::vector<bool> queued(n, false);
  std::vector<std::size_t> work{0};
  queued[0] = true;
  while (!work.empty()) {
    std::size_t i = work.back();
    work.pop_back();
    queued[i] = false;
    RegSet out = in[i];
    if (std::int32_t w = writeOf(f.code[i]); w >= 0) out.add(w);
    for (std::size_t s : succ[i]) {
      if (in[s].intersect(out) && !queued[s]) {
        queued[s] = true;
        work.push_back(s);
      }
    }
  }

  std::vector<bool> reachable(n, false);
  std::vector<std::size_t> stack{0};
  while (!stack.empty()) {
    std::size_t i = stack.back();
    stack.pop_back();
    if (reachable[i]) continue;
    reachable[i] = true;
    for (std::size_t s : succ[i]) stack.push_back(s);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!reachable[i]) continue;
    readsOf(f.code[i], reads);
    for (auto r : reads)
      if (!in[i].has(r)) fail(f, i, "r" + std::to_string(r) + " may be read before it is written");
  }
}

}  // namespace

void verify(const BytecodeModule& m) {
  verifyFunction(m, m.globalInit);
  for (const auto& f : m.functions) verifyFunction(m, f);
  verifyFunction(m, m.argsBlock);
}

}  // namespace holegen::optvm
