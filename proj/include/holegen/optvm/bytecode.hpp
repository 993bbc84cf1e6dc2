#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "holegen/lang/ast.hpp"

namespace holegen::optvm {

using lang::Value;

// Operand convention: a is the destination unless noted.
enum class Op : std::uint8_t {
  Nop,
  Const,       // a = constants[b]
  Mov,         // a = b
  IAdd, ISub, IMul, IDiv, IRem, IShl, IShr, IUShr, IAnd, IOr, IXor,  // a = b op c
  INeg, IBitNot,                                                      // a = op b
  DAdd, DSub, DMul, DDiv, DRem,                                       // a = b op c
  DNeg,
  ILt, ILe, IGt, IGe,
  DLt, DLe, DGt, DGe,
  CLt, CLe, CGt, CGe,
  Eq, Ne,      // primitive or reference equality
  BNot,
  I2D, D2I, I2C, C2I, C2ISext, C2D, D2C,
  Jmp,         // goto a
  BrTrue,      // if a goto b
  BrFalse,     // if !a goto b
  LoadGlobal,  // a = globals[b]
  StoreGlobal, // globals[a] = b
  GetField,    // a = b.fields[c]
  PutField,    // a.fields[b] = c
  NewRecord,   // a = new record #b with default fields
  NewArray,    // a = new (TypeKind)c[b]
  ALoad,       // a = b[c], bounds checked
  ALoadU,      // a = b[c], unchecked: out of range reads the element default
  AStore,      // a[b] = c, bounds checked
  AStoreU,     // a[b] = c, unchecked: out of range stores are dropped
  ALen,        // a = b.length
  NullCheck,   // trap NullDeref if a is null
  Call,        // a = call function b(list...), a may be -1
  Ret,         // return a
  RetVoid,
  Yield,       // args block result: list...
  TrapUnfilled,  // trap UnfilledHole with id a
  Nondet,      // a = nondeterministic int
  Tick,        // one loop-guard step
};

const char* opName(Op op);

struct Instr {
  Op op = Op::Nop;
  std::int32_t a = -1;
  std::int32_t b = -1;
  std::int32_t c = -1;
  std::vector<std::int32_t> list;
  lang::SourceSpan span;
};

/// Registers 0..numParams-1 hold the receiver (if any) and the parameters.
struct Function {
  std::string name;
  int numParams = 0;
  int numRegs = 0;
  std::vector<Instr> code;
};

struct BytecodeModule {
  const lang::Program* program = nullptr;  // record and global declarations
  std::vector<Value> constants;
  std::vector<Function> functions;  // indexed like program->functions
  Function globalInit;              // stores every global in order
  Function argsBlock;               // ends in Yield
  int entry = -1;
  std::set<std::string> firedFaults;  // fault patterns the compiler acted on
};

std::string disassemble(const BytecodeModule& m);
std::string disassemble(const BytecodeModule& m, const Function& f);

/// Registers read and written by one instruction.
void readsOf(const Instr& in, std::vector<std::int32_t>& out);
std::int32_t writeOf(const Instr& in);
bool isBranch(Op op);
/// True when the instruction has no effect besides writing its destination.
bool isPure(const Instr& in);

}  // namespace holegen::optvm
