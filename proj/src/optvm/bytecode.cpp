#include "holegen/optvm/bytecode.hpp"

#include "holegen/lang/printer.hpp"

namespace holegen::optvm {

const char* opName(Op op) {
  switch (op) {
    case Op::Nop: return "nop";
    case Op::Const: return "const";
    case Op::Mov: return "mov";
    case Op::IAdd: return "iadd";
    case Op::ISub: return "isub";
    case Op::IMul: return "imul";
    case Op::IDiv: return "idiv";
    case Op::IRem: return "irem";
    case Op::IShl: return "ishl";
    case Op::IShr: return "ishr";
    case Op::IUShr: return "iushr";
    case Op::IAnd: return "iand";
    case Op::IOr: return "ior";
    case Op::IXor: return "ixor";
    case Op::INeg: return "ineg";
    case Op::IBitNot: return "inot";
    case Op::DAdd: return "dadd";
    case Op::DSub: return "dsub";
    case Op::DMul: return "dmul";
    case Op::DDiv: return "ddiv";
    case Op::DRem: return "drem";
    case Op::DNeg: return "dneg";
    case Op::ILt: return "ilt";
    case Op::ILe: return "ile";
    case Op::IGt: return "igt";
    case Op::IGe: return "ige";
    case Op::DLt: return "dlt";
    case Op::DLe: return "dle";
    case Op::DGt: return "dgt";
    case Op::DGe: return "dge";
    case Op::CLt: return "clt";
    case Op::CLe: return "cle";
    case Op::CGt: return "cgt";
    case Op::CGe: return "cge";
    case Op::Eq: return "eq";
    case Op::Ne: return "ne";
    case Op::BNot: return "bnot";
    case Op::I2D: return "i2d";
    case Op::D2I: return "d2i";
    case Op::I2C: return "i2c";
    case Op::C2I: return "c2i";
    case Op::C2ISext: return "c2i.sext";
    case Op::C2D: return "c2d";
    case Op::D2C: return "d2c";
    case Op::Jmp: return "jmp";
    case Op::BrTrue: return "brtrue";
    case Op::BrFalse: return "brfalse";
    case Op::LoadGlobal: return "ldglobal";
    case Op::StoreGlobal: return "stglobal";
    case Op::GetField: return "getfield";
    case Op::PutField: return "putfield";
    case Op::NewRecord: return "newrecord";
    case Op::NewArray: return "newarray";
    case Op::ALoad: return "aload";
    case Op::ALoadU: return "aload.u";
    case Op::AStore: return "astore";
    case Op::AStoreU: return "astore.u";
    case Op::ALen: return "alen";
    case Op::NullCheck: return "nullcheck";
    case Op::Call: return "call";
    case Op::Ret: return "ret";
    case Op::RetVoid: return "ret.void";
    case Op::Yield: return "yield";
    case Op::TrapUnfilled: return "trap.unfilled";
    case Op::Nondet: return "nondet";
    case Op::Tick: return "tick";
  }
  return "?";
}

bool isBranch(Op op) { return op == Op::Jmp || op == Op::BrTrue || op == Op::BrFalse; }

std::int32_t writeOf(const Instr& in) {
  switch (in.op) {
    case Op::Nop:
    case Op::Jmp:
    case Op::BrTrue:
    case Op::BrFalse:
    case Op::StoreGlobal:
    case Op::PutField:
    case Op::AStore:
    case Op::AStoreU:
    case Op::NullCheck:
    case Op::Ret:
    case Op::RetVoid:
    case Op::Yield:
    case Op::TrapUnfilled:
    case Op::Tick:
      return -1;
    default:
      return in.a;
  }
}

void readsOf(const Instr& in, std::vector<std::int32_t>& out) {
  out.clear();
  switch (in.op) {
    case Op::Nop:
    case Op::Const:
    case Op::Jmp:
    case Op::LoadGlobal:
    case Op::NewRecord:
    case Op::RetVoid:
    case Op::TrapUnfilled:
    case Op::Nondet:
    case Op::Tick:
      return;
    case Op::Mov:
    case Op::INeg:
    case Op::IBitNot:
    case Op::DNeg:
    case Op::BNot:
    case Op::I2D:
    case Op::D2I:
    case Op::I2C:
    case Op::C2I:
    case Op::C2ISext:
    case Op::C2D:
    case Op::D2C:
    case Op::StoreGlobal:
    case Op::NewArray:
    case Op::ALen:
      out.push_back(in.b);
      return;
    case Op::BrTrue:
    case Op::BrFalse:
    case Op::NullCheck:
    case Op::Ret:
      out.push_back(in.a);
      return;
    case Op::GetField:
      out.push_back(in.b);
      return;
    case Op::PutField:
      out.push_back(in.a);
      out.push_back(in.c);
      return;
    case Op::AStore:
    case Op::AStoreU:
      out.push_back(in.a);
      out.push_back(in.b);
      out.push_back(in.c);
      return;
    case Op::Call:
    case Op::Yield:
      out.insert(out.end(), in.list.begin(), in.list.end());
      return;
    default:
      out.push_back(in.b);
      out.push_back(in.c);
      return;
  }
}

bool isPure(const Instr& in) {
  switch (in.op) {
    case Op::Const:
    case Op::Mov:
    case Op::IAdd:
    case Op::ISub:
    case Op::IMul:
    case Op::IShl:
    case Op::IShr:
    case Op::IUShr:
    case Op::IAnd:
    case Op::IOr:
    case Op::IXor:
    case Op::INeg:
    case Op::IBitNot:
    case Op::DAdd:
    case Op::DSub:
    case Op::DMul:
    case Op::DDiv:
    case Op::DRem:
    case Op::DNeg:
    case Op::ILt:
    case Op::ILe:
    case Op::IGt:
    case Op::IGe:
    case Op::DLt:
    case Op::DLe:
    case Op::DGt:
    case Op::DGe:
    case Op::CLt:
    case Op::CLe:
    case Op::CGt:
    case Op::CGe:
    case Op::Eq:
    case Op::Ne:
    case Op::BNot:
    case Op::I2D:
    case Op::D2I:
    case Op::I2C:
    case Op::C2I:
    case Op::C2ISext:
    case Op::C2D:
    case Op::D2C:
    case Op::LoadGlobal:
      return true;
    default:
      return false;
  }
}

std::string disassemble(const BytecodeModule& m, const Function& f) {
  std::string out = "function " + f.name + " params=" + std::to_string(f.numParams) +
                    " regs=" + std::to_string(f.numRegs) + "\n";
  for (std::size_t i = 0; i < f.code.size(); ++i) {
    const Instr& in = f.code[i];
    out += "  " + std::to_string(i) + ": " + opName(in.op);
    if (in.op == Op::Const) {
      out += " r" + std::to_string(in.a) + ", " + lang::printLiteral(m.constants[in.b]);
    } else if (in.op == Op::Call || in.op == Op::Yield) {
      if (in.op == Op::Call) {
        out += in.a >= 0 ? " r" + std::to_string(in.a) + ", " : " _, ";
        const auto& fns = m.functions;
        out += in.b >= 0 && static_cast<std::size_t>(in.b) < fns.size() ? fns[in.b].name : "?";
      }
      out += " (";
      for (std::size_t k = 0; k < in.list.size(); ++k) out += (k ? ", r" : "r") + std::to_string(in.list[k]);
      out += ")";
    } else {
      const char* sep = " ";
      for (std::int32_t x : {in.a, in.b, in.c}) {
        if (x < 0) continue;
        out += sep + std::to_string(x);
        sep = ", ";
      }
    }
    out += "\n";
  }
  return out;
}

std::string disassemble(const BytecodeModule& m) {
  std::string out;
  out += disassemble(m, m.globalInit);
  for (const auto& f : m.functions) out += disassemble(m, f);
  out += disassemble(m, m.argsBlock);
  if (!m.firedFaults.empty()) {
    out += "faults:";
    for (const auto& f : m.firedFaults) out += " " + f;
    out += "\n";
  }
  return out;
}

}  // namespace holegen::optvm
