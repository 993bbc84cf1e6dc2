#pragma once

#include "holegen/interp/runtime.hpp"
#include "holegen/optvm/bytecode.hpp"

namespace holegen::optvm {

namespace rt = interp::rt;

/// Result of a pure arithmetic, comparison or conversion opcode. Int division
/// by zero throws TrapSignal.
inline Value applyOp(Op op, const Value& b, const Value& c) {
  switch (op) {
    case Op::IAdd: return Value::ofInt(rt::wrapAdd(b.i, c.i));
    case Op::ISub: return Value::ofInt(rt::wrapSub(b.i, c.i));
    case Op::IMul: return Value::ofInt(rt::wrapMul(b.i, c.i));
    case Op::IDiv: return Value::ofInt(rt::intDiv(b.i, c.i));
    case Op::IRem: return Value::ofInt(rt::intRem(b.i, c.i));
    case Op::IShl: return Value::ofInt(rt::shl(b.i, c.i));
    case Op::IShr: return Value::ofInt(rt::shr(b.i, c.i));
    case Op::IUShr: return Value::ofInt(rt::ushr(b.i, c.i));
    case Op::IAnd: return Value::ofInt(b.i & c.i);
    case Op::IOr: return Value::ofInt(b.i | c.i);
    case Op::IXor: return Value::ofInt(b.i ^ c.i);
    case Op::INeg: return Value::ofInt(rt::wrapNeg(b.i));
    case Op::IBitNot: return Value::ofInt(~b.i);
    case Op::DAdd: return Value::ofDouble(b.d + c.d);
    case Op::DSub: return Value::ofDouble(b.d - c.d);
    case Op::DMul: return Value::ofDouble(b.d * c.d);
    case Op::DDiv: return Value::ofDouble(b.d / c.d);
    case Op::DRem: return Value::ofDouble(rt::doubleRem(b.d, c.d));
    case Op::DNeg: return Value::ofDouble(-b.d);
    case Op::ILt: return Value::ofBool(b.i < c.i);
    case Op::ILe: return Value::ofBool(b.i <= c.i);
    case Op::IGt: return Value::ofBool(b.i > c.i);
    case Op::IGe: return Value::ofBool(b.i >= c.i);
    case Op::DLt: return Value::ofBool(b.d < c.d);
    case Op::DLe: return Value::ofBool(b.d <= c.d);
    case Op::DGt: return Value::ofBool(b.d > c.d);
    case Op::DGe: return Value::ofBool(b.d >= c.d);
    case Op::CLt: return Value::ofBool(b.c < c.c);
    case Op::CLe: return Value::ofBool(b.c <= c.c);
    case Op::CGt: return Value::ofBool(b.c > c.c);
    case Op::CGe: return Value::ofBool(b.c >= c.c);
    case Op::Eq: return Value::ofBool(rt::equalValues(b, c));
    case Op::Ne: return Value::ofBool(!rt::equalValues(b, c));
    case Op::BNot: return Value::ofBool(!b.b);
    case Op::I2D: return Value::ofDouble(b.i);
    case Op::D2I: return Value::ofInt(rt::d2i(b.d));
    case Op::I2C: return Value::ofChar(rt::i2c(b.i));
    case Op::C2I: return Value::ofInt(b.c);
    case Op::C2ISext: return Value::ofInt(static_cast<std::int16_t>(b.c));
    case Op::C2D: return Value::ofDouble(b.c);
    case Op::D2C: return Value::ofChar(rt::i2c(rt::d2i(b.d)));
    case Op::Mov: return b;
    default: return Value();
  }
}

inline bool isFoldable(Op op) {
  return (op >= Op::IAdd && op <= Op::D2C) || op == Op::Mov;
}

inline bool isUnaryOp(Op op) {
  switch (op) {
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
      return true;
    default:
      return false;
  }
}

}  // namespace holegen::optvm
