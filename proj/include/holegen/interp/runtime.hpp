#pragma once

#include <cmath>
#include <cstdint>
#include <limits>

#include "holegen/interp/outcome.hpp"
#include "holegen/lang/ast.hpp"

namespace holegen::interp::rt {

using lang::GlobalState;
using lang::TypeKind;

inline std::int32_t wrapAdd(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) + static_cast<std::uint32_t>(b));
}
inline std::int32_t wrapSub(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) - static_cast<std::uint32_t>(b));
}
inline std::int32_t wrapMul(std::int32_t a, std::int32_t b) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) * static_cast<std::uint32_t>(b));
}
inline std::int32_t wrapNeg(std::int32_t a) { return wrapSub(0, a); }

inline std::int32_t intDiv(std::int32_t a, std::int32_t b) {
  if (b == 0) throw TrapSignal{TrapKind::DivByZero};
  if (a == std::numeric_limits<std::int32_t>::min() && b == -1) return a;
  return a / b;
}
inline std::int32_t intRem(std::int32_t a, std::int32_t b) {
  if (b == 0) throw TrapSignal{TrapKind::DivByZero};
  if (b == -1) return 0;
  return a % b;
}

inline std::int32_t shl(std::int32_t a, std::int32_t n) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) << (n & 31));
}
inline std::int32_t shr(std::int32_t a, std::int32_t n) { return a >> (n & 31); }
inline std::int32_t ushr(std::int32_t a, std::int32_t n) {
  return static_cast<std::int32_t>(static_cast<std::uint32_t>(a) >> (n & 31));
}

inline double doubleRem(double a, double b) { return std::fmod(a, b); }

/// Java d2i: NaN is 0, out-of-range saturates.
inline std::int32_t d2i(double d) {
  if (std::isnan(d)) return 0;
  if (d >= 2147483647.0) return std::numeric_limits<std::int32_t>::max();
  if (d <= -2147483648.0) return std::numeric_limits<std::int32_t>::min();
  return static_cast<std::int32_t>(d);
}
inline std::uint16_t i2c(std::int32_t i) { return static_cast<std::uint16_t>(static_cast<std::uint32_t>(i)); }

/// Converts a numeric or char value to the requested primitive kind.
inline Value convert(const Value& v, TypeKind to) {
  switch (to) {
    case TypeKind::Int:
      if (v.tag == lang::ValueTag::Int) return v;
      if (v.tag == lang::ValueTag::Double) return Value::ofInt(d2i(v.d));
      return Value::ofInt(v.c);
    case TypeKind::Double:
      if (v.tag == lang::ValueTag::Double) return v;
      if (v.tag == lang::ValueTag::Int) return Value::ofDouble(v.i);
      return Value::ofDouble(v.c);
    case TypeKind::Char:
      if (v.tag == lang::ValueTag::Char) return v;
      if (v.tag == lang::ValueTag::Int) return Value::ofChar(i2c(v.i));
      return Value::ofChar(i2c(d2i(v.d)));
    default:
      return v;
  }
}

/// Reference or primitive equality as `==` sees it (IEEE for doubles).
inline bool equalValues(const Value& a, const Value& b) {
  switch (a.tag) {
    case lang::ValueTag::Int: return a.i == b.i;
    case lang::ValueTag::Double: return a.d == b.d;
    case lang::ValueTag::Bool: return a.b == b.b;
    case lang::ValueTag::Char: return a.c == b.c;
    default: {
      std::uint32_t ra = a.isRef() ? a.ref : 0;
      std::uint32_t rb = b.isRef() ? b.ref : 0;
      return ra == rb;
    }
  }
}

/// Allocates a zeroed array; negative length traps as IndexOutOfBounds.
inline Value newArray(GlobalState& st, TypeKind elem, std::int32_t length, const Budget& budget) {
  if (length < 0) throw TrapSignal{TrapKind::IndexOutOfBounds};
  budget.reserveCells(st.heap.cells(), 1 + static_cast<std::size_t>(length));
  return Value::array(st.heap.allocArray(elem, static_cast<std::size_t>(length)));
}

/// Allocates a record with default field values (array fields get fresh empty arrays).
inline Value newRecord(GlobalState& st, const lang::Program& p, int recordIndex, const Budget& budget) {
  const auto& rec = p.records[recordIndex];
  budget.reserveCells(st.heap.cells(), 1 + rec.fields.size());
  std::vector<Value> fields;
  fields.reserve(rec.fields.size());
  for (const auto& f : rec.fields) fields.push_back(lang::zeroOf(f.type));
  Value r = Value::record(st.heap.allocRecord(static_cast<std::uint32_t>(recordIndex), std::move(fields)));
  for (std::size_t i = 0; i < rec.fields.size(); ++i) {
    if (rec.fields[i].type.kind == TypeKind::Array) {
      Value a = newArray(st, rec.fields[i].type.elem, 0, budget);
      st.heap.at(r.ref).slots[i] = a;
    }
  }
  return r;
}

/// Source of deliberately nondeterministic values (`nondet()`).
std::int32_t nondetValue();

}  // namespace holegen::interp::rt
