#include "holegen/lang/value.hpp"

#include <bit>
#include <cstdio>

namespace holegen::lang {

bool identical(const Value& a, const Value& b) {
  if (a.tag != b.tag) return false;
  switch (a.tag) {
    case ValueTag::Unit:
    case ValueTag::Null: return true;
    case ValueTag::Int: return a.i == b.i;
    case ValueTag::Double: return std::bit_cast<std::uint64_t>(a.d) == std::bit_cast<std::uint64_t>(b.d);
    case ValueTag::Bool: return a.b == b.b;
    case ValueTag::Char: return a.c == b.c;
    case ValueTag::Array:
    case ValueTag::Record: return a.ref == b.ref;
  }
  return false;
}

Value zeroOf(const Type& t) {
  switch (t.kind) {
    case TypeKind::Int: return Value::ofInt(0);
    case TypeKind::Double: return Value::ofDouble(0.0);
    case TypeKind::Bool: return Value::ofBool(false);
    case TypeKind::Char: return Value::ofChar(0);
    case TypeKind::Record:
    case TypeKind::Null: return Value::null();
    default: return Value::unit();
  }
}

std::uint32_t Heap::allocArray(TypeKind elem, std::size_t length) {
  HeapObject obj;
  obj.isArray = true;
  obj.elem = elem;
  obj.slots.assign(length, zeroOf(Type{elem, TypeKind::Unit, {}}));
  objects_.push_back(std::move(obj));
  cells_ += 1 + length;
  return static_cast<std::uint32_t>(objects_.size());
}

std::uint32_t Heap::allocRecord(std::uint32_t recordIndex, std::vector<Value> fields) {
  HeapObject obj;
  obj.recordIndex = recordIndex;
  cells_ += 1 + fields.size();
  obj.slots = std::move(fields);
  objects_.push_back(std::move(obj));
  return static_cast<std::uint32_t>(objects_.size());
}

std::string describe(const Value& v) {
  char buf[64];
  switch (v.tag) {
    case ValueTag::Unit: return "unit";
    case ValueTag::Int: return std::to_string(v.i);
    case ValueTag::Double: std::snprintf(buf, sizeof buf, "%.17g", v.d); return buf;
    case ValueTag::Bool: return v.b ? "true" : "false";
    case ValueTag::Char: std::snprintf(buf, sizeof buf, "'\\u%04x'", v.c); return buf;
    case ValueTag::Null: return "null";
    case ValueTag::Array: return "array#" + std::to_string(v.ref);
    case ValueTag::Record: return "record#" + std::to_string(v.ref);
  }
  return "?";
}

}  // namespace holegen::lang
