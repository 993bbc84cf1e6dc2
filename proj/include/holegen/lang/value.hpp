#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "holegen/lang/type.hpp"

namespace holegen::lang {

enum class ValueTag : std::uint8_t { Unit, Int, Double, Bool, Char, Null, Array, Record };

/// Runtime value. Arrays and records live in a Heap and are referenced by id,
/// so copying a Value copies the reference, never the entity.
struct Value {
  ValueTag tag = ValueTag::Unit;
  union {
    std::int32_t i;
    double d;
    bool b;
    std::uint16_t c;
    std::uint32_t ref;
  };

  Value() : i(0) {}

  static Value unit() { return Value(); }
  static Value ofInt(std::int32_t v) { Value x; x.tag = ValueTag::Int; x.i = v; return x; }
  static Value ofDouble(double v) { Value x; x.tag = ValueTag::Double; x.d = v; return x; }
  static Value ofBool(bool v) { Value x; x.tag = ValueTag::Bool; x.b = v; return x; }
  static Value ofChar(std::uint16_t v) { Value x; x.tag = ValueTag::Char; x.c = v; return x; }
  static Value null() { Value x; x.tag = ValueTag::Null; x.ref = 0; return x; }
  static Value array(std::uint32_t id) { Value x; x.tag = ValueTag::Array; x.ref = id; return x; }
  static Value record(std::uint32_t id) { Value x; x.tag = ValueTag::Record; x.ref = id; return x; }

  bool isRef() const { return tag == ValueTag::Array || tag == ValueTag::Record; }
};

/// Bitwise identity: doubles compare by bit pattern, references by id.
bool identical(const Value& a, const Value& b);

/// The zero value a fresh variable or field of type `t` holds. Arrays have no
/// default (see Heap::defaultFor).
Value zeroOf(const Type& t);

struct HeapObject {
  bool isArray = false;
  TypeKind elem = TypeKind::Unit;  // arrays
  std::uint32_t recordIndex = 0;   // records
  std::vector<Value> slots;
};

/// Session-local heap. Ids are 1-based; cells counts one per object plus one per slot.
class Heap {
 public:
  std::uint32_t allocArray(TypeKind elem, std::size_t length);
  std::uint32_t allocRecord(std::uint32_t recordIndex, std::vector<Value> fields);

  HeapObject& at(std::uint32_t id) { return objects_[id - 1]; }
  const HeapObject& at(std::uint32_t id) const { return objects_[id - 1]; }

  std::size_t cells() const { return cells_; }
  std::size_t objectCount() const { return objects_.size(); }

 private:
  std::vector<HeapObject> objects_;
  std::size_t cells_ = 0;
};

/// Globals plus the heap they (and everything else in the session) point into.
struct GlobalState {
  Heap heap;
  std::vector<Value> globals;
};

std::string describe(const Value& v);

}  // namespace holegen::lang
