#pragma once

#include <cstdint>
#include <string>

namespace holegen::lang {

enum class TypeKind : std::uint8_t { Unit, Int, Double, Bool, Char, Array, Record, Null };

/// A MiniJ static type. Arrays hold primitive elements only (int, double, char).
/// `Null` is the type of the `null` literal and is assignable to any record type.
struct Type {
  TypeKind kind = TypeKind::Unit;
  TypeKind elem = TypeKind::Unit;  // element kind when kind == Array
  std::string record;              // record name when kind == Record

  static Type unit() { return {TypeKind::Unit, TypeKind::Unit, {}}; }
  static Type intT() { return {TypeKind::Int, TypeKind::Unit, {}}; }
  static Type doubleT() { return {TypeKind::Double, TypeKind::Unit, {}}; }
  static Type boolT() { return {TypeKind::Bool, TypeKind::Unit, {}}; }
  static Type charT() { return {TypeKind::Char, TypeKind::Unit, {}}; }
  static Type nullT() { return {TypeKind::Null, TypeKind::Unit, {}}; }
  static Type arrayOf(TypeKind e) { return {TypeKind::Array, e, {}}; }
  static Type recordRef(std::string name) { return {TypeKind::Record, TypeKind::Unit, std::move(name)}; }

  bool isPrimitive() const {
    return kind == TypeKind::Int || kind == TypeKind::Double || kind == TypeKind::Bool ||
           kind == TypeKind::Char;
  }
  bool isReference() const { return kind == TypeKind::Array || kind == TypeKind::Record; }
  bool isNumeric() const { return kind == TypeKind::Int || kind == TypeKind::Double; }
  bool isArray() const { return kind == TypeKind::Array; }
  bool isRecord() const { return kind == TypeKind::Record; }
  Type elementType() const { return {elem, TypeKind::Unit, {}}; }

  friend bool operator==(const Type&, const Type&) = default;
};

std::string toString(const Type& t);

/// Inverse of toString; any unknown identifier names a record.
Type typeFromString(const std::string& s);

/// True when a value of type `from` may be stored where `to` is expected.
bool assignable(const Type& to, const Type& from);

}  // namespace holegen::lang
