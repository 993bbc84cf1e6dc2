#include "holegen/lang/type.hpp"

namespace holegen::lang {

namespace {
const char* kindName(TypeKind k) {
  switch (k) {
    case TypeKind::Unit: return "void";
    case TypeKind::Int: return "int";
    case TypeKind::Double: return "double";
    case TypeKind::Bool: return "bool";
    case TypeKind::Char: return "char";
    case TypeKind::Null: return "null";
    case TypeKind::Array: return "array";
    case TypeKind::Record: return "record";
  }
  return "?";
}
}  // namespace

std::string toString(const Type& t) {
  switch (t.kind) {
    case TypeKind::Array: return std::string(kindName(t.elem)) + "[]";
    case TypeKind::Record: return t.record;
    default: return kindName(t.kind);
  }
}

Type typeFromString(const std::string& s) {
  std::string base = s;
  bool array = base.size() > 2 && base.compare(base.size() - 2, 2, "[]") == 0;
  if (array) base.resize(base.size() - 2);
  Type t;
  if (base == "void") t = Type::unit();
  else if (base == "int") t = Type::intT();
  else if (base == "double") t = Type::doubleT();
  else if (base == "bool") t = Type::boolT();
  else if (base == "char") t = Type::charT();
  else if (base == "null") t = Type::nullT();
  else t = Type::recordRef(base);
  if (array) return Type::arrayOf(t.kind);
  return t;
}

bool assignable(const Type& to, const Type& from) {
  if (to == from) return true;
  return to.kind == TypeKind::Record && from.kind == TypeKind::Null;
}

}  // namespace holegen::lang
