#include "holegen/genharness/checksum.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <unordered_map>
#include <vector>

namespace holegen::genharness {

using lang::ValueTag;

std::string hex16(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string Checksum::hex() const { return hex16(h_); }

void Checksum::u16(std::uint16_t v) {
  byte(static_cast<std::uint8_t>(v >> 8));
  byte(static_cast<std::uint8_t>(v));
}

void Checksum::u32(std::uint32_t v) {
  for (int s = 24; s >= 0; s -= 8) byte(static_cast<std::uint8_t>(v >> s));
}

void Checksum::u64(std::uint64_t v) {
  for (int s = 56; s >= 0; s -= 8) byte(static_cast<std::uint8_t>(v >> s));
}

void Checksum::primitive(const Value& v) {
  switch (v.tag) {
    case ValueTag::Unit:
      byte(static_cast<std::uint8_t>(Tag::Unit));
      break;
    case ValueTag::Int:
      byte(static_cast<std::uint8_t>(Tag::Int));
      u32(static_cast<std::uint32_t>(v.i));
      break;
    case ValueTag::Double: {
      byte(static_cast<std::uint8_t>(Tag::Double));
      std::uint64_t bits;
      std::memcpy(&bits, &v.d, sizeof bits);
      if (std::isnan(v.d)) bits = kCanonicalNaN;
      u64(bits);
      break;
    }
    case ValueTag::Bool:
      byte(static_cast<std::uint8_t>(Tag::Bool));
      byte(v.b ? 1 : 0);
      break;
    case ValueTag::Char:
      byte(static_cast<std::uint8_t>(Tag::Char));
      u16(v.c);
      break;
    case ValueTag::Null:
      byte(static_cast<std::uint8_t>(Tag::Null));
      break;
    case ValueTag::Array:
      byte(static_cast<std::uint8_t>(Tag::Array));
      u32(0);
      break;
    case ValueTag::Record:
      byte(static_cast<std::uint8_t>(Tag::Record));
      u32(0);
      break;
  }
}

void Checksum::update(const Value& v) { primitive(v); }

void Checksum::update(const Value& root, const GlobalState& st) {
  std::unordered_map<std::uint32_t, std::uint32_t> visited;
  struct Frame {
    const lang::HeapObject* obj;
    std::size_t next;
  };
  std::vector<Frame> stack;
  auto visit = [&](const Value& v) {
    if (!v.isRef()) {
      primitive(v);
      return;
    }
    auto [it, fresh] = visited.emplace(v.ref, static_cast<std::uint32_t>(visited.size()));
    if (!fresh) {
      byte(static_cast<std::uint8_t>(Tag::BackRef));
      u32(it->second);
      return;
    }
    const lang::HeapObject& o = st.heap.at(v.ref);
    byte(static_cast<std::uint8_t>(o.isArray ? Tag::Array : Tag::Record));
    u32(static_cast<std::uint32_t>(o.slots.size()));
    stack.push_back({&o, 0});
  };
  visit(root);
  while (!stack.empty()) {
    Frame& f = stack.back();
    if (f.next == f.obj->slots.size()) {
      stack.pop_back();
      continue;
    }
    const Value& slot = f.obj->slots[f.next++];
    visit(slot);
  }
}

void Checksum::updateTrap(std::string_view name) {
  byte(static_cast<std::uint8_t>(Tag::Trap));
  u32(static_cast<std::uint32_t>(name.size()));
  for (char c : name) byte(static_cast<std::uint8_t>(c));
}

}  // namespace holegen::genharness
