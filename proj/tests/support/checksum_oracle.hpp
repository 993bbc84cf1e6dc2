#pragma once

// Straight-line reference implementation of the checksum encoding, written
// from the format description only: every item is serialized to a byte
// buffer first and FNV-1a 64 runs once over the whole buffer.

#include <cmath>
#include <cstdint>
#include <cstring>
#include <map>
#include <string>
#include <vector>

namespace oracle {

struct Item {
  enum Kind { Unit, Int, Double, Bool, Char, Null, Ref, Trap };
  Kind kind = Unit;
  std::int32_t i = 0;
  double d = 0;
  bool b = false;
  std::uint16_t c = 0;
  int ref = -1;  // index into Graph::objects
  std::string name;

  static Item unit() { return {}; }
  static Item ofInt(std::int32_t v) { Item x; x.kind = Int; x.i = v; return x; }
  static Item ofDouble(double v) { Item x; x.kind = Double; x.d = v; return x; }
  static Item ofBool(bool v) { Item x; x.kind = Bool; x.b = v; return x; }
  static Item ofChar(std::uint16_t v) { Item x; x.kind = Char; x.c = v; return x; }
  static Item null() { Item x; x.kind = Null; return x; }
  static Item refTo(int obj) { Item x; x.kind = Ref; x.ref = obj; return x; }
  static Item trap(std::string n) { Item x; x.kind = Trap; x.name = std::move(n); return x; }
};

struct Object {
  bool array = false;
  std::vector<Item> slots;
};

struct Graph {
  std::vector<Object> objects;
};

class Encoder {
 public:
  explicit Encoder(const Graph& g) : g_(g) {}

  void item(const Item& v) {
    std::map<int, std::uint32_t> seen;
    walk(v, seen);
  }

  const std::vector<std::uint8_t>& bytes() const { return out_; }

  std::uint64_t hash() const {
    std::uint64_t h = 14695981039346656037ULL;
    for (std::uint8_t x : out_) {
      h = h ^ x;
      h = h * 1099511628211ULL;
    }
    return h;
  }

 private:
  void put(std::uint64_t v, int width) {
    for (int k = width - 1; k >= 0; --k) out_.push_back(static_cast<std::uint8_t>((v >> (8 * k)) & 0xff));
  }

  void walk(const Item& v, std::map<int, std::uint32_t>& seen) {
    switch (v.kind) {
      case Item::Unit: put(0, 1); return;
      case Item::Int: put(1, 1); put(static_cast<std::uint32_t>(v.i), 4); return;
      case Item::Double: {
        std::uint64_t bits;
        std::memcpy(&bits, &v.d, 8);
        if (v.d != v.d) bits = 0x7ff8000000000000ULL;
        put(2, 1);
        put(bits, 8);
        return;
      }
      case Item::Bool: put(3, 1); put(v.b ? 1 : 0, 1); return;
      case Item::Char: put(4, 1); put(v.c, 2); return;
      case Item::Null: put(5, 1); return;
      case Item::Trap:
        put(9, 1);
        put(v.name.size(), 4);
        for (char ch : v.name) put(static_cast<unsigned char>(ch), 1);
        return;
      case Item::Ref: {
        auto it = seen.find(v.ref);
        if (it != seen.end()) {
          put(8, 1);
          put(it->second, 4);
          return;
        }
        std::uint32_t index = static_cast<std::uint32_t>(seen.size());
        seen[v.ref] = index;
        const Object& o = g_.objects[v.ref];
        put(o.array ? 6 : 7, 1);
        put(o.slots.size(), 4);
        for (const auto& s : o.slots) walk(s, seen);
        return;
      }
    }
  }

  const Graph& g_;
  std::vector<std::uint8_t> out_;
};

}  // namespace oracle
