#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "holegen/lang/value.hpp"

namespace holegen::genharness {

using lang::GlobalState;
using lang::Value;

/// Tag bytes of the canonical encoding.
enum class Tag : std::uint8_t {
  Unit = 0x00,
  Int = 0x01,
  Double = 0x02,
  Bool = 0x03,
  Char = 0x04,
  Null = 0x05,
  Array = 0x06,
  Record = 0x07,
  BackRef = 0x08,
  Trap = 0x09,
};

/// FNV-1a 64 over a tag-prefixed, big-endian encoding of values.
///   Int: tag + 4 bytes; Double: tag + 8 bytes of IEEE bits (NaN canonical);
///   Bool: tag + 1 byte; Char: tag + 2 bytes; Null/Unit: tag only;
///   Array: tag + u32 length + elements; Record: tag + u32 field count + fields;
///   a reference already visited within one update: BackRef + u32 visit index;
///   Trap: tag + u32 name length + ASCII name.
class Checksum {
 public:
  static constexpr std::uint64_t kOffset = 0xcbf29ce484222325ULL;
  static constexpr std::uint64_t kPrime = 0x100000001b3ULL;
  static constexpr std::uint64_t kCanonicalNaN = 0x7ff8000000000000ULL;

  /// Hashes `v`, walking arrays and records through `st.heap`.
  void update(const Value& v, const GlobalState& st);
  /// Primitive-only update (references hash as their tag and a zero length).
  void update(const Value& v);
  void updateTrap(std::string_view name);

  std::uint64_t value() const { return h_; }
  std::string hex() const;

 private:
  void byte(std::uint8_t b) {
    h_ ^= b;
    h_ *= kPrime;
  }
  void u16(std::uint16_t v);
  void u32(std::uint32_t v);
  void u64(std::uint64_t v);
  void primitive(const Value& v);

  std::uint64_t h_ = kOffset;
};

std::string hex16(std::uint64_t v);

}  // namespace holegen::genharness
