#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "holegen/lang/ast.hpp"

namespace holegen::corpus {

using lang::Program;
using lang::Type;
using lang::Value;
using Rng = std::mt19937_64;

struct SeqArg {
  enum class Kind : std::uint8_t { Literal, Binding, Null };
  Kind kind = Kind::Literal;
  Value literal;
  int step = -1;  // Binding: index of the producing step

  static SeqArg lit(Value v) { return {Kind::Literal, v, -1}; }
  static SeqArg binding(int step) { return {Kind::Binding, Value(), step}; }
  static SeqArg null() { return {Kind::Null, Value::null(), -1}; }
};

struct Step {
  enum class Kind : std::uint8_t { Call, NewRecord, NewArray };
  Kind kind = Kind::Call;
  std::string callee;  // qualified function name, record name, or element type name
  std::vector<SeqArg> args;  // Call on a method: args[0] is the receiver
  Type type;                 // result type; Unit for void calls
};

/// A straight-line sequence of calls and constructions. Step k binds `v<k>`
/// unless its type is void.
struct CallSequence {
  std::vector<Step> steps;
  int result = -1;  // step whose binding is the sequence's value
  Type resultType;

  /// MiniJ statements declaring every binding, names prefixed by `prefix`.
  /// `upTo` limits the rendered steps (exclusive); -1 renders all.
  std::string render(const std::string& prefix = "", int upTo = -1, int indent = 1) const;
  /// The argument expression for `a` under `prefix`.
  static std::string argText(const SeqArg& a, const std::string& prefix);
  static std::string bindName(int step, const std::string& prefix) { return prefix + "v" + std::to_string(step); }

  /// Steps [0, k] with step k as the result.
  CallSequence prefixTo(int k) const;
};

bool operator==(const CallSequence& a, const CallSequence& b);

/// Feedback-free random generation of `budget` candidate sequences; those that
/// trap or exceed the step cap when replayed from fresh globals are dropped.
std::vector<CallSequence> generateSequences(const Program& p, int budget, std::uint64_t seed);

/// Replays the sequence under the interpreter from fresh globals.
bool replaysCleanly(const Program& p, const CallSequence& seq, std::uint64_t maxSteps = 1000);

struct EntryInput {
  std::string entry;
  CallSequence input;  // the full sequence; its last step calls `entry`
};

std::vector<EntryInput> toEntries(const std::vector<CallSequence>& seqs);

/// Reference-typed prefixes keyed by type name.
struct ObjectPool {
  std::map<std::string, std::vector<CallSequence>> byType;
};

ObjectPool buildPool(const std::vector<CallSequence>& seqs);
std::optional<CallSequence> pickFromPool(const Type& t, const ObjectPool& pool, Rng& rng);

std::string toJson(const CallSequence& s);
CallSequence sequenceFromJson(const std::string& line);

void saveSequences(const std::filesystem::path& path, const std::vector<CallSequence>& seqs);
std::vector<CallSequence> loadSequences(const std::filesystem::path& path);
void savePool(const std::filesystem::path& path, const ObjectPool& pool);
ObjectPool loadPool(const std::filesystem::path& path);

}  // namespace holegen::corpus
