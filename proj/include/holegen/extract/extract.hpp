#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holegen/corpus/corpus.hpp"
#include "holegen/lang/ast.hpp"

namespace holegen::extract {

using lang::HoleKind;
using lang::HoleSpec;
using lang::Program;

class ExtractError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Which hole kinds extraction may emit: `all`, or any union of the groups
/// `id`, `val`, `arith-shift`, `rel-logic`.
class HoleKinds {
 public:
  enum Group : unsigned { Id = 1, Val = 2, ArithShift = 4, RelLogic = 8, Everything = 16 };

  static HoleKinds all() { return HoleKinds(Everything); }
  /// Comma-separated groups; throws std::invalid_argument on unknown names.
  static HoleKinds parse(const std::string& text);

  bool allows(HoleKind k) const;
  bool isAll() const { return mask_ & Everything; }
  std::string toString() const;

  explicit HoleKinds(unsigned mask = Everything) : mask_(mask) {}
  friend bool operator==(const HoleKinds&, const HoleKinds&) = default;

 private:
  unsigned mask_;
};

enum class InputMode : std::uint8_t { TestBased, PoolBased, Embedded };

const char* modeName(InputMode m);
InputMode modeFromString(const std::string& s);

struct ExtractionRequest {
  const Program* program = nullptr;
  std::string entry;
  InputMode mode = InputMode::TestBased;
  corpus::CallSequence recordedInput;         // TestBased: its last call targets `entry`
  const corpus::ObjectPool* pool = nullptr;   // PoolBased
  HoleKinds kinds = HoleKinds::all();
  int limiterBound = 1000;
  std::uint64_t seed = 0;                     // PoolBased picks and fallback literals
  std::string name;                           // template unit name
};

struct Limiter {
  int loopSite = 0;   // pre-order index of the loop among all loops
  std::string var;
  int bound = 1000;
};

struct ArgProvider {
  enum class Kind : std::uint8_t { ArgumentsMethod, ValHole, PoolSequence, NullDefault, EmptyArray };
  Kind kind = Kind::ArgumentsMethod;
  int paramIndex = -1;  // receiver is 0 when the entry has one
  lang::Type type;
  corpus::CallSequence sequence;
};

struct Template {
  std::string name;
  Program unit;  // entry and args set; may contain Hole nodes
  std::string entry;
  std::map<int, HoleSpec> holes;
  std::vector<Limiter> limiters;
  std::vector<ArgProvider> argProviders;
  InputMode mode = InputMode::TestBased;
  HoleKinds kinds;

  Template() = default;
  Template(Template&&) noexcept = default;
  Template& operator=(Template&&) noexcept = default;
  Template clone() const;
};

/// Counts of every hole spec (nested operands included) by kind, plus limiters.
struct HoleCounts {
  std::map<HoleKind, int> byKind;
  int limiters = 0;

  int of(HoleKind k) const {
    auto it = byKind.find(k);
    return it == byKind.end() ? 0 : it->second;
  }
  int total() const;
  HoleCounts& operator+=(const HoleCounts& o);
};

/// Outcome of converting one expression: a hole spec, or nullopt for verbatim.
std::optional<HoleSpec> convert(const lang::Expr& e, const HoleKinds& kinds);

Template extract(const ExtractionRequest& req);

/// Rewrites every while/for guard that contains a hole to
/// `(guard) && _limN++ < bound`, declaring `int _limN = 0;` before the loop.
void insertLoopLimiters(Template& t, int bound);

HoleCounts countHoles(const Template& t);
/// Independent count from `.mjt` text.
HoleCounts scanHoleCounts(const std::string& mjtText);

/// Replaces every hole with its source expression, drops the limiters and re-checks.
Program fillWithSources(const Template& t);

/// Writes `<dir>/<name>.mjt` and returns the JSON-lines metadata record.
std::string writeTemplate(const Template& t, const std::filesystem::path& dir);
/// Loads a `.mjt` file back into a template (holes and limiters rediscovered).
Template loadTemplate(const std::filesystem::path& file);

std::string metadataJson(const Template& t);

}  // namespace holegen::extract
