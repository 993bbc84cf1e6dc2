#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "holegen/lang/ast.hpp"
#include "holegen/optvm/bytecode.hpp"

namespace holegen::optvm {

enum class OptLevel : std::uint8_t { L0, L1, L2 };

const char* levelName(OptLevel l);
std::optional<OptLevel> levelFromString(const std::string& s);

/// Injectable miscompilations; each only acts at L2 and only on its trigger pattern:
///  FREM_CLOBBER       a double `%` used directly as a call or `new` argument; the
///                     other double arguments are passed the remainder's register.
///  BCE_OVERAGGRESSIVE an array index expression containing an int `%`; the
///                     access is compiled without a bounds check.
///  LOOPCOND_FORCE     a loop whose first guard conjunct is loop-invariant; that
///                     conjunct is taken as true on the first iteration.
///  CHAR_WIDEN_SIGN    an explicit `(int)` cast of a char; it sign-extends.
struct FaultSet {
  bool fremClobber = false;
  bool bceOveraggressive = false;
  bool loopcondForce = false;
  bool charWidenSign = false;

  bool any() const { return fremClobber || bceOveraggressive || loopcondForce || charWidenSign; }
  std::vector<std::string> names() const;
  /// Comma-separated list of fault names ("" or "none" is the empty set).
  static FaultSet parse(const std::string& list);
  std::string toString() const;

  friend bool operator==(const FaultSet&, const FaultSet&) = default;
};

class InternalCompileError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Compiles a hole-free, type-checked program. The program must outlive the module.
BytecodeModule compile(const lang::Program& p, OptLevel level, FaultSet faults = {});

/// Definite-definition and jump-target checks; throws InternalCompileError.
void verify(const BytecodeModule& m);

// L1 passes over one function (exposed for tests).
void foldConstants(BytecodeModule& m, Function& f, const lang::Program& p);
void propagateCopies(Function& f);
void eliminateDeadCode(Function& f);
void compact(Function& f);

}  // namespace holegen::optvm
