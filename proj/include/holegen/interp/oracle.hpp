#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include "holegen/lang/ast.hpp"

namespace holegen::interp {

using Rng = std::mt19937_64;

/// Decides what a hole evaluates to.
///  Filling: the first evaluation of a hole picks a random member of its space
///           and every later evaluation reuses that expression.
///  Replay:  uses a fixed decision map; undecided holes trap.
///  Trapping: every hole traps with UnfilledHole.
class HoleOracle {
 public:
  enum class Mode : std::uint8_t { Filling, Replay, Trapping };

  static HoleOracle filling(std::uint64_t seed);
  static HoleOracle replay(std::map<int, lang::ExprPtr> decisions);
  static HoleOracle trapping();

  Mode mode() const { return mode_; }

  /// The decided expression for `id`, or nullptr.
  const lang::Expr* decision(int id) const;

  /// Filling mode: decides hole `hole` (an annotated Hole node) if undecided.
  const lang::Expr& decide(const lang::Expr& hole);

  const std::map<int, lang::ExprPtr>& decisions() const { return decisions_; }
  /// Hole ids in the order they were first decided.
  const std::vector<int>& order() const { return order_; }

  Rng& rng() { return rng_; }

 private:
  Mode mode_ = Mode::Trapping;
  std::map<int, lang::ExprPtr> decisions_;
  std::vector<int> order_;
  Rng rng_;
};

/// Draws one member of the hole's search space. The result carries the type
/// and binding annotations the evaluators need.
lang::ExprPtr fillHole(const lang::HoleSpec& spec, const lang::HoleSite& site, Rng& rng);

/// Random primitive values as Val holes draw them.
lang::Value randomValue(const lang::Type& t, Rng& rng);

/// True when `e` is a member of the space described by `spec` at `site`.
bool inSpace(const lang::Expr& e, const lang::HoleSpec& spec, const lang::HoleSite& site);

}  // namespace holegen::interp
