#pragma once

#include <vector>

#include "holegen/interp/outcome.hpp"
#include "holegen/lang/value.hpp"

namespace holegen::interp {

/// One execution backend for a harnessed program (entry, args and globals are
/// fixed by the program the engine was built for).
class Engine {
 public:
  virtual ~Engine() = default;
  virtual Outcome initGlobals(lang::GlobalState& st) = 0;
  virtual Outcome runArgs(lang::GlobalState& st, std::vector<Value>& args) = 0;
  virtual Outcome callEntry(lang::GlobalState& st, const std::vector<Value>& args) = 0;
};

}  // namespace holegen::interp
