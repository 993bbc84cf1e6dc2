#pragma once

#include <string>
#include <vector>

#include "holegen/interp/engine.hpp"
#include "holegen/interp/oracle.hpp"
#include "holegen/interp/outcome.hpp"
#include "holegen/lang/ast.hpp"

namespace holegen::interp {

using lang::GlobalState;
using lang::Program;

/// Evaluates all global initializers in declaration order into a fresh state.
Outcome initGlobals(const Program& p, GlobalState& out, HoleOracle& oracle, const ExecLimits& limits = {});

/// Runs the program's args block and collects the yielded values.
Outcome runArgs(const Program& p, GlobalState& st, std::vector<Value>& out, HoleOracle& oracle,
                const ExecLimits& limits = {});

/// Calls `entry` (a function or `Record.method`); a receiver is args[0].
Outcome callEntry(const Program& p, GlobalState& st, const std::string& entry, const std::vector<Value>& args,
                  HoleOracle& oracle, const ExecLimits& limits = {});

/// The tree-walking interpreter as a harness backend.
class InterpEngine : public Engine {
 public:
  InterpEngine(const Program& p, HoleOracle& oracle, ExecLimits limits);

  Outcome initGlobals(GlobalState& st) override;
  Outcome runArgs(GlobalState& st, std::vector<Value>& args) override;
  Outcome callEntry(GlobalState& st, const std::vector<Value>& args) override;

 private:
  const Program& p_;
  HoleOracle& oracle_;
  ExecLimits limits_;
  std::string entry_;
};

}  // namespace holegen::interp
