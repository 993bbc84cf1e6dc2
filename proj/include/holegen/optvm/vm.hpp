#pragma once

#include <memory>
#include <string>
#include <vector>

#include "holegen/interp/engine.hpp"
#include "holegen/optvm/compiler.hpp"

namespace holegen::optvm {

using interp::ExecLimits;
using interp::Outcome;
using lang::GlobalState;

/// Runs the global initializers into a fresh state.
Outcome initGlobals(const BytecodeModule& m, GlobalState& out, const ExecLimits& limits = {});

/// Runs the args block and collects its yields.
Outcome runArgs(const BytecodeModule& m, GlobalState& st, std::vector<Value>& out, const ExecLimits& limits = {});

/// Calls function `fn` (a receiver is args[0]) with the same step, depth and
/// heap accounting as the interpreter.
Outcome run(const BytecodeModule& m, GlobalState& st, int fn, const std::vector<Value>& args,
            const ExecLimits& limits = {});

/// A compiled program as a harness backend.
class VmEngine : public interp::Engine {
 public:
  VmEngine(const lang::Program& p, OptLevel level, FaultSet faults, ExecLimits limits);

  Outcome initGlobals(GlobalState& st) override;
  Outcome runArgs(GlobalState& st, std::vector<Value>& args) override;
  Outcome callEntry(GlobalState& st, const std::vector<Value>& args) override;

  const BytecodeModule& module() const { return module_; }

 private:
  BytecodeModule module_;
  ExecLimits limits_;
};

}  // namespace holegen::optvm
