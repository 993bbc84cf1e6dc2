#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "holegen/genharness/genharness.hpp"
#include "holegen/interp/engine.hpp"
#include "holegen/optvm/compiler.hpp"

namespace holegen::difftest {

using genharness::CrashKind;
using lang::Program;

enum class Backend : std::uint8_t { Interp, OptVM, External };

/// One column of the differential matrix. Textual form:
///   <name>=interp | <name>=vm:<level>[:<faults>] | <name>=cmd:<command line>
struct RunConfig {
  std::string name;
  Backend backend = Backend::Interp;
  optvm::OptLevel level = optvm::OptLevel::L0;
  optvm::FaultSet faults;
  std::vector<std::string> flags;
  std::string command;

  static RunConfig interp(std::string name = "interp");
  static RunConfig vm(optvm::OptLevel level, optvm::FaultSet faults = {}, std::string name = "");
  static RunConfig external(std::string name, std::string command);
  /// Throws std::invalid_argument on malformed text.
  static RunConfig parse(const std::string& text);

  std::string toString() const;
  bool isReference() const;
};

/// Parses `;`-separated config specs.
std::vector<RunConfig> parseConfigList(const std::string& text);

/// The default matrix {Interp, OptVM L0, L1, L2} and reference pair {Interp, OptVM L0}.
std::vector<RunConfig> defaultMatrix();
std::vector<RunConfig> defaultReferences();

/// A program ready to run under a harness.
struct ExecutableProgram {
  std::string name;
  std::string text;
  std::filesystem::path file;  // where external adapters read it from; written on demand
  std::string sessionLog;      // generator session record, if any

  static ExecutableProgram fromFile(const std::filesystem::path& file);
  static ExecutableProgram fromText(std::string name, std::string text);
};

struct RunResult {
  std::string config;
  genharness::HarnessResult result;

  bool isCrash() const { return result.isCrash(); }
  /// `CHECKSUM <hex>` or `CRASH <kind>`.
  std::string summary() const;
};

struct MatrixOptions {
  double timeout = 60.0;
  std::int64_t defaultLoops = 100000;
  interp::ExecLimits limits;
};

/// Builds the in-process engine for a config; throws for External configs.
std::unique_ptr<interp::Engine> makeEngine(const RunConfig& c, const Program& p, const interp::ExecLimits& limits);

RunResult runOne(const ExecutableProgram& x, const Program* parsed, const RunConfig& c, const MatrixOptions& opt);
std::vector<RunResult> runMatrix(const ExecutableProgram& x, const std::vector<RunConfig>& configs,
                                 const MatrixOptions& opt = {});

struct Verdict {
  enum class Kind : std::uint8_t { Consistent, Mismatch, CrashFailure };
  Kind kind = Kind::Consistent;
  bool mismatch = false;  // ≥2 distinct checksums
  bool crashed = false;
  std::vector<std::string> crashConfigs;
  CrashKind crashKind = CrashKind::EngineInternal;
  std::vector<RunResult> results;

  bool failed() const { return kind != Kind::Consistent; }
};

const char* verdictName(Verdict::Kind k);

Verdict compare(const std::vector<RunResult>& results);

struct PruneResult {
  enum class Kind : std::uint8_t { Bug, FalsePositive };
  enum class Reason : std::uint8_t { None, NondeterministicAcrossReruns, ReproducesUnderReference };
  Kind kind = Kind::FalsePositive;
  Reason reason = Reason::None;
  std::vector<RunResult> reruns;

  bool isBug() const { return kind == Kind::Bug; }
  std::string describe() const;
};

/// Reruns a failing program `reruns` times on each reference config.
PruneResult prune(const ExecutableProgram& x, const Verdict& v, const std::vector<RunConfig>& refs, int reruns = 3,
                  const MatrixOptions& opt = {});

/// Fault-pattern signature of the failing configs when their compiled code
/// fired an injected fault, otherwise a hash of which configs agreed.
std::string dedupKey(const ExecutableProgram& x, const Verdict& v, const std::vector<RunConfig>& configs);

struct BugReport {
  ExecutableProgram program;
  Verdict verdict;
  PruneResult pruned;
  std::string key;
  std::vector<RunConfig> configs;
};

/// One directory per bug under `dir`: program, session log, per-config
/// results, configs and verdict. Returns the bundle directories.
std::vector<std::filesystem::path> report(const std::vector<BugReport>& bugs, const std::filesystem::path& dir);

/// Re-runs a stored bundle under its stored configs; true when the stored
/// verdict kind is reproduced.
bool replayBundle(const std::filesystem::path& bundle, const MatrixOptions& opt = {});

}  // namespace holegen::difftest
