#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "holegen/extract/extract.hpp"
#include "holegen/genharness/checksum.hpp"
#include "holegen/interp/engine.hpp"
#include "holegen/interp/outcome.hpp"

namespace holegen::genharness {

using lang::Program;

struct GenConfig {
  int programsPerTemplate = 10;
  int maxFillIterations = 100;
  double templateTimeout = 180.0;
  std::int64_t harnessLoopCount = 100000;
  std::uint64_t rngSeed = 0;
  interp::ExecLimits limits;
};

enum class SessionStatus : std::uint8_t { Complete, PartialAfterN, SkippedPreEntry, Exhausted };

const char* statusName(SessionStatus s);

struct GenSession {
  int index = 0;
  std::uint64_t seed = 0;
  std::map<int, std::string> decisions;  // hole id -> printed expression
  SessionStatus status = SessionStatus::Complete;
  int iterations = 0;
  std::string detail;  // why a session was dropped

  bool kept() const { return status == SessionStatus::Complete || status == SessionStatus::PartialAfterN; }
};

struct GeneratedProgram {
  std::string templateName;
  int index = 0;
  GenSession session;
  std::string text;  // the emitted `.mj` unit, harness directive included
};

struct GenerateResult {
  std::vector<GeneratedProgram> programs;
  std::vector<GenSession> sessions;  // every attempted session, dropped ones included
  bool timedOut = false;
};

/// Runs cfg.programsPerTemplate filling sessions over the template. A session
/// executes the entry until every hole is decided (and at least the harness
/// loop count has run, when that is within N) or N iterations have run.
GenerateResult generate(const extract::Template& t, const GenConfig& cfg);

/// Substitutes decided holes, turns undecided ones into `unfilled(id, T)`,
/// and sets the harness loop count.
Program emitProgram(const extract::Template& t, const std::map<int, lang::ExprPtr>& decisions, std::int64_t loops);

/// Session log record.
std::string sessionJson(const std::string& templateName, const GenSession& s);

/// Writes `<dir>/<k>/<name>.mj` per program and `<dir>/sessions.jsonl`.
void writeGenerated(const GenerateResult& r, const std::string& templateName, const std::filesystem::path& dir);

enum class CrashKind : std::uint8_t { UnfilledHole, EngineInternal, Limit };

const char* crashName(CrashKind k);

struct HarnessResult {
  enum class Kind : std::uint8_t { Checksum, Crash };
  Kind kind = Kind::Checksum;
  std::uint64_t checksum = 0;
  CrashKind crash = CrashKind::EngineInternal;
  std::string detail;
  double seconds = 0.0;

  bool isCrash() const { return kind == Kind::Crash; }
};

/// The checksum driver: globals, then args (each hashed), then `loops` entry
/// calls hashing each result or trap name, then every global in declaration
/// order. UnfilledHole traps and exhausted limits end the run as crashes.
HarnessResult runHarness(interp::Engine& engine, std::int64_t loops, double timeoutSeconds = 60.0);

/// The harness loop count declared by the program, or `fallback`.
std::int64_t harnessLoops(const Program& p, std::int64_t fallback = 100000);

}  // namespace holegen::genharness
