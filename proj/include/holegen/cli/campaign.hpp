#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "holegen/difftest/difftest.hpp"
#include "holegen/extract/extract.hpp"
#include "holegen/genharness/genharness.hpp"

namespace holegen::cli {

namespace fs = std::filesystem;

/// Every campaign knob. Config files hold `key = value` lines (`#` comments);
/// the keys are the CLI flag names without dashes.
struct CampaignConfig {
  fs::path corpusDir = "corpus/programs";     // corpus
  extract::InputMode mode = extract::InputMode::TestBased;  // mode = test | pool
  extract::HoleKinds holeKinds = extract::HoleKinds::all();  // hole-kinds
  genharness::GenConfig gen;                  // programs-per-template, max-fill-iterations,
                                              // template-timeout, harness-loops, max-steps
  std::vector<difftest::RunConfig> matrix = difftest::defaultMatrix();      // matrix
  std::vector<difftest::RunConfig> references = difftest::defaultReferences();  // references
  optvm::FaultSet faults;                     // faults: added to the last OptVM matrix entry
  fs::path outputDir = "holegen-out";         // output (HOLEGEN_OUT overrides)
  std::uint64_t seed = 1;                     // seed
  int jobs = 1;                               // jobs
  int sequenceBudget = 200;                   // sequence-budget
  int templatesPerProgram = 8;                // templates-per-program
  int limiterBound = 1000;                    // limiter-bound
  double testTimeout = 60.0;                  // test-timeout
  int reruns = 3;                             // reruns

  /// Applies one `key = value` setting; throws std::invalid_argument.
  void set(const std::string& key, const std::string& value);
  void loadFile(const fs::path& file);
  /// The matrix with `faults` applied.
  std::vector<difftest::RunConfig> effectiveMatrix() const;
  std::string describe() const;
};

struct PhaseError : std::runtime_error {
  PhaseError(const std::string& phase, const std::string& what) : std::runtime_error(phase + ": " + what) {}
};

struct CollectSummary {
  int programs = 0;
  int sequences = 0;
  int poolEntries = 0;
};

struct ExtractSummary {
  int templates = 0;
  int errors = 0;
  extract::HoleCounts counts;
};

struct GenerateSummary {
  int templates = 0;
  int sessions = 0;
  int programs = 0;
  std::map<genharness::SessionStatus, int> byStatus;
  int timedOut = 0;
};

struct TestOutcome {
  std::string program;  // path relative to the programs root
  difftest::Verdict verdict;
};

struct TestSummary {
  int programs = 0;
  int consistent = 0;
  int mismatches = 0;
  int crashFailures = 0;
  std::vector<TestOutcome> failures;
};

struct PruneSummary {
  int failures = 0;
  int bugs = 0;
  int falsePositives = 0;
  std::map<std::string, int> bugKeys;
};

CollectSummary cmdCollect(const CampaignConfig& cfg);
ExtractSummary cmdExtract(const CampaignConfig& cfg);
GenerateSummary cmdGenerate(const CampaignConfig& cfg);
/// Tests every generated program under outputDir/generate.
TestSummary cmdTest(const CampaignConfig& cfg);
/// Tests every `.mj` under `dir` (recursively), writing outputDir/test.
TestSummary testDirectory(const CampaignConfig& cfg, const fs::path& dir);
PruneSummary cmdPrune(const CampaignConfig& cfg);

struct RunAllSummary {
  CollectSummary collect;
  ExtractSummary extract;
  GenerateSummary generate;
  TestSummary test;
  PruneSummary prune;
  double seconds = 0;
};

RunAllSummary cmdRunAll(const CampaignConfig& cfg);

struct StatsRow {
  std::string name;
  extract::HoleCounts counts;
};

/// Per-program rows plus a final `total` row, from templates.jsonl when
/// present and otherwise from scanning the `.mjt` files.
std::vector<StatsRow> cmdStats(const fs::path& templatesDir);
std::string statsTsv(const std::vector<StatsRow>& rows);
std::string statsTable(const std::vector<StatsRow>& rows);

/// Sorted `.mj`/`.mjt` files under `dir`.
std::vector<fs::path> listFiles(const fs::path& dir, const std::string& ext, bool recursive);

}  // namespace holegen::cli
