#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "holegen/cli/campaign.hpp"
#include "holegen/difftest/difftest.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/optvm/compiler.hpp"

namespace {

using namespace holegen;
using cli::CampaignConfig;

constexpr int kExitUnfilled = 10;
constexpr int kExitInternal = 11;
constexpr int kExitLimit = 12;

const char* const kConfigKeys[] = {
    "corpus",        "mode",          "hole-kinds",   "programs-per-template", "max-fill-iterations",
    "template-timeout", "harness-loops", "max-steps",  "matrix",                "references",
    "faults",        "output",        "seed",         "jobs",                  "sequence-budget",
    "templates-per-program", "limiter-bound", "test-timeout", "reruns"};

int crashExit(genharness::CrashKind k) {
  switch (k) {
    case genharness::CrashKind::UnfilledHole: return kExitUnfilled;
    case genharness::CrashKind::EngineInternal: return kExitInternal;
    case genharness::CrashKind::Limit: return kExitLimit;
  }
  return kExitInternal;
}

std::string readFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void printTest(const cli::TestSummary& s) {
  std::cout << "test: programs=" << s.programs << " consistent=" << s.consistent << " mismatch=" << s.mismatches
            << " crash=" << s.crashFailures << "\n";
}

void printPrune(const cli::PruneSummary& s) {
  std::cout << "prune: failures=" << s.failures << " bugs=" << s.bugs << " falsePositives=" << s.falsePositives
            << "\n";
  for (const auto& [k, n] : s.bugKeys) std::cout << "  bug " << k << " x" << n << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"holegen: template-based differential testing for MiniJ engines"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string configFile;
  app.add_option("--config", configFile, "campaign config file (key = value lines)");
  std::map<std::string, std::string> flags;
  for (const char* key : kConfigKeys) app.add_option(std::string("--") + key, flags[key]);

  auto* collect = app.add_subcommand("collect", "generate call sequences and object pools");
  auto* extractCmd = app.add_subcommand("extract", "extract templates from the corpus");
  auto* generateCmd = app.add_subcommand("generate", "fill templates into executable programs");
  auto* test = app.add_subcommand("test", "run programs across the matrix");
  std::string programsDir;
  test->add_option("--programs", programsDir, "test every .mj under this directory instead of generated programs");
  auto* pruneCmd = app.add_subcommand("prune", "rerun failures under reference configs and bundle bugs");
  auto* runAll = app.add_subcommand("run-all", "collect, extract, generate, test and prune");
  auto* stats = app.add_subcommand("stats", "hole statistics of a template directory");
  std::string statsDir;
  stats->add_option("dir", statsDir, "template directory (default: <output>/extract)");
  auto* showConfig = app.add_subcommand("config", "print the effective configuration");

  auto* run = app.add_subcommand("run", "run one program under the checksum harness");
  std::string runFile, engine = "interp", level = "L0";
  double runTimeout = 60.0;
  run->add_option("file", runFile)->required();
  run->add_option("--engine", engine)->check(CLI::IsMember({"interp", "vm"}));
  run->add_option("--level", level)->check(CLI::IsMember({"L0", "L1", "L2"}));
  run->add_option("--timeout", runTimeout);

  auto* disasm = app.add_subcommand("disasm", "print compiled bytecode");
  std::string disasmFile, disasmLevel = "L2";
  disasm->add_option("file", disasmFile)->required();
  disasm->add_option("--level", disasmLevel)->check(CLI::IsMember({"L0", "L1", "L2"}));

  auto* replay = app.add_subcommand("replay", "re-run a bug bundle");
  std::string bundle;
  replay->add_option("bundle", bundle)->required();

  CLI11_PARSE(app, argc, argv);

  CampaignConfig cfg;
  try {
    if (!configFile.empty()) cfg.loadFile(configFile);
    if (const char* out = std::getenv("HOLEGEN_OUT"); out && *out) cfg.outputDir = out;
    for (const char* key : kConfigKeys)
      if (app.count(std::string("--") + key) > 0) cfg.set(key, flags[key]);
  } catch (const std::exception& e) {
    std::cerr << "config: " << e.what() << "\n";
    return 2;
  }

  if (run->parsed()) {
    try {
      lang::Program p = lang::parse(readFile(runFile));
      auto c = engine == "interp" ? difftest::RunConfig::interp()
                                  : difftest::RunConfig::vm(*optvm::levelFromString(level), cfg.faults);
      interp::ExecLimits limits = cfg.gen.limits;
      limits.wallTimeout = runTimeout;
      auto eng = difftest::makeEngine(c, p, limits);
      auto r = genharness::runHarness(*eng, genharness::harnessLoops(p, cfg.gen.harnessLoopCount), runTimeout);
      if (r.isCrash()) {
        std::cout << "CRASH " << genharness::crashName(r.crash) << "\n";
        if (!r.detail.empty()) std::cerr << r.detail << "\n";
        return crashExit(r.crash);
      }
      std::cout << "CHECKSUM " << genharness::hex16(r.checksum) << "\n";
      return 0;
    } catch (const std::exception& e) {
      std::cerr << "run: " << e.what() << "\n";
      return kExitInternal;
    }
  }

  try {
    if (disasm->parsed()) {
      lang::Program p = lang::parse(readFile(disasmFile));
      auto m = optvm::compile(p, *optvm::levelFromString(disasmLevel), cfg.faults);
      std::cout << optvm::disassemble(m);
      return 0;
    }
    if (replay->parsed()) {
      difftest::MatrixOptions opt;
      opt.timeout = cfg.testTimeout;
      opt.defaultLoops = cfg.gen.harnessLoopCount;
      bool ok = difftest::replayBundle(bundle, opt);
      std::cout << "replay: " << (ok ? "reproduced" : "not reproduced") << "\n";
      return ok ? 0 : 1;
    }
    if (showConfig->parsed()) {
      std::cout << cfg.describe();
      return 0;
    }
    if (stats->parsed()) {
      auto rows = cli::cmdStats(statsDir.empty() ? cfg.outputDir / "extract" : std::filesystem::path(statsDir));
      std::cout << cli::statsTsv(rows) << "\n" << cli::statsTable(rows);
      return 0;
    }
    if (collect->parsed()) {
      auto s = cli::cmdCollect(cfg);
      std::cout << "collect: programs=" << s.programs << " sequences=" << s.sequences << " pool=" << s.poolEntries
                << "\n";
    } else if (extractCmd->parsed()) {
      auto s = cli::cmdExtract(cfg);
      std::cout << "extract: templates=" << s.templates << " errors=" << s.errors << " holes=" << s.counts.total()
                << "\n";
    } else if (generateCmd->parsed()) {
      auto s = cli::cmdGenerate(cfg);
      std::cout << "generate: templates=" << s.templates << " sessions=" << s.sessions << " programs=" << s.programs
                << " timedOut=" << s.timedOut << "\n";
    } else if (test->parsed()) {
      printTest(programsDir.empty() ? cli::cmdTest(cfg) : cli::testDirectory(cfg, programsDir));
    } else if (pruneCmd->parsed()) {
      printPrune(cli::cmdPrune(cfg));
    } else if (runAll->parsed()) {
      auto s = cli::cmdRunAll(cfg);
      std::cout << "run-all: programs=" << s.generate.programs << " failures=" << s.prune.failures
                << " bugs=" << s.prune.bugs << " (" << s.seconds << "s)\n";
      printPrune(s.prune);
    }
  } catch (const cli::PhaseError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::string phase = app.get_subcommands().empty() ? "holegen" : app.get_subcommands().front()->get_name();
    std::cerr << phase << ": " << e.what() << "\n";
    return 1;
  }
  return 0;
}
