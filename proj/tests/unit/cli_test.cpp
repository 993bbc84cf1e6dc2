#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <map>
#include <regex>

#include "holegen/cli/campaign.hpp"
#include "test_util.hpp"

using namespace holegen;
using namespace holegen::cli;
using lang::HoleKind;

namespace {

struct Invocation {
  int exit = -1;
  std::string out;
};

Invocation invoke(const std::string& args, const std::string& env = "") {
  const char* bin = std::getenv("HOLEGEN_BIN");
  Invocation r;
  if (!bin) return r;
  std::string cmd = env + " " + bin + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  std::array<char, 4096> buf{};
  std::size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  int status = pclose(pipe);
  r.exit = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string writeProgram(const std::string& name, const std::string& text) {
  auto path = testutil::scratchDir("cli_prog_" + name) / (name + ".mj");
  std::ofstream(path) << text;
  return path.string();
}

CampaignConfig smallCampaign(const std::string& out) {
  CampaignConfig cfg;
  cfg.corpusDir = testutil::corpusPath("programs");
  cfg.outputDir = testutil::scratchDir(out);
  cfg.set("programs-per-template", "3");
  cfg.set("harness-loops", "50");
  cfg.set("max-steps", "200000");
  cfg.set("sequence-budget", "60");
  cfg.set("templates-per-program", "2");
  cfg.set("jobs", "4");
  return cfg;
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root))
    if (e.is_regular_file()) files[fs::relative(e.path(), root).string()] = testutil::readFile(e.path());
  return files;
}

/// Per-kind marker counts straight from the `.mjt` text, grouped by source
/// program. Operand specs nested inside a marker count as holes; Fixed operands do not.
std::map<std::string, std::map<std::string, int>> scanTemplates(const fs::path& dir) {
  std::regex kindRe(R"(\{kind=([A-Za-z]+))");
  std::regex limRe(R"(_lim\d+\+\+ < )");
  std::map<std::string, std::map<std::string, int>> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() != ".mjt") continue;
    std::string stem = e.path().stem().string();
    std::string program = stem.substr(0, stem.find("__"));
    std::string text = testutil::readFile(e.path());
    auto& row = out[program];
    for (auto it = std::sregex_iterator(text.begin(), text.end(), kindRe); it != std::sregex_iterator(); ++it)
      if ((*it)[1] != "Fixed") ++row[(*it)[1]];
    row["Limiters"] += static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), limRe),
                                                       std::sregex_iterator()));
  }
  return out;
}

const std::vector<HoleKind> kKinds{HoleKind::Id,    HoleKind::Val,      HoleKind::ArrAcc, HoleKind::Arith,
                                   HoleKind::Shift, HoleKind::Relation, HoleKind::Logic,  HoleKind::Cast};

}  // namespace

TEST(Config, FileAndSetters) {
  auto dir = testutil::scratchDir("cli_config");
  std::ofstream(dir / "c.conf") << "# campaign\n"
                                   "seed = 77\n"
                                   "mode = pool\n"
                                   "hole-kinds = id,val   # trailing comment\n"
                                   "\n"
                                   "matrix = a=interp; b=vm:L1\n"
                                   "faults = FREM_CLOBBER\n";
  CampaignConfig cfg;
  cfg.loadFile(dir / "c.conf");
  EXPECT_EQ(cfg.seed, 77u);
  EXPECT_EQ(cfg.mode, extract::InputMode::PoolBased);
  EXPECT_TRUE(cfg.holeKinds.allows(HoleKind::Id));
  EXPECT_FALSE(cfg.holeKinds.allows(HoleKind::Arith));
  auto m = cfg.effectiveMatrix();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_TRUE(m[1].faults.fremClobber);
  EXPECT_EQ(m[1].level, optvm::OptLevel::L1);
  EXPECT_NE(cfg.describe().find("seed = 77"), std::string::npos);

  CampaignConfig back;
  std::ofstream(dir / "d.conf") << cfg.describe();
  back.loadFile(dir / "d.conf");
  EXPECT_EQ(back.describe(), cfg.describe());

  EXPECT_THROW(cfg.set("bogus", "1"), std::invalid_argument);
  EXPECT_THROW(cfg.set("seed", "abc"), std::invalid_argument);
  EXPECT_THROW(cfg.set("mode", "fuzzy"), std::invalid_argument);
  EXPECT_THROW(cfg.set("faults", "NOPE"), std::invalid_argument);
  EXPECT_THROW(cfg.loadFile(dir / "missing.conf"), std::exception);
}

TEST(Config, FaultsWithoutOptVmEntryAppendL2) {
  CampaignConfig cfg;
  cfg.set("matrix", "only=interp");
  cfg.set("faults", "BCE_OVERAGGRESSIVE");
  auto m = cfg.effectiveMatrix();
  ASSERT_EQ(m.size(), 2u);
  EXPECT_EQ(m[1].backend, difftest::Backend::OptVM);
  EXPECT_EQ(m[1].level, optvm::OptLevel::L2);
  EXPECT_TRUE(m[1].faults.bceOveraggressive);
  CampaignConfig plain;
  EXPECT_EQ(plain.effectiveMatrix().size(), 4u);
  for (const auto& c : plain.effectiveMatrix()) EXPECT_FALSE(c.faults.any());
}

TEST(Stats, EmptyDirectoryGivesZeroTotalRow) {
  auto rows = cmdStats(testutil::scratchDir("stats_empty"));
  ASSERT_EQ(rows.size(), 1u);
  EXPECT_EQ(rows[0].name, "total");
  EXPECT_EQ(rows[0].counts.total(), 0);
  EXPECT_EQ(statsTsv(rows),
            "program\tId\tVal\tArrAcc\tArith\tShift\tRelation\tLogic\tCast\tLimiters\tTotal\n"
            "total\t0\t0\t0\t0\t0\t0\t0\t0\t0\t0\n");
}

class CorpusStats : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    cfg_ = new CampaignConfig;
    cfg_->corpusDir = testutil::corpusPath("programs");
    cfg_->outputDir = testutil::scratchDir("stats_corpus");
    cmdCollect(*cfg_);
    cmdExtract(*cfg_);
  }
  static void TearDownTestSuite() { delete cfg_; }
  static CampaignConfig* cfg_;
};
CampaignConfig* CorpusStats::cfg_ = nullptr;

TEST_F(CorpusStats, MatchesCheckedInSnapshot) {
  auto rows = cmdStats(cfg_->outputDir / "extract");
  EXPECT_EQ(statsTsv(rows), testutil::readFile(testutil::corpusPath("stats.golden.tsv")));
}

TEST_F(CorpusStats, AgreesWithIndependentScan) {
  auto rows = cmdStats(cfg_->outputDir / "extract");
  auto scan = scanTemplates(cfg_->outputDir / "extract");
  ASSERT_EQ(rows.size(), scan.size() + 1);
  std::map<std::string, int> totals;
  for (const auto& row : rows) {
    if (row.name == "total") continue;
    const auto& s = scan.at(row.name);
    for (const auto& [kind, n] : s)
      EXPECT_TRUE(kind == "Limiters" || lang::holeKindFromString(kind)) << kind;
    for (auto k : kKinds) {
      int want = s.count(lang::spelling(k)) ? s.at(lang::spelling(k)) : 0;
      EXPECT_EQ(row.counts.of(k), want) << row.name << " " << lang::spelling(k);
      totals[lang::spelling(k)] += want;
    }
    EXPECT_EQ(row.counts.limiters, s.count("Limiters") ? s.at("Limiters") : 0) << row.name;
    totals["Limiters"] += row.counts.limiters;
  }
  const auto& total = rows.back();
  for (auto k : kKinds) EXPECT_EQ(total.counts.of(k), totals[lang::spelling(k)]);
  EXPECT_EQ(total.counts.limiters, totals["Limiters"]);
}

TEST_F(CorpusStats, AccountingIdentity) {
  for (const auto& row : cmdStats(cfg_->outputDir / "extract")) {
    int sum = row.counts.limiters;
    for (const auto& [k, n] : row.counts.byKind) sum += n;
    EXPECT_EQ(sum, row.counts.total()) << row.name;
  }
  std::istringstream tsv(statsTsv(cmdStats(cfg_->outputDir / "extract")));
  std::string line;
  std::getline(tsv, line);
  while (std::getline(tsv, line)) {
    std::istringstream fields(line);
    std::string name, cell;
    fields >> name;
    std::vector<int> cols;
    while (fields >> cell) cols.push_back(std::stoi(cell));
    ASSERT_EQ(cols.size(), 10u);
    int sum = 0;
    for (int i = 0; i < 9; ++i) sum += cols[i];
    EXPECT_EQ(sum, cols[9]) << name;
  }
}

TEST_F(CorpusStats, TableAlignsTheSameNumbers) {
  auto rows = cmdStats(cfg_->outputDir / "extract");
  std::string table = statsTable(rows);
  std::istringstream in(table);
  std::string line;
  std::size_t width = 0;
  int lines = 0;
  while (std::getline(in, line)) {
    if (width == 0) width = line.size();
    EXPECT_EQ(line.size(), width);
    ++lines;
  }
  EXPECT_EQ(lines, static_cast<int>(rows.size()) + 1);
}

TEST(Campaign, ValOnlyExtractionShowsOnlyValHoles) {
  CampaignConfig cfg;
  cfg.corpusDir = testutil::corpusPath("programs");
  cfg.outputDir = testutil::scratchDir("campaign_val");
  cfg.set("hole-kinds", "val");
  cmdCollect(cfg);
  cmdExtract(cfg);
  auto rows = cmdStats(cfg.outputDir / "extract");
  const auto& total = rows.back();
  EXPECT_GT(total.counts.of(HoleKind::Val), 0);
  EXPECT_EQ(total.counts.of(HoleKind::Val) + total.counts.limiters, total.counts.total());
}

TEST(Campaign, PhasesNeedTheirInputs) {
  auto fresh = [](const std::string& name) {
    CampaignConfig cfg;
    cfg.outputDir = testutil::scratchDir(name);
    cfg.corpusDir = cfg.outputDir / "nowhere";
    return cfg;
  };
  EXPECT_THROW(cmdCollect(fresh("phase_collect")), PhaseError);
  EXPECT_THROW(cmdExtract(fresh("phase_extract")), PhaseError);
  EXPECT_THROW(cmdGenerate(fresh("phase_generate")), PhaseError);
  EXPECT_THROW(cmdTest(fresh("phase_test")), PhaseError);
  EXPECT_THROW(cmdPrune(fresh("phase_prune")), PhaseError);
}

TEST(Campaign, SmallRunAllFaultsOffHasNoBugs) {
  auto cfg = smallCampaign("campaign_clean");
  auto s = cmdRunAll(cfg);
  EXPECT_GT(s.generate.programs, 50);
  EXPECT_EQ(s.test.programs, s.generate.programs);
  EXPECT_EQ(s.test.mismatches, 0);
  EXPECT_EQ(s.test.crashFailures, 0);
  EXPECT_EQ(s.prune.bugs, 0);
  for (const char* f : {"config.txt", "summary.txt", "stats.tsv", "test/results.jsonl", "prune/verdicts.jsonl",
                        "extract/templates.jsonl"})
    EXPECT_TRUE(fs::exists(cfg.outputDir / f)) << f;
  int sessionLogs = 0;
  for (const auto& e : fs::directory_iterator(cfg.outputDir / "generate"))
    sessionLogs += fs::exists(e.path() / "sessions.jsonl");
  EXPECT_EQ(sessionLogs, s.generate.templates);
}

TEST(Campaign, RunAllIsByteIdenticalAcrossRuns) {
  auto cfg = smallCampaign("campaign_det");
  cfg.set("faults", "FREM_CLOBBER,BCE_OVERAGGRESSIVE");
  cmdRunAll(cfg);
  auto first = snapshot(cfg.outputDir);
  cfg.set("jobs", "1");
  cmdRunAll(cfg);
  auto second = snapshot(cfg.outputDir);
  ASSERT_EQ(first.size(), second.size());
  int compared = 0;
  for (const auto& [rel, text] : first) {
    ASSERT_TRUE(second.count(rel)) << rel;
    if (rel == "summary.txt" || rel == "config.txt") continue;
    EXPECT_EQ(text, second.at(rel)) << rel;
    ++compared;
  }
  EXPECT_GT(compared, 50);
}

TEST(Campaign, FremFaultYieldsBugBundle) {
  auto cfg = smallCampaign("campaign_frem");
  cfg.corpusDir = testutil::corpusPath("regressions/frem_clobber");
  cfg.set("hole-kinds", "val");
  cfg.set("programs-per-template", "50");
  cfg.set("faults", "FREM_CLOBBER");
  auto s = cmdRunAll(cfg);
  EXPECT_GE(s.prune.bugs, 1);
  EXPECT_GE(s.prune.bugKeys["fault-FREM_CLOBBER"], 1);
  EXPECT_TRUE(fs::exists(cfg.outputDir / "bugs" / "fault-FREM_CLOBBER-0" / "program.mj"));
}

TEST(Binary, RunReportsChecksumsAndExitCodes) {
  if (!std::getenv("HOLEGEN_BIN")) GTEST_SKIP() << "HOLEGEN_BIN not set";
  auto ok = invoke("run " + testutil::corpusPath("regressions/frem_clobber/frem_call.mj").string());
  EXPECT_EQ(ok.exit, 0);
  EXPECT_TRUE(std::regex_search(ok.out, std::regex("^CHECKSUM [0-9a-f]{16}\n"))) << ok.out;
  auto vm = invoke("run --engine vm --level L2 " + testutil::corpusPath("regressions/frem_clobber/frem_call.mj").string());
  EXPECT_EQ(vm.out, ok.out);
  auto faulty = invoke("--faults FREM_CLOBBER run --engine vm --level L2 " +
                       testutil::corpusPath("regressions/frem_clobber/frem_call.mj").string());
  EXPECT_EQ(faulty.exit, 0);
  EXPECT_NE(faulty.out, ok.out);

  auto unfilled = invoke("run " + writeProgram("u", "fn int m() { return unfilled(2, int); }\nentry m;\nargs { yield; }\n"));
  EXPECT_EQ(unfilled.exit, 10);
  EXPECT_NE(unfilled.out.find("CRASH UnfilledHole"), std::string::npos);
  auto looping = invoke("--max-steps 10000 run " +
                        writeProgram("l", "fn int m() { while (true) { } return 0; }\nentry m;\nargs { yield; }\n"));
  EXPECT_EQ(looping.exit, 12);
  EXPECT_EQ(invoke("run " + writeProgram("b", "fn int m( {")).exit, 11);
}

TEST(Binary, ConfigPrecedenceAndErrors) {
  if (!std::getenv("HOLEGEN_BIN")) GTEST_SKIP() << "HOLEGEN_BIN not set";
  auto dir = testutil::scratchDir("cli_binary");
  std::ofstream(dir / "c.conf") << "output = " << (dir / "from-file").string() << "\nseed = 9\n";
  auto fromFile = invoke("--config " + (dir / "c.conf").string() + " config");
  EXPECT_NE(fromFile.out.find("output = " + (dir / "from-file").string()), std::string::npos);
  EXPECT_NE(fromFile.out.find("seed = 9"), std::string::npos);
  std::string conf = "--config " + (dir / "c.conf").string() + " ";
  auto env = invoke(conf + "config", "HOLEGEN_OUT=" + (dir / "from-env").string());
  EXPECT_NE(env.out.find("output = " + (dir / "from-env").string()), std::string::npos);
  auto flag = invoke(conf + "--output " + (dir / "from-flag").string() + " config",
                     "HOLEGEN_OUT=" + (dir / "from-env").string());
  EXPECT_NE(flag.out.find("output = " + (dir / "from-flag").string()), std::string::npos);

  EXPECT_EQ(invoke("--seed banana config").exit, 2);
  auto missing = invoke("--output " + (dir / "empty").string() + " prune");
  EXPECT_EQ(missing.exit, 1);
  EXPECT_EQ(missing.out.rfind("prune: ", 0), 0u) << missing.out;
  auto stats = invoke("stats " + (dir / "none").string());
  EXPECT_EQ(stats.exit, 0);
  EXPECT_NE(stats.out.find("total\t0\t0"), std::string::npos);
}
