#include <gtest/gtest.h>

#include <cstdlib>

#include "checksum_oracle.hpp"
#include "holegen/difftest/difftest.hpp"
#include "test_util.hpp"

using namespace holegen;
using namespace holegen::difftest;
using genharness::CrashKind;
using genharness::HarnessResult;

namespace {

RunResult checksum(const std::string& config, std::uint64_t cs) {
  RunResult r;
  r.config = config;
  r.result.kind = HarnessResult::Kind::Checksum;
  r.result.checksum = cs;
  return r;
}

RunResult crash(const std::string& config, CrashKind k) {
  RunResult r;
  r.config = config;
  r.result.kind = HarnessResult::Kind::Crash;
  r.result.crash = k;
  return r;
}

ExecutableProgram regression(const std::string& rel) {
  return ExecutableProgram::fromFile(testutil::corpusPath("regressions/" + rel));
}

std::vector<RunConfig> withFault(const std::string& faults) {
  return {RunConfig::interp(), RunConfig::vm(optvm::OptLevel::L0),
          RunConfig::vm(optvm::OptLevel::L2, optvm::FaultSet::parse(faults), "l2f")};
}

const std::vector<std::pair<std::string, std::string>> kRegressions{
    {"frem_clobber/frem_ctor.mj", "FREM_CLOBBER"},
    {"frem_clobber/frem_call.mj", "FREM_CLOBBER"},
    {"bce_overaggressive/bce_mod_index.mj", "BCE_OVERAGGRESSIVE"},
    {"bce_overaggressive/bce_ring.mj", "BCE_OVERAGGRESSIVE"},
    {"loopcond_force/loopcond_nested.mj", "LOOPCOND_FORCE"},
    {"loopcond_force/loopcond_while.mj", "LOOPCOND_FORCE"},
    {"char_widen_sign/char_cast.mj", "CHAR_WIDEN_SIGN"},
    {"char_widen_sign/char_bytes.mj", "CHAR_WIDEN_SIGN"}};

}  // namespace

TEST(Compare, ClassifiesResultLists) {
  EXPECT_EQ(compare({checksum("a", 7), checksum("b", 7), checksum("c", 7)}).kind, Verdict::Kind::Consistent);
  auto m = compare({checksum("a", 1), checksum("b", 2)});
  EXPECT_EQ(m.kind, Verdict::Kind::Mismatch);
  EXPECT_TRUE(m.mismatch);
  auto c = compare({checksum("a", 1), crash("b", CrashKind::EngineInternal)});
  EXPECT_EQ(c.kind, Verdict::Kind::CrashFailure);
  EXPECT_EQ(c.crashConfigs, std::vector<std::string>{"b"});
  EXPECT_EQ(c.crashKind, CrashKind::EngineInternal);
  EXPECT_EQ(compare({}).kind, Verdict::Kind::Consistent);
}

TEST(RunConfigText, ParsesAndPrints) {
  auto a = RunConfig::parse("ref=interp");
  EXPECT_EQ(a.backend, Backend::Interp);
  EXPECT_TRUE(a.isReference());
  auto b = RunConfig::parse("hot = vm:L2:FREM_CLOBBER,CHAR_WIDEN_SIGN");
  EXPECT_EQ(b.name, "hot");
  EXPECT_EQ(b.level, optvm::OptLevel::L2);
  EXPECT_TRUE(b.faults.fremClobber);
  EXPECT_TRUE(b.faults.charWidenSign);
  EXPECT_FALSE(b.isReference());
  EXPECT_EQ(RunConfig::parse(b.toString()).toString(), b.toString());
  EXPECT_TRUE(RunConfig::parse("base=vm:L0").isReference());
  EXPECT_FALSE(RunConfig::parse("o1=vm:L1").isReference());
  auto e = RunConfig::parse("ext=cmd:/bin/tool run --fast");
  EXPECT_EQ(e.backend, Backend::External);
  EXPECT_EQ(e.command, "/bin/tool run --fast");
  EXPECT_EQ(parseConfigList("a=interp; b=vm:L1;").size(), 2u);
  for (const char* bad : {"interp", "=interp", "x=vm", "x=vm:L9", "x=jvm", "x=vm:L2:NOPE", "x=interp:L0"})
    EXPECT_THROW(RunConfig::parse(bad), std::invalid_argument) << bad;
  EXPECT_EQ(defaultMatrix().size(), 4u);
  for (const auto& c : defaultReferences()) EXPECT_TRUE(c.isReference());
}

TEST(Matrix, FaultsOffAgreeEverywhere) {
  for (const auto& [rel, fault] : kRegressions) {
    auto v = compare(runMatrix(regression(rel), defaultMatrix()));
    EXPECT_EQ(v.kind, Verdict::Kind::Consistent) << rel;
  }
}

TEST(Matrix, EachRegressionFlagsItsFault) {
  for (const auto& [rel, fault] : kRegressions) {
    auto v = compare(runMatrix(regression(rel), withFault(fault)));
    EXPECT_TRUE(v.failed()) << rel;
    EXPECT_TRUE(v.results[2].isCrash() || v.results[2].result.checksum != v.results[0].result.checksum) << rel;
    EXPECT_EQ(v.results[0].summary(), v.results[1].summary()) << rel;
  }
}

TEST(Matrix, FremRegressionChecksumsMatchOracle) {
  auto results = runMatrix(regression("frem_clobber/frem_ctor.mj"), withFault("FREM_CLOBBER"));
  auto stream = [](double v) {
    oracle::Graph g;
    oracle::Encoder enc(g);
    enc.item(oracle::Item::ofDouble(1.0));
    for (int i = 0; i < 100000; ++i) enc.item(oracle::Item::ofDouble(v));
    return enc.hash();
  };
  ASSERT_FALSE(results[0].isCrash());
  ASSERT_FALSE(results[2].isCrash());
  EXPECT_EQ(results[0].result.checksum, stream(1.0));
  EXPECT_EQ(results[2].result.checksum, stream(0.0));
}

TEST(Matrix, UnfilledSiteCrashesEveryConfig) {
  auto x = ExecutableProgram::fromText("u", "fn int m() { return unfilled(3, int) + 1; }\nentry m;\nargs { yield; }\nharness 5;\n");
  auto v = compare(runMatrix(x, defaultMatrix()));
  ASSERT_EQ(v.kind, Verdict::Kind::CrashFailure);
  EXPECT_EQ(v.crashConfigs.size(), 4u);
  for (const auto& r : v.results) EXPECT_EQ(r.result.crash, CrashKind::UnfilledHole);
  auto p = prune(x, v, defaultReferences());
  EXPECT_FALSE(p.isBug());
  EXPECT_EQ(p.reason, PruneResult::Reason::ReproducesUnderReference);
  EXPECT_EQ(p.describe(), "FalsePositive(ReproducesUnderReference)");
}

TEST(Matrix, ParseErrorIsEngineInternalCrash) {
  auto x = ExecutableProgram::fromText("bad", "fn int m( {");
  for (const auto& r : runMatrix(x, defaultMatrix())) {
    ASSERT_TRUE(r.isCrash());
    EXPECT_EQ(r.result.crash, CrashKind::EngineInternal);
  }
}

TEST(Prune, DeterministicRegressionIsBug) {
  auto x = regression("bce_overaggressive/bce_mod_index.mj");
  auto v = compare(runMatrix(x, withFault("BCE_OVERAGGRESSIVE")));
  ASSERT_TRUE(v.failed());
  auto p = prune(x, v, defaultReferences(), 3);
  EXPECT_TRUE(p.isBug());
  EXPECT_EQ(p.reruns.size(), 6u);
}

TEST(Prune, NondeterministicProgramIsFalsePositive) {
  auto x = ExecutableProgram::fromFile(testutil::corpusPath("noise/n01_return.mj"));
  Verdict v;
  for (int attempt = 0; attempt < 10 && !v.failed(); ++attempt) v = compare(runMatrix(x, defaultMatrix()));
  ASSERT_TRUE(v.failed());
  auto p = prune(x, v, defaultReferences(), 3);
  EXPECT_FALSE(p.isBug());
  EXPECT_EQ(p.reason, PruneResult::Reason::NondeterministicAcrossReruns);
}

TEST(Prune, ConsistentVerdictIsNotABug) {
  auto x = regression("frem_clobber/frem_call.mj");
  auto v = compare(runMatrix(x, defaultMatrix()));
  ASSERT_FALSE(v.failed());
  EXPECT_FALSE(prune(x, v, defaultReferences()).isBug());
}

TEST(Dedup, SameInjectedFaultSharesKey) {
  auto configs = withFault("FREM_CLOBBER");
  std::set<std::string> keys;
  for (const char* rel : {"frem_clobber/frem_ctor.mj", "frem_clobber/frem_call.mj"}) {
    auto x = regression(rel);
    keys.insert(dedupKey(x, compare(runMatrix(x, configs)), configs));
  }
  ASSERT_EQ(keys.size(), 1u);
  EXPECT_EQ(*keys.begin(), "fault-FREM_CLOBBER");
}

TEST(Dedup, WithoutFaultsKeyDependsOnAgreementPattern) {
  auto x = ExecutableProgram::fromText("p", "fn int m() { return 1; }");
  auto k1 = dedupKey(x, compare({checksum("a", 1), checksum("b", 2)}), defaultMatrix());
  auto k2 = dedupKey(x, compare({checksum("a", 5), checksum("b", 9)}), defaultMatrix());
  auto k3 = dedupKey(x, compare({checksum("a", 1), crash("b", CrashKind::Limit)}), defaultMatrix());
  EXPECT_EQ(k1.rfind("sig-", 0), 0u);
  EXPECT_EQ(k1, k2);
  EXPECT_NE(k1, k3);
}

TEST(Report, EmptyBugListWritesNothing) {
  auto dir = testutil::scratchDir("report_empty");
  EXPECT_TRUE(report({}, dir / "bugs").empty());
  EXPECT_TRUE(std::filesystem::is_empty(dir / "bugs"));
}

TEST(Report, BundleReplaysItsVerdict) {
  auto dir = testutil::scratchDir("report_bundle");
  std::vector<BugReport> bugs;
  for (const auto& [rel, fault] : kRegressions) {
    BugReport b;
    b.program = regression(rel);
    b.configs = withFault(fault);
    b.verdict = compare(runMatrix(b.program, b.configs));
    b.pruned = prune(b.program, b.verdict, defaultReferences(), 1);
    b.key = dedupKey(b.program, b.verdict, b.configs);
    b.program.sessionLog = R"({"session":0})";
    bugs.push_back(b);
  }
  auto bundles = report(bugs, dir);
  ASSERT_EQ(bundles.size(), kRegressions.size());
  for (const auto& bundle : bundles) {
    for (const char* f : {"program.mj", "session.json", "results.tsv", "configs.txt", "verdict.json"})
      EXPECT_TRUE(std::filesystem::exists(bundle / f)) << bundle << " " << f;
    EXPECT_TRUE(replayBundle(bundle)) << bundle;
  }
  EXPECT_EQ(bundles[0].filename(), "fault-FREM_CLOBBER-0");
  EXPECT_EQ(bundles[1].filename(), "fault-FREM_CLOBBER-1");
}

TEST(External, CommandAdapterMatchesInterp) {
  const char* bin = std::getenv("HOLEGEN_BIN");
  if (!bin) GTEST_SKIP() << "HOLEGEN_BIN not set";
  std::string cmd = std::string(bin) + " run --engine interp";
  std::vector<RunConfig> configs{RunConfig::interp(), RunConfig::external("ext", cmd),
                                 RunConfig::external("extvm", std::string(bin) + " run --engine vm --level L2")};
  for (const auto& [rel, fault] : kRegressions) {
    auto v = compare(runMatrix(regression(rel), configs));
    EXPECT_EQ(v.kind, Verdict::Kind::Consistent) << rel;
  }
  auto unfilled = ExecutableProgram::fromText("u", "fn int m() { return unfilled(1, int); }\nentry m;\nargs { yield; }\nharness 2;\n");
  auto r = runMatrix(unfilled, configs);
  EXPECT_EQ(r[1].result.crash, CrashKind::UnfilledHole);
  auto looping = ExecutableProgram::fromText("l", "fn int m() { while (true) { } return 0; }\nentry m;\nargs { yield; }\nharness 1;\n");
  MatrixOptions opt;
  opt.timeout = 2.0;
  EXPECT_EQ(runOne(looping, nullptr, configs[1], opt).result.crash, CrashKind::Limit);
  EXPECT_EQ(runOne(ExecutableProgram::fromText("b", "fn ("), nullptr, configs[1], opt).result.crash,
            CrashKind::EngineInternal);
  auto missing = RunConfig::external("nope", "/nonexistent/tool");
  EXPECT_TRUE(runOne(regression("frem_clobber/frem_call.mj"), nullptr, missing, opt).isCrash());
}
