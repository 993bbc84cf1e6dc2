#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "checksum_oracle.hpp"
#include "holegen/extract/extract.hpp"
#include "holegen/genharness/checksum.hpp"
#include "holegen/genharness/genharness.hpp"
#include "holegen/interp/interp.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"
#include "test_util.hpp"

using namespace holegen;
using namespace holegen::genharness;
using lang::Value;

namespace {

HarnessResult harness(const lang::Program& p, std::int64_t loops) {
  auto oracle = interp::HoleOracle::trapping();
  interp::InterpEngine e(p, oracle, {});
  return runHarness(e, loops);
}

extract::Template embedded(const lang::Program& p, const std::string& kinds = "all", const std::string& name = "t") {
  extract::ExtractionRequest r;
  r.program = &p;
  r.entry = *p.entry;
  r.mode = extract::InputMode::Embedded;
  r.kinds = extract::HoleKinds::parse(kinds);
  r.name = name;
  return extract::extract(r);
}

GenConfig smallConfig(int programs = 5) {
  GenConfig c;
  c.programsPerTemplate = programs;
  c.harnessLoopCount = 10;
  c.rngSeed = 42;
  return c;
}

}  // namespace

TEST(Checksum, ConstantEntryMatchesOracleStream) {
  auto p = lang::parse("fn int f() { return 5; }\nentry f;\nargs { yield; }\n");
  auto r = harness(p, 3);
  ASSERT_FALSE(r.isCrash()) << r.detail;
  oracle::Graph g;
  oracle::Encoder enc(g);
  for (int i = 0; i < 3; ++i) enc.item(oracle::Item::ofInt(5));
  EXPECT_EQ(r.checksum, enc.hash());
}

TEST(Checksum, TrappingEntryHashesTrapNames) {
  auto p = lang::parse("fn int f() { int z = 0; return 1 / z; }\nentry f;\nargs { yield; }\n");
  auto r = harness(p, 4);
  ASSERT_FALSE(r.isCrash());
  oracle::Graph g;
  oracle::Encoder enc(g);
  for (int i = 0; i < 4; ++i) enc.item(oracle::Item::trap("DivByZero"));
  EXPECT_EQ(r.checksum, enc.hash());
}

TEST(Checksum, ArgsResultsAndGlobalsInOrder) {
  auto p = lang::parse(
      "global int g = 1;\n"
      "global double h = 0.5;\n"
      "fn bool f(int x, char c) { g = g + x; return c == 'a'; }\n"
      "entry f;\nargs { yield 3, 'a'; }\n");
  auto r = harness(p, 2);
  ASSERT_FALSE(r.isCrash());
  oracle::Graph g;
  oracle::Encoder enc(g);
  enc.item(oracle::Item::ofInt(3));
  enc.item(oracle::Item::ofChar('a'));
  enc.item(oracle::Item::ofBool(true));
  enc.item(oracle::Item::ofBool(true));
  enc.item(oracle::Item::ofInt(7));
  enc.item(oracle::Item::ofDouble(0.5));
  EXPECT_EQ(r.checksum, enc.hash());
}

TEST(Checksum, UpdateIsLengthSensitive) {
  Checksum once, twice;
  once.update(Value::ofInt(0));
  twice.update(Value::ofInt(0));
  twice.update(Value::ofInt(0));
  EXPECT_NE(once.value(), twice.value());
}

TEST(Checksum, NaNsCanonicalizeAndSignedZeroStaysDistinct) {
  volatile double zero = 0.0;
  volatile double inf = std::numeric_limits<double>::infinity();
  Checksum a, b, pz, nz;
  a.update(Value::ofDouble(zero / zero));
  b.update(Value::ofDouble(inf - inf));
  EXPECT_EQ(a.value(), b.value());
  pz.update(Value::ofDouble(0.0));
  nz.update(Value::ofDouble(-0.0));
  EXPECT_NE(pz.value(), nz.value());
}

TEST(Checksum, TwoNodeCycleHashesStably) {
  lang::GlobalState st;
  auto a = st.heap.allocRecord(0, {Value::ofInt(1), Value::null()});
  auto b = st.heap.allocRecord(0, {Value::ofInt(2), Value::null()});
  st.heap.at(a).slots[1] = Value::record(b);
  st.heap.at(b).slots[1] = Value::record(a);

  Checksum first, second;
  first.update(Value::record(a), st);
  second.update(Value::record(a), st);
  EXPECT_EQ(first.value(), second.value());

  oracle::Graph g;
  g.objects.push_back({false, {oracle::Item::ofInt(1), oracle::Item::refTo(1)}});
  g.objects.push_back({false, {oracle::Item::ofInt(2), oracle::Item::refTo(0)}});
  oracle::Encoder enc(g);
  enc.item(oracle::Item::refTo(0));
  EXPECT_EQ(first.value(), enc.hash());
}

TEST(Checksum, SharedArrayIsBackReferenced) {
  lang::GlobalState st;
  auto arr = st.heap.allocArray(lang::TypeKind::Int, 2);
  auto rec = st.heap.allocRecord(0, {Value::array(arr), Value::array(arr)});
  Checksum c;
  c.update(Value::record(rec), st);

  oracle::Graph g;
  g.objects.push_back({false, {oracle::Item::refTo(1), oracle::Item::refTo(1)}});
  g.objects.push_back({true, {oracle::Item::ofInt(0), oracle::Item::ofInt(0)}});
  oracle::Encoder enc(g);
  enc.item(oracle::Item::refTo(0));
  EXPECT_EQ(c.value(), enc.hash());
}

TEST(Checksum, RandomPrimitiveStreamsMatchOracle) {
  std::mt19937_64 rng(7);
  for (int stream = 0; stream < 20; ++stream) {
    Checksum c;
    oracle::Graph g;
    oracle::Encoder enc(g);
    int n = static_cast<int>(rng() % 30);
    for (int i = 0; i < n; ++i) {
      switch (rng() % 6) {
        case 0: {
          auto v = static_cast<std::int32_t>(rng());
          c.update(Value::ofInt(v));
          enc.item(oracle::Item::ofInt(v));
          break;
        }
        case 1: {
          double d;
          std::uint64_t bits = rng();
          std::memcpy(&d, &bits, 8);
          c.update(Value::ofDouble(d));
          enc.item(oracle::Item::ofDouble(d));
          break;
        }
        case 2: {
          bool b = rng() & 1;
          c.update(Value::ofBool(b));
          enc.item(oracle::Item::ofBool(b));
          break;
        }
        case 3: {
          auto ch = static_cast<std::uint16_t>(rng());
          c.update(Value::ofChar(ch));
          enc.item(oracle::Item::ofChar(ch));
          break;
        }
        case 4:
          c.update(Value::null());
          enc.item(oracle::Item::null());
          break;
        default:
          c.updateTrap("IndexOutOfBounds");
          enc.item(oracle::Item::trap("IndexOutOfBounds"));
          break;
      }
    }
    EXPECT_EQ(c.value(), enc.hash()) << "stream " << stream;
  }
}

TEST(Harness, UnfilledSiteCrashes) {
  auto p = lang::parse("fn int f(int x) { return unfilled(3, int) + x; }\nentry f;\nargs { yield 1; }\n");
  auto r = harness(p, 5);
  ASSERT_TRUE(r.isCrash());
  EXPECT_EQ(r.crash, CrashKind::UnfilledHole);
}

TEST(Harness, ExhaustionIsALimitCrash) {
  auto p = lang::parse("fn void f() { while (true) { } }\nentry f;\nargs { yield; }\n");
  auto oracle = interp::HoleOracle::trapping();
  interp::ExecLimits limits;
  limits.maxSteps = 1000;
  interp::InterpEngine e(p, oracle, limits);
  auto r = runHarness(e, 3);
  ASSERT_TRUE(r.isCrash());
  EXPECT_EQ(r.crash, CrashKind::Limit);
}

TEST(Generate, DeterministicUnderSeed) {
  auto p = lang::parse(testutil::readFile(testutil::corpusPath("regressions/frem_clobber/frem_call.mj")));
  auto t = embedded(p);
  auto a = generate(t, smallConfig());
  auto b = generate(t, smallConfig());
  ASSERT_EQ(a.programs.size(), b.programs.size());
  ASSERT_FALSE(a.programs.empty());
  for (std::size_t i = 0; i < a.programs.size(); ++i) {
    EXPECT_EQ(a.programs[i].text, b.programs[i].text);
    EXPECT_EQ(sessionJson(t.name, a.programs[i].session), sessionJson(t.name, b.programs[i].session));
  }
  auto other = smallConfig();
  other.rngSeed = 43;
  auto c = generate(t, other);
  bool differs = c.programs.size() != a.programs.size();
  for (std::size_t i = 0; !differs && i < a.programs.size(); ++i) differs = a.programs[i].text != c.programs[i].text;
  EXPECT_TRUE(differs);
}

TEST(Generate, DeadCodeHoleStaysUnfilled) {
  auto p = lang::parse(
      "fn int f(int x) { if (false) { return x + 1; } return x; }\nentry f;\nargs { yield 4; }\n");
  auto t = embedded(p, "arith-shift");
  ASSERT_EQ(t.holes.size(), 1u);
  auto r = generate(t, smallConfig(2));
  ASSERT_EQ(r.programs.size(), 2u);
  for (const auto& g : r.programs) {
    EXPECT_EQ(g.session.status, SessionStatus::PartialAfterN);
    EXPECT_NE(g.text.find("unfilled(1, int)"), std::string::npos) << g.text;
    auto emitted = lang::parse(g.text);
    auto h = harness(emitted, 10);
    EXPECT_FALSE(h.isCrash());
  }
}

TEST(Generate, TrappingProviderSkipsEverySession) {
  auto p = lang::parse(
      "fn int f(int x) { return x + 1; }\nentry f;\nargs { int z = 0; int y = 1 / z; yield y; }\n");
  auto t = embedded(p);
  auto r = generate(t, smallConfig(4));
  EXPECT_TRUE(r.programs.empty());
  ASSERT_EQ(r.sessions.size(), 4u);
  for (const auto& s : r.sessions) EXPECT_EQ(s.status, SessionStatus::SkippedPreEntry);
}

TEST(Generate, EmittedProgramsParseAndCarryHarness) {
  for (const char* rel : {"regressions/frem_clobber/frem_ctor.mj", "regressions/loopcond_force/loopcond_while.mj",
                          "regressions/bce_overaggressive/bce_ring.mj"}) {
    auto p = lang::parse(testutil::readFile(testutil::corpusPath(rel)));
    auto t = embedded(p);
    auto r = generate(t, smallConfig(6));
    for (const auto& g : r.programs) {
      lang::Program emitted;
      ASSERT_NO_THROW(emitted = lang::parse(g.text)) << g.text;
      EXPECT_EQ(harnessLoops(emitted, 0), 10);
      EXPECT_EQ(g.text.find("?H"), std::string::npos);
    }
  }
}

TEST(Generate, DecisionsRespectHoleKinds) {
  auto p = lang::parse(testutil::readFile(testutil::corpusPath("regressions/frem_clobber/frem_call.mj")));
  auto t = embedded(p, "val");
  auto r = generate(t, smallConfig(8));
  for (const auto& g : r.programs)
    for (const auto& [id, text] : g.session.decisions) {
      auto e = lang::parseExpression(text);
      if (e->kind == lang::ExprKind::Unary) e = std::move(e->kids[0]);
      EXPECT_EQ(e->kind, lang::ExprKind::Literal) << text;
    }
}

TEST(Generate, LimitersBoundLoopBodies) {
  auto p = lang::parse(
      "global int body = 0;\n"
      "fn void f(int x) { while (x > 0 || x <= 0) { body = body + 1; } }\n"
      "entry f;\nargs { yield 2; }\n");
  auto t = embedded(p, "rel-logic");
  ASSERT_EQ(t.limiters.size(), 1u);
  auto cfg = smallConfig(5);
  cfg.harnessLoopCount = 1;
  auto r = generate(t, cfg);
  for (const auto& g : r.programs) {
    auto emitted = lang::parse(g.text);
    auto oracle = interp::HoleOracle::trapping();
    lang::GlobalState st;
    ASSERT_TRUE(interp::initGlobals(emitted, st, oracle).isReturned());
    std::vector<Value> args;
    ASSERT_TRUE(interp::runArgs(emitted, st, args, oracle).isReturned());
    ASSERT_TRUE(interp::callEntry(emitted, st, "f", args, oracle).isReturned());
    EXPECT_LE(st.globals[0].i, 1000);
  }
}

TEST(Generate, SessionLogRecordsStatusAndFile) {
  GenSession s;
  s.index = 3;
  s.seed = 9;
  s.decisions[1] = "x + 1";
  s.status = SessionStatus::Complete;
  auto j = sessionJson("tmpl", s);
  EXPECT_NE(j.find("\"status\":\"Complete\""), std::string::npos);
  EXPECT_NE(j.find("\"file\":\"003/tmpl.mj\""), std::string::npos);
  EXPECT_NE(j.find("\"1\":\"x + 1\""), std::string::npos);
}
