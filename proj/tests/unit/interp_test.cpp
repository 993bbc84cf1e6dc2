#include <gtest/gtest.h>

#include <climits>
#include <cmath>
#include <set>

#include "holegen/interp/interp.hpp"
#include "holegen/interp/runtime.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"
#include "test_util.hpp"

using namespace holegen;
using namespace holegen::lang;
using namespace holegen::interp;

namespace {

Outcome runFn(const Program& p, const std::string& fn, std::vector<Value> args, ExecLimits limits = {}) {
  HoleOracle oracle = HoleOracle::trapping();
  GlobalState st;
  Outcome g = initGlobals(p, st, oracle, limits);
  if (!g.isReturned()) return g;
  return callEntry(p, st, fn, args, oracle, limits);
}

Outcome runSrc(const std::string& src, const std::string& fn, std::vector<Value> args, ExecLimits limits = {}) {
  Program p = parse(src);
  return runFn(p, fn, std::move(args), limits);
}

std::int32_t intResult(const std::string& body) {
  Outcome o = runSrc("fn int f() { " + body + " }", "f", {});
  EXPECT_TRUE(o.isReturned()) << o.describe();
  return o.value.i;
}

const char* kHoleProgram =
    "global int g = 5;\n"
    "fn int f(int a, int b) {\n"
    "  int c = ?H1{kind=Arith; type=int; ops={+, -, *}; operands=["
    "{kind=Id; type=int; ops={}; operands=[]; src=a}, {kind=Id; type=int; ops={}; operands=[]; src=b}]; src=a + b};\n"
    "  return c + ?H2{kind=Val; type=int; ops={}; operands=[]; src=0};\n"
    "}\n";

}  // namespace

TEST(InterpSemantics, IntegerCornerCases) {
  EXPECT_EQ(rt::intDiv(INT_MIN, -1), INT_MIN);
  EXPECT_EQ(rt::intRem(INT_MIN, -1), 0);
  EXPECT_EQ(rt::intDiv(-7, 2), -3);
  EXPECT_EQ(rt::intRem(-7, 2), -1);
  EXPECT_EQ(rt::wrapAdd(INT_MAX, 1), INT_MIN);
  EXPECT_EQ(rt::shl(1, 33), 2);
  EXPECT_EQ(rt::ushr(-1, 28), 15);
  EXPECT_EQ(rt::shr(-16, 2), -4);
  EXPECT_EQ(rt::d2i(NAN), 0);
  EXPECT_EQ(rt::d2i(1e20), INT_MAX);
  EXPECT_EQ(rt::d2i(-1e20), INT_MIN);
  EXPECT_EQ(rt::d2i(-2.9), -2);
  EXPECT_EQ(rt::i2c(-1), 0xffff);
  EXPECT_THROW(rt::intDiv(1, 0), TrapSignal);
  EXPECT_THROW(rt::intRem(1, 0), TrapSignal);
}

TEST(InterpSemantics, StatementsAndExpressions) {
  EXPECT_EQ(intResult("int s = 0; for (int i = 0; i < 10; i++) { s = s + i; } return s;"), 45);
  EXPECT_EQ(intResult("int x = 3; int y = x++ + x; return y * 10 + x;"), 74);
  EXPECT_EQ(intResult("int[] a = new int[3]; a[1] = 7; return a[1] + a.length;"), 10);
  EXPECT_EQ(intResult("char c = 'A'; return (int) c + (int) 2.9;"), 67);
  EXPECT_EQ(intResult("bool b = false && 1 / 0 == 0; if (b || true) { return 1; } return 2;"), 1);
  EXPECT_EQ(intResult("int n = 0; while (n < 100) { n = n * 2 + 1; } return n;"), 127);
  EXPECT_EQ(intResult("return -5 % 3 + (7 >>> 1) + (~0);"), 0);
}

TEST(InterpSemantics, RecordsAndMethods) {
  const char* src =
      "record P { int x; int y; }\n"
      "record Q { int v; int[] data; }\n"
      "fn void Q.init(int v0) { v = v0 * 2; }\n"
      "fn int Q.get() { return v + data.length; }\n"
      "fn int f() { P p = new P(3, 4); Q q = new Q(5); return p.x * p.y + q.get(); }\n";
  Outcome o = runSrc(src, "f", {});
  ASSERT_TRUE(o.isReturned()) << o.describe();
  EXPECT_EQ(o.value.i, 22);
}

TEST(InterpSemantics, Traps) {
  EXPECT_TRUE(runSrc("fn int f() { return 1 / 0; }", "f", {}).isTrap(TrapKind::DivByZero));
  EXPECT_TRUE(runSrc("fn int f() { int[] a = new int[2]; return a[2]; }", "f", {}).isTrap(TrapKind::IndexOutOfBounds));
  EXPECT_TRUE(runSrc("fn int f() { int[] a = new int[-1]; return 0; }", "f", {}).isTrap(TrapKind::IndexOutOfBounds));
  EXPECT_TRUE(
      runSrc("record R { int x; } fn int f() { R r = null; return r.x; }", "f", {}).isTrap(TrapKind::NullDeref));
  EXPECT_TRUE(runSrc("record R { int x; } fn int R.g() { return x; } fn int f() { R r = null; return r.g(); }", "f", {})
                  .isTrap(TrapKind::NullDeref));
  Outcome u = runSrc("fn int f() { return unfilled(4, int); }", "f", {});
  EXPECT_TRUE(u.isTrap(TrapKind::UnfilledHole));
  EXPECT_EQ(u.holeId, 4);
}

TEST(InterpSemantics, StoreEvaluatesRightHandSideBeforeBoundsCheck) {
  const char* src =
      "global int hits = 0;\n"
      "fn int bump() { hits = hits + 1; return 1; }\n"
      "fn int f() { int[] a = new int[1]; a[5] = bump(); return 0; }\n"
      "fn int g() { return hits; }\n";
  Program p = parse(src);
  HoleOracle oracle = HoleOracle::trapping();
  GlobalState st;
  ASSERT_TRUE(initGlobals(p, st, oracle).isReturned());
  EXPECT_TRUE(callEntry(p, st, "f", {}, oracle).isTrap(TrapKind::IndexOutOfBounds));
  EXPECT_EQ(st.globals[0].i, 1);
}

TEST(InterpLimits, StepsDepthAndHeap) {
  ExecLimits small;
  small.maxSteps = 1000;
  Outcome spin = runSrc("fn int f() { while (true) { } return 0; }", "f", {}, small);
  EXPECT_TRUE(spin.isExhausted());
  EXPECT_EQ(spin.limit, LimitKind::Steps);

  Outcome deep = runSrc("fn int r(int n) { return r(n + 1); }", "r", {Value::ofInt(0)});
  EXPECT_TRUE(deep.isExhausted());
  EXPECT_EQ(deep.limit, LimitKind::CallDepth);

  Outcome big = runSrc("fn int f() { int[] a = new int[5000000]; return a.length; }", "f", {});
  EXPECT_TRUE(big.isExhausted());
  EXPECT_EQ(big.limit, LimitKind::HeapCells);
}

TEST(InterpLimits, StepCountingIsExact) {
  // 1 entry call + 11 guard evaluations.
  ExecLimits exact;
  exact.maxSteps = 12;
  const char* src = "fn int f() { int s = 0; for (int i = 0; i < 10; i++) { s = s + 1; } return s; }";
  EXPECT_TRUE(runSrc(src, "f", {}, exact).isReturned());
  exact.maxSteps = 11;
  EXPECT_TRUE(runSrc(src, "f", {}, exact).isExhausted());
}

TEST(InterpGlobals, InitializersRunInOrder) {
  Program p = parse("global int a = 3; global int b = a * 2; global final double c = -0.5; global int[] d = new int[b];");
  HoleOracle oracle = HoleOracle::trapping();
  GlobalState st;
  ASSERT_TRUE(initGlobals(p, st, oracle).isReturned());
  EXPECT_EQ(st.globals[0].i, 3);
  EXPECT_EQ(st.globals[1].i, 6);
  EXPECT_EQ(st.globals[2].d, -0.5);
  EXPECT_EQ(st.heap.at(st.globals[3].ref).slots.size(), 6u);
}

TEST(InterpRegressions, RemainderRecordKeepsConstructorArgument) {
  Program p = parse(testutil::readFile(testutil::corpusPath("programs/frem_register.mj")));
  Outcome o = runFn(p, "m", {Value::ofDouble(1.0)});
  ASSERT_TRUE(o.isReturned());
  EXPECT_EQ(o.value.d, 1.0);
}

TEST(InterpRegressions, ModuloIndexIntoEmptyArrayTraps) {
  const char* src =
      "fn void m(int n) { int[] a = new int[n]; for (int i = 0; i < 1; i++) { int x = a[i % (n + 1)]; } }";
  EXPECT_TRUE(runSrc(src, "m", {Value::ofInt(0)}).isTrap(TrapKind::IndexOutOfBounds));
  EXPECT_TRUE(runSrc(src, "m", {Value::ofInt(3)}).isReturned());
}

TEST(InterpOracle, TrappingReportsFirstHole) {
  Program p = parse(kHoleProgram);
  Outcome o = runFn(p, "f", {Value::ofInt(2), Value::ofInt(3)});
  EXPECT_TRUE(o.isTrap(TrapKind::UnfilledHole));
  EXPECT_EQ(o.holeId, 1);
}

TEST(InterpOracle, FillingIsDeterministicPerSeed) {
  Program p = parse(kHoleProgram);
  std::set<std::string> distinct;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    HoleOracle a = HoleOracle::filling(seed);
    HoleOracle b = HoleOracle::filling(seed);
    GlobalState sa, sb;
    initGlobals(p, sa, a);
    initGlobals(p, sb, b);
    Outcome oa = callEntry(p, sa, "f", {Value::ofInt(2), Value::ofInt(3)}, a);
    Outcome ob = callEntry(p, sb, "f", {Value::ofInt(2), Value::ofInt(3)}, b);
    EXPECT_TRUE(sameOutcome(oa, ob));
    ASSERT_EQ(a.decisions().size(), 2u);
    EXPECT_EQ(a.order(), (std::vector<int>{1, 2}));
    for (const auto& [id, e] : a.decisions()) {
      EXPECT_TRUE(structurallyEqual(*e, *b.decision(id)));
      distinct.insert(printExpr(*e));
    }
  }
  EXPECT_GT(distinct.size(), 5u);
}

TEST(InterpOracle, DecisionsStayFixedAcrossEvaluations) {
  const char* src =
      "fn int f() { int s = 0; for (int i = 0; i < 50; i++) {"
      " s = s + ?H1{kind=Val; type=int; ops={}; operands=[]; src=1} % 7; } return s; }";
  Program p = parse(src);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    HoleOracle o = HoleOracle::filling(seed);
    GlobalState st;
    initGlobals(p, st, o);
    Outcome r = callEntry(p, st, "f", {}, o);
    ASSERT_TRUE(r.isReturned());
    std::int32_t v = rt::intRem(o.decision(1)->literal.i, 7);
    EXPECT_EQ(r.value.i, v * 50);
  }
}

TEST(InterpOracle, FillsStayInsideTheirSpace) {
  Program p = parse(kHoleProgram);
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    HoleOracle o = HoleOracle::filling(seed);
    GlobalState st;
    initGlobals(p, st, o);
    callEntry(p, st, "f", {Value::ofInt(1), Value::ofInt(2)}, o);
    for (auto& fn : p.functions)
      for (auto& s : fn.body)
        forEachExpr(*s, [&](Expr& e) {
          if (e.kind != ExprKind::Hole) return;
          const Expr* d = o.decision(e.holeId);
          ASSERT_NE(d, nullptr);
          EXPECT_TRUE(inSpace(*d, *e.hole, *e.site)) << printExpr(*d);
        });
  }
}

TEST(InterpOracle, ReplayUsesGivenDecisions) {
  Program p = parse(kHoleProgram);
  HoleOracle fill = HoleOracle::filling(7);
  GlobalState st;
  initGlobals(p, st, fill);
  Outcome first = callEntry(p, st, "f", {Value::ofInt(2), Value::ofInt(3)}, fill);
  std::map<int, ExprPtr> copy;
  for (const auto& [id, e] : fill.decisions()) copy[id] = e->clone();
  HoleOracle replay = HoleOracle::replay(std::move(copy));
  GlobalState st2;
  initGlobals(p, st2, replay);
  EXPECT_TRUE(sameOutcome(first, callEntry(p, st2, "f", {Value::ofInt(2), Value::ofInt(3)}, replay)));

  std::map<int, ExprPtr> partial;
  partial[1] = fill.decision(1)->clone();
  HoleOracle half = HoleOracle::replay(std::move(partial));
  GlobalState st3;
  initGlobals(p, st3, half);
  Outcome o = callEntry(p, st3, "f", {Value::ofInt(2), Value::ofInt(3)}, half);
  EXPECT_TRUE(o.isTrap(TrapKind::UnfilledHole));
  EXPECT_EQ(o.holeId, 2);
}

TEST(InterpOracle, RandomDoublesCoverSpecials) {
  Rng rng(3);
  bool nan = false, inf = false, negZero = false, huge = false;
  for (int i = 0; i < 4000; ++i) {
    double d = randomValue(Type::doubleT(), rng).d;
    nan |= std::isnan(d);
    inf |= std::isinf(d);
    negZero |= d == 0.0 && std::signbit(d);
    huge |= std::fabs(d) > 1e20 && std::isfinite(d);
  }
  EXPECT_TRUE(nan && inf && negZero && huge);
}
