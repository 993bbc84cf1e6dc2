#include <gtest/gtest.h>

#include <bit>
#include <cmath>
#include <random>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "holegen/lang/errors.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"
#include "holegen/lang/typecheck.hpp"
#include "test_util.hpp"

using namespace holegen::lang;
namespace fs = std::filesystem;

TEST(LangParse, MinimalUnit) {
  Program p = parse("global int x = 0; fn int f() { return x; }");
  EXPECT_EQ(p.globals.size(), 1u);
  EXPECT_EQ(p.functions.size(), 1u);
}

TEST(LangParse, ReturnTypeMismatchIsTypeError) {
  EXPECT_THROW(parse("fn int f() { return 1.5; }"), TypeError);
}

TEST(LangParse, QuaternionRemainderRecord) {
  Program p = parse(testutil::readFile(testutil::corpusPath("programs/frem_register.mj")));
  ASSERT_EQ(p.records.size(), 1u);
  EXPECT_EQ(p.records[0].fields.size(), 4u);
  for (const auto& f : p.records[0].fields) EXPECT_EQ(f.type, Type::doubleT());
  EXPECT_EQ(p.functions.size(), 2u);
}

TEST(LangParse, ErrorsCarryPosition) {
  try {
    parse("fn int f() {\n  return 1 +;\n}");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.span().line, 2);
  }
  try {
    parse("fn int f() {\n  int a = 1;\n  return a && true;\n}");
    FAIL();
  } catch (const TypeError& e) {
    EXPECT_EQ(e.span().line, 3);
  }
}

TEST(LangParse, RejectsBadPrograms) {
  EXPECT_THROW(parse("fn int f() { int a = 1; int a = 2; return a; }"), TypeError);
  EXPECT_THROW(parse("fn void f() { g(); }"), TypeError);
  EXPECT_THROW(parse("global final int k = 1; fn void f() { k = 2; }"), TypeError);
  EXPECT_THROW(parse("fn int f(int x) { if (x > 0) { return 1; } }"), TypeError);
  EXPECT_THROW(parse("fn bool f(char c) { return c < 1; }"), TypeError);
  EXPECT_THROW(parse("record R { int a; } fn int f() { R r = new R(1, 2); return r.a; }"), TypeError);
  EXPECT_THROW(parse("global int a = b; global int b = 1;"), TypeError);
  EXPECT_THROW(parse("fn int f() { return 1 }"), ParseError);
  EXPECT_THROW(parse("fn int f() { int[][] a = null; return 0; }"), ParseError);
}

TEST(LangParse, NegativeLiteralsFold) {
  auto e = parseExpression("-2147483648");
  ASSERT_EQ(e->kind, ExprKind::Literal);
  EXPECT_EQ(e->literal.i, INT32_MIN);
  auto d = parseExpression("x - -1.5");
  ASSERT_EQ(d->kind, ExprKind::Binary);
  EXPECT_EQ(d->kids[1]->kind, ExprKind::Literal);
  EXPECT_EQ(d->kids[1]->literal.d, -1.5);
  EXPECT_THROW(parseExpression("2147483648"), ParseError);
}

TEST(LangResolveType, FigureOneExpressions) {
  Program p = parse(testutil::readFile(testutil::corpusPath("programs/strbuilder.mj")));
  std::vector<ScopeVar> scope = {{"size", Type::intT(), {VarKind::Local, 0}, false},
                                 {"buf", Type::arrayOf(TypeKind::Char), {VarKind::Local, 1}, false},
                                 {"pos", Type::intT(), {VarKind::Local, 2}, false}};
  auto id = parseExpression("size");
  EXPECT_EQ(resolveType(*id, p, scope), Type::intT());
  auto eq = parseExpression("size == 0");
  EXPECT_EQ(resolveType(*eq, p, scope), Type::boolT());
  auto acc = parseExpression("buf[pos]");
  EXPECT_EQ(resolveType(*acc, p, scope), Type::charT());
  auto rel = parseExpression("buf[pos] <= ' '");
  EXPECT_EQ(resolveType(*rel, p, scope), Type::boolT());
  // Re-resolution is idempotent.
  EXPECT_EQ(resolveType(*rel, p, scope), Type::boolT());
  EXPECT_THROW(resolveType(*parseExpression("size + buf"), p, scope), TypeError);
}

TEST(LangPrint, EmptyProgramIsEmptyText) { EXPECT_EQ(print(Program{}), ""); }

TEST(LangPrint, HoleMarkerFormat) {
  Program p = parse(
      "fn bool f(int size) { return ?H1{kind=Relation; type=bool; ops={<, ==}; operands=["
      "{kind=Id; type=int; ops={}; operands=[]; src=size}, {kind=Val; type=int; ops={}; operands=[]; src=0}];"
      " src=size == 0}; }");
  std::string text = print(p);
  EXPECT_NE(text.find("?H1{kind=Relation; type=bool; ops={<, ==}; operands=[{kind=Id; type=int"), std::string::npos);
  Program q = parse(text);
  EXPECT_TRUE(structurallyEqual(p, q));
}

TEST(LangPrint, LiteralSpellings) {
  EXPECT_EQ(printLiteral(Value::ofDouble(1.0)), "1.0");
  EXPECT_EQ(printLiteral(Value::ofDouble(-0.0)), "-0.0");
  EXPECT_EQ(printLiteral(Value::ofDouble(NAN)), "NaN");
  EXPECT_EQ(printLiteral(Value::ofDouble(-INFINITY)), "-Infinity");
  EXPECT_EQ(printLiteral(Value::ofDouble(1e300)), "1e+300");
  EXPECT_EQ(printLiteral(Value::ofChar(0x8020)), "'\\u8020'");
  EXPECT_EQ(printLiteral(Value::ofChar('\'')), "'\\''");
}

TEST(LangPrint, ParenthesizationRoundTrips) {
  const char* cases[] = {"a - (b - c)", "(a - b) - c", "-(-a)", "-(5)", "(double) -5", "a * (b + c)",
                         "!(a && b) || c", "(int) (x * 2.0)", "a[(i + 1) % n]", "x >>> 3 << 2",
                         "(a < b) == (c < d)", "-(2147483647)", "~(a | b)"};
  for (const char* c : cases) {
    auto e = parseExpression(c);
    std::string printed = printExpr(*e);
    auto again = parseExpression(printed);
    EXPECT_TRUE(structurallyEqual(*e, *again)) << c << " printed as " << printed;
  }
}

TEST(LangPrint, RoundTripOverBundledCorpus) {
  int checked = 0;
  for (const char* dir : {"programs", "regressions", "noise"}) {
    fs::path root = testutil::corpusPath(dir);
    if (!fs::exists(root)) continue;
    for (const auto& entry : fs::directory_iterator(root)) {
      if (entry.path().extension() != ".mj") continue;
      Program p = parse(testutil::readFile(entry.path()));
      std::string text = print(p);
      Program q = parse(text);
      EXPECT_TRUE(structurallyEqual(p, q)) << entry.path();
      EXPECT_EQ(print(q), text) << entry.path();
      ++checked;
    }
  }
  EXPECT_GE(checked, 10);
}

TEST(LangPrint, RandomDoublesRoundTrip) {
  std::mt19937_64 rng(7);
  for (int i = 0; i < 2000; ++i) {
    double d = std::bit_cast<double>(rng());
    if (std::isnan(d)) continue;
    auto e = parseExpression(printLiteral(Value::ofDouble(d)));
    ASSERT_EQ(e->kind, ExprKind::Literal);
    EXPECT_EQ(std::bit_cast<std::uint64_t>(e->literal.d), std::bit_cast<std::uint64_t>(d));
  }
}

TEST(LangTypes, EverySubexpressionIsTyped) {
  Program p = parse(testutil::readFile(testutil::corpusPath("programs/strbuilder.mj")));
  int untyped = 0;
  for (auto& f : p.functions)
    for (auto& s : f.body)
      forEachExpr(*s, [&](Expr& e) {
        if (e.type.kind == TypeKind::Unit && e.kind != ExprKind::Call) ++untyped;
      });
  EXPECT_EQ(untyped, 0);
}

TEST(LangTypes, LengthResolvesOnArrays) {
  Program p = parse("record R { int length; } fn int f(int[] a, R r) { return a.length + r.length; }");
  const Expr& sum = *p.functions[0].body[0]->expr;
  EXPECT_EQ(sum.kids[0]->kind, ExprKind::ArrayLength);
  EXPECT_EQ(sum.kids[1]->kind, ExprKind::FieldAccess);
}
