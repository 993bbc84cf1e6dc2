#include <gtest/gtest.h>

#include "holegen/corpus/corpus.hpp"
#include "holegen/lang/parser.hpp"
#include "test_util.hpp"

using namespace holegen;
using namespace holegen::corpus;
using lang::Type;
using lang::Value;

namespace {

lang::Program corpusProgram(const std::string& name) {
  return lang::parse(testutil::readFile(testutil::corpusPath("programs/" + name + ".mj")));
}

Step newRecord(const std::string& name) {
  Step s;
  s.kind = Step::Kind::NewRecord;
  s.callee = name;
  s.type = Type::recordRef(name);
  return s;
}

}  // namespace

TEST(Sequences, DeterministicUnderSeed) {
  auto p = corpusProgram("strbuilder");
  auto a = generateSequences(p, 80, 11);
  auto b = generateSequences(p, 80, 11);
  ASSERT_FALSE(a.empty());
  EXPECT_EQ(a, b);
  EXPECT_NE(a, generateSequences(p, 80, 12));
}

TEST(Sequences, SingleFunctionYieldsSingleCalls) {
  auto p = lang::parse("fn int f(int x) { return x * 2; }");
  auto seqs = generateSequences(p, 30, 1);
  ASSERT_FALSE(seqs.empty());
  for (const auto& s : seqs) {
    ASSERT_EQ(s.steps.size(), 1u);
    EXPECT_EQ(s.steps[0].callee, "f");
    ASSERT_EQ(s.steps[0].args.size(), 1u);
    EXPECT_EQ(s.steps[0].args[0].kind, SeqArg::Kind::Literal);
    EXPECT_EQ(s.steps[0].args[0].literal.tag, lang::ValueTag::Int);
  }
}

TEST(Sequences, NoCallablesGivesEmptyList) {
  EXPECT_TRUE(generateSequences(lang::parse("global int g = 1;"), 10, 1).empty());
}

TEST(Sequences, BuilderSequenceEndsInMethodCall) {
  auto p = corpusProgram("strbuilder");
  auto seqs = generateSequences(p, 100, 3);
  bool found = false;
  for (const auto& s : seqs) {
    if (s.steps.size() < 2 || s.steps.back().callee != "StrBuilder.trim") continue;
    for (const auto& st : s.steps)
      if (st.kind == Step::Kind::NewRecord && st.callee == "StrBuilder") found = true;
  }
  EXPECT_TRUE(found);
}

TEST(Sequences, ShapeInvariants) {
  for (const char* name : {"strbuilder", "account", "linked_list", "sorting"}) {
    auto p = corpusProgram(name);
    for (const auto& s : generateSequences(p, 60, 5)) {
      EXPECT_LE(s.steps.size(), 8u);
      for (std::size_t k = 0; k < s.steps.size(); ++k)
        for (const auto& a : s.steps[k].args)
          if (a.kind == SeqArg::Kind::Binding) EXPECT_LT(a.step, static_cast<int>(k));
    }
  }
}

TEST(Sequences, ReplayValidity) {
  for (const char* name : {"strbuilder", "account", "int_stack", "matrix"}) {
    auto p = corpusProgram(name);
    auto seqs = generateSequences(p, 60, 9);
    for (const auto& s : seqs) EXPECT_TRUE(replaysCleanly(p, s)) << name << "\n" << s.render();
    auto pool = buildPool(seqs);
    for (const auto& [type, list] : pool.byType)
      for (const auto& s : list) EXPECT_TRUE(replaysCleanly(p, s)) << name << " " << type;
  }
}

TEST(Sequences, TrappingSequenceIsRejected) {
  auto p = lang::parse("fn int f(int x) { return 10 / x; }");
  CallSequence s;
  Step call;
  call.callee = "f";
  call.args.push_back(SeqArg::lit(Value::ofInt(0)));
  call.type = Type::intT();
  s.steps.push_back(call);
  s.result = 0;
  s.resultType = Type::intT();
  EXPECT_FALSE(replaysCleanly(p, s));
  s.steps[0].args[0] = SeqArg::lit(Value::ofInt(2));
  EXPECT_TRUE(replaysCleanly(p, s));
}

TEST(Entries, LastCallBecomesEntry) {
  EXPECT_TRUE(toEntries({}).empty());
  auto p = corpusProgram("quaternion");
  auto seqs = generateSequences(p, 50, 2);
  auto entries = toEntries(seqs);
  ASSERT_FALSE(entries.empty());
  for (const auto& e : entries) {
    ASSERT_FALSE(e.input.steps.empty());
    EXPECT_EQ(e.input.steps.back().kind, Step::Kind::Call);
    EXPECT_EQ(e.input.steps.back().callee, e.entry);
  }
}

TEST(Pool, IndexesEveryReferencePrefixByType) {
  CallSequence s;
  s.steps = {newRecord("A"), newRecord("B"), newRecord("A")};
  s.result = 2;
  s.resultType = Type::recordRef("A");
  auto pool = buildPool({s});
  ASSERT_EQ(pool.byType.size(), 2u);
  ASSERT_EQ(pool.byType.at("A").size(), 2u);
  ASSERT_EQ(pool.byType.at("B").size(), 1u);
  EXPECT_EQ(pool.byType.at("A")[0], s.prefixTo(0));
  EXPECT_EQ(pool.byType.at("A")[1], s.prefixTo(2));
  EXPECT_EQ(pool.byType.at("B")[0], s.prefixTo(1));
  for (const auto& [type, list] : pool.byType)
    for (const auto& seq : list) EXPECT_EQ(lang::toString(seq.resultType), type);
}

TEST(Pool, PickOnAbsentTypeIsNone) {
  ObjectPool pool;
  Rng rng(1);
  EXPECT_FALSE(pickFromPool(Type::recordRef("Nope"), pool, rng).has_value());
}

TEST(Pool, PickIsUniform) {
  CallSequence s;
  s.steps = {newRecord("A"), newRecord("A")};
  s.result = 1;
  s.resultType = Type::recordRef("A");
  auto pool = buildPool({s});
  ASSERT_EQ(pool.byType.at("A").size(), 2u);
  Rng rng(2024);
  int first = 0;
  const int draws = 10000;
  for (int i = 0; i < draws; ++i)
    if (*pickFromPool(Type::recordRef("A"), pool, rng) == pool.byType.at("A")[0]) ++first;
  double freq = static_cast<double>(first) / draws;
  EXPECT_NEAR(freq, 0.5, 0.05);
}

TEST(Pool, SupersetOfTestBasedInputs) {
  for (const char* name : {"strbuilder", "account", "linked_list", "quaternion", "matrix"}) {
    auto p = corpusProgram(name);
    auto seqs = generateSequences(p, 80, 4);
    auto pool = buildPool(seqs);
    for (const auto& e : toEntries(seqs)) {
      const auto& steps = e.input.steps;
      for (std::size_t k = 0; k + 1 < steps.size(); ++k) {
        const Type& t = steps[k].type;
        if (t.kind != lang::TypeKind::Record && t.kind != lang::TypeKind::Array) continue;
        auto prefix = e.input.prefixTo(static_cast<int>(k));
        auto it = pool.byType.find(lang::toString(t));
        ASSERT_NE(it, pool.byType.end()) << name;
        bool present = false;
        for (const auto& cand : it->second) present = present || cand == prefix;
        EXPECT_TRUE(present) << name << "\n" << prefix.render();
      }
    }
  }
}

TEST(Persistence, SequencesAndPoolRoundTrip) {
  auto p = corpusProgram("matrix");
  auto seqs = generateSequences(p, 40, 8);
  auto dir = testutil::scratchDir("corpus_persist");
  saveSequences(dir / "s.jsonl", seqs);
  EXPECT_EQ(loadSequences(dir / "s.jsonl"), seqs);
  auto pool = buildPool(seqs);
  savePool(dir / "p.jsonl", pool);
  auto back = loadPool(dir / "p.jsonl");
  ASSERT_EQ(back.byType.size(), pool.byType.size());
  for (const auto& [t, list] : pool.byType) EXPECT_EQ(back.byType.at(t), list);
}

TEST(Persistence, SpecialLiteralsSurviveJson) {
  CallSequence s;
  Step call;
  call.callee = "f";
  call.args = {SeqArg::lit(Value::ofDouble(std::numeric_limits<double>::quiet_NaN())),
               SeqArg::lit(Value::ofInt(std::numeric_limits<std::int32_t>::min())), SeqArg::lit(Value::ofChar(' ')),
               SeqArg::null()};
  call.type = Type::intT();
  s.steps.push_back(call);
  s.result = 0;
  s.resultType = Type::intT();
  auto back = sequenceFromJson(toJson(s));
  EXPECT_EQ(toJson(back), toJson(s));
  EXPECT_EQ(back.steps[0].args[1].literal.i, std::numeric_limits<std::int32_t>::min());
  EXPECT_TRUE(std::isnan(back.steps[0].args[0].literal.d));
}
