#include "holegen/corpus/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <limits>
#include <set>
#include <stdexcept>

#include <json.hpp>

#include "holegen/interp/interp.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"

namespace holegen::corpus {

using json = nlohmann::json;
using namespace lang;

namespace {

constexpr int kMaxSteps = 8;
constexpr std::int32_t kArrayLengths[] = {0, 1, 2, 3, 5, 8};

Value poolLiteral(const Type& t, Rng& rng) {
  bool fresh = rng() % 4 == 0;
  switch (t.kind) {
    case TypeKind::Int: {
      static const std::int32_t kPool[] = {0, 1, -1, 2, 10, std::numeric_limits<std::int32_t>::min(),
                                           std::numeric_limits<std::int32_t>::max()};
      if (fresh) return Value::ofInt(static_cast<std::int32_t>(rng() % 129) - 32);
      return Value::ofInt(kPool[rng() % std::size(kPool)]);
    }
    case TypeKind::Double: {
      static const double kPool[] = {0.0, 1.0, std::numeric_limits<double>::quiet_NaN()};
      if (fresh) return Value::ofDouble(static_cast<double>(static_cast<std::int64_t>(rng() % 2001) - 1000) / 8.0);
      return Value::ofDouble(kPool[rng() % std::size(kPool)]);
    }
    case TypeKind::Bool:
      return Value::ofBool(rng() & 1);
    case TypeKind::Char: {
      if (fresh) return Value::ofChar(static_cast<std::uint16_t>(0x20 + rng() % 95));
      return Value::ofChar(rng() & 1 ? u'a' : u' ');
    }
    default:
      return Value::null();
  }
}

struct Callable {
  Step::Kind kind;
  std::string callee;
  std::vector<Type> params;  // receiver first for methods
  Type result;
  bool hasReceiver = false;
};

std::vector<Callable> callables(const Program& p) {
  std::vector<Callable> out;
  for (const auto& f : p.functions) {
    if (!f.receiver.empty() && f.name == "init") continue;
    Callable c{Step::Kind::Call, f.qualifiedName(), {}, f.returnType, !f.receiver.empty()};
    if (c.hasReceiver) c.params.push_back(Type::recordRef(f.receiver));
    for (const auto& prm : f.params) c.params.push_back(prm.type);
    out.push_back(std::move(c));
  }
  return out;
}

class Generator {
 public:
  Generator(const Program& p, Rng& rng) : p_(p), rng_(rng), calls_(callables(p)) {
    stateful_ = !p.records.empty();
    for (const auto& g : p.globals) stateful_ = stateful_ || !g.isFinal;
  }

  std::optional<CallSequence> sequence() {
    if (calls_.empty()) return std::nullopt;
    seq_ = CallSequence{};
    // Without records or mutable globals earlier calls cannot affect later ones.
    std::size_t target = stateful_ ? 1 + rng_() % kMaxSteps : 1;
    for (int attempt = 0; attempt < 40 && seq_.steps.size() < target; ++attempt) {
      const Callable& c = calls_[rng_() % calls_.size()];
      std::size_t mark = seq_.steps.size();
      if (!appendCall(c)) seq_.steps.resize(mark);
    }
    if (seq_.steps.empty() || seq_.steps.back().kind != Step::Kind::Call) return std::nullopt;
    seq_.result = static_cast<int>(seq_.steps.size()) - 1;
    seq_.resultType = seq_.steps.back().type;
    return seq_;
  }

 private:
  bool appendCall(const Callable& c) {
    Step s{Step::Kind::Call, c.callee, {}, c.result};
    for (std::size_t i = 0; i < c.params.size(); ++i) {
      auto a = argument(c.params[i], c.hasReceiver && i == 0, 1);
      if (!a) return false;
      s.args.push_back(*a);
    }
    if (static_cast<int>(seq_.steps.size()) >= kMaxSteps) return false;
    seq_.steps.push_back(std::move(s));
    return true;
  }

  std::optional<SeqArg> argument(const Type& t, bool nonNull, int depth) {
    if (t.isPrimitive()) return SeqArg::lit(poolLiteral(t, rng_));
    std::vector<int> existing;
    for (std::size_t k = 0; k < seq_.steps.size(); ++k)
      if (seq_.steps[k].type == t) existing.push_back(static_cast<int>(k));
    if (!existing.empty() && rng_() % 5 != 0) return SeqArg::binding(existing[rng_() % existing.size()]);
    if (t.isArray()) {
      if (static_cast<int>(seq_.steps.size()) >= kMaxSteps) return std::nullopt;
      Step s{Step::Kind::NewArray, toString(t.elementType()), {}, t};
      s.args.push_back(SeqArg::lit(Value::ofInt(kArrayLengths[rng_() % std::size(kArrayLengths)])));
      seq_.steps.push_back(std::move(s));
      return SeqArg::binding(static_cast<int>(seq_.steps.size()) - 1);
    }
    if (!nonNull && (depth > 2 || rng_() % 6 == 0)) return SeqArg::null();
    if (depth > 2) return std::nullopt;
    int rec = p_.findRecord(t.record);
    if (rec < 0) return std::nullopt;
    Step s{Step::Kind::NewRecord, t.record, {}, t};
    int init = p_.findFunction(t.record + ".init");
    std::vector<Type> want;
    if (init >= 0) {
      for (const auto& prm : p_.functions[init].params) want.push_back(prm.type);
    } else if (rng_() & 1) {
      for (const auto& f : p_.records[rec].fields) want.push_back(f.type);
    }
    for (const auto& w : want) {
      auto a = argument(w, false, depth + 1);
      if (!a) return std::nullopt;
      s.args.push_back(*a);
    }
    if (static_cast<int>(seq_.steps.size()) >= kMaxSteps) return std::nullopt;
    seq_.steps.push_back(std::move(s));
    return SeqArg::binding(static_cast<int>(seq_.steps.size()) - 1);
  }

  const Program& p_;
  Rng& rng_;
  std::vector<Callable> calls_;
  CallSequence seq_;
  bool stateful_ = false;
};

json argJson(const SeqArg& a) {
  switch (a.kind) {
    case SeqArg::Kind::Binding: return json{{"bind", a.step}};
    case SeqArg::Kind::Null: return json{{"null", true}};
    case SeqArg::Kind::Literal: break;
  }
  return json{{"lit", printLiteral(a.literal)}};
}

const char* stepKindName(Step::Kind k) {
  switch (k) {
    case Step::Kind::Call: return "call";
    case Step::Kind::NewRecord: return "new";
    case Step::Kind::NewArray: return "array";
  }
  return "?";
}

Step::Kind stepKindFrom(const std::string& s) {
  if (s == "call") return Step::Kind::Call;
  if (s == "new") return Step::Kind::NewRecord;
  if (s == "array") return Step::Kind::NewArray;
  throw std::runtime_error("unknown step kind '" + s + "'");
}

Value literalFrom(const std::string& text) {
  ExprPtr e = parseExpression(text);
  if (e->kind != ExprKind::Literal) throw std::runtime_error("not a literal: " + text);
  return e->literal;
}

}  // namespace

std::string CallSequence::argText(const SeqArg& a, const std::string& prefix) {
  switch (a.kind) {
    case SeqArg::Kind::Binding: return bindName(a.step, prefix);
    case SeqArg::Kind::Null: return "null";
    case SeqArg::Kind::Literal: break;
  }
  return printLiteral(a.literal);
}

std::string CallSequence::render(const std::string& prefix, int upTo, int indent) const {
  std::string out;
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  std::size_t n = upTo < 0 ? steps.size() : std::min(steps.size(), static_cast<std::size_t>(upTo));
  for (std::size_t k = 0; k < n; ++k) {
    const Step& s = steps[k];
    out += pad;
    if (s.type.kind != TypeKind::Unit) out += toString(s.type) + " " + bindName(static_cast<int>(k), prefix) + " = ";
    std::size_t first = 0;
    switch (s.kind) {
      case Step::Kind::Call: {
        auto dot = s.callee.find('.');
        if (dot != std::string::npos) {
          out += argText(s.args[0], prefix) + "." + s.callee.substr(dot + 1);
          first = 1;
        } else {
          out += s.callee;
        }
        break;
      }
      case Step::Kind::NewRecord:
        out += "new " + s.callee;
        break;
      case Step::Kind::NewArray:
        out += "new " + s.callee + "[" + argText(s.args[0], prefix) + "];\n";
        continue;
    }
    out += "(";
    for (std::size_t i = first; i < s.args.size(); ++i) {
      if (i > first) out += ", ";
      out += argText(s.args[i], prefix);
    }
    out += ");\n";
  }
  return out;
}

CallSequence CallSequence::prefixTo(int k) const {
  CallSequence out;
  out.steps.assign(steps.begin(), steps.begin() + k + 1);
  out.result = k;
  out.resultType = steps[k].type;
  return out;
}

bool operator==(const CallSequence& a, const CallSequence& b) { return toJson(a) == toJson(b); }

bool replaysCleanly(const Program& p, const CallSequence& seq, std::uint64_t maxSteps) {
  Program base = p.clone();
  base.entry.reset();
  base.args.reset();
  base.harnessLoops.reset();
  std::string text = print(base) + "\nfn void _probe() {\n" + seq.render("", -1, 1) + "}\n";
  Program probe;
  try {
    probe = parse(text);
  } catch (const std::exception&) {
    return false;
  }
  interp::ExecLimits limits;
  limits.maxSteps = maxSteps;
  limits.maxHeapCells = 100000;
  interp::HoleOracle oracle = interp::HoleOracle::trapping();
  GlobalState st;
  if (!interp::initGlobals(probe, st, oracle, limits).isReturned()) return false;
  return interp::callEntry(probe, st, "_probe", {}, oracle, limits).isReturned();
}

std::vector<CallSequence> generateSequences(const Program& p, int budget, std::uint64_t seed) {
  Rng rng(seed);
  Generator gen(p, rng);
  std::vector<CallSequence> out;
  std::set<std::string> seen;
  for (int i = 0; i < budget; ++i) {
    auto s = gen.sequence();
    if (!s) continue;
    std::string key = toJson(*s);
    if (seen.count(key) || !replaysCleanly(p, *s)) continue;
    seen.insert(key);
    out.push_back(std::move(*s));
  }
  return out;
}

std::vector<EntryInput> toEntries(const std::vector<CallSequence>& seqs) {
  std::vector<EntryInput> out;
  for (const auto& s : seqs) {
    if (s.steps.empty() || s.steps.back().kind != Step::Kind::Call) continue;
    out.push_back({s.steps.back().callee, s});
  }
  return out;
}

ObjectPool buildPool(const std::vector<CallSequence>& seqs) {
  ObjectPool pool;
  std::set<std::string> seen;
  for (const auto& s : seqs) {
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      if (!s.steps[k].type.isReference()) continue;
      CallSequence pre = s.prefixTo(static_cast<int>(k));
      std::string key = toJson(pre);
      if (!seen.insert(key).second) continue;
      pool.byType[toString(pre.resultType)].push_back(std::move(pre));
    }
  }
  return pool;
}

std::optional<CallSequence> pickFromPool(const Type& t, const ObjectPool& pool, Rng& rng) {
  auto it = pool.byType.find(toString(t));
  if (it == pool.byType.end() || it->second.empty()) return std::nullopt;
  std::uniform_int_distribution<std::size_t> pick(0, it->second.size() - 1);
  return it->second[pick(rng)];
}

std::string toJson(const CallSequence& s) {
  json steps = json::array();
  for (const auto& st : s.steps) {
    json args = json::array();
    for (const auto& a : st.args) args.push_back(argJson(a));
    steps.push_back({{"kind", stepKindName(st.kind)}, {"callee", st.callee}, {"type", toString(st.type)}, {"args", args}});
  }
  json j{{"steps", steps}, {"result", s.result}, {"resultType", toString(s.resultType)}};
  return j.dump();
}

CallSequence sequenceFromJson(const std::string& line) {
  json j = json::parse(line);
  CallSequence s;
  for (const auto& st : j.at("steps")) {
    Step step;
    step.kind = stepKindFrom(st.at("kind").get<std::string>());
    step.callee = st.at("callee").get<std::string>();
    step.type = typeFromString(st.at("type").get<std::string>());
    for (const auto& a : st.at("args")) {
      if (a.contains("bind")) step.args.push_back(SeqArg::binding(a.at("bind").get<int>()));
      else if (a.contains("null")) step.args.push_back(SeqArg::null());
      else step.args.push_back(SeqArg::lit(literalFrom(a.at("lit").get<std::string>())));
    }
    s.steps.push_back(std::move(step));
  }
  s.result = j.at("result").get<int>();
  s.resultType = typeFromString(j.at("resultType").get<std::string>());
  return s;
}

void saveSequences(const std::filesystem::path& path, const std::vector<CallSequence>& seqs) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& s : seqs) out << toJson(s) << "\n";
}

std::vector<CallSequence> loadSequences(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::vector<CallSequence> out;
  std::string line;
  while (std::getline(in, line))
    if (!line.empty()) out.push_back(sequenceFromJson(line));
  return out;
}

void savePool(const std::filesystem::path& path, const ObjectPool& pool) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  for (const auto& [type, seqs] : pool.byType)
    for (const auto& s : seqs) out << json{{"type", type}, {"sequence", json::parse(toJson(s))}}.dump() << "\n";
}

ObjectPool loadPool(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  ObjectPool pool;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    json j = json::parse(line);
    pool.byType[j.at("type").get<std::string>()].push_back(sequenceFromJson(j.at("sequence").dump()));
  }
  return pool;
}

}  // namespace holegen::corpus
