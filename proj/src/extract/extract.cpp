#include "holegen/extract/extract.hpp"

#include <fstream>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "holegen/interp/oracle.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"
#include "holegen/lang/typecheck.hpp"

namespace holegen::extract {

using json = nlohmann::json;
using namespace lang;

namespace {

const std::vector<BinOp> kArithOps = {BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Rem};
const std::vector<BinOp> kShiftOps = {BinOp::Shl, BinOp::Shr, BinOp::UShr};
const std::vector<BinOp> kRelOps = {BinOp::Lt, BinOp::Le, BinOp::Gt, BinOp::Ge, BinOp::Eq, BinOp::Ne};
const std::vector<BinOp> kEqOps = {BinOp::Eq, BinOp::Ne};
const std::vector<BinOp> kLogicOps = {BinOp::And, BinOp::Or};

bool castable(const Type& t) { return t.isNumeric() || t.kind == TypeKind::Char; }

std::optional<HoleKind> naturalKind(const Expr& e) {
  switch (e.kind) {
    case ExprKind::Ident:
      return HoleKind::Id;
    case ExprKind::Literal:
      if (e.type.isPrimitive()) return HoleKind::Val;
      return std::nullopt;
    case ExprKind::Binary: {
      BinOp op = e.binOp;
      if (isArith(op) && e.type.isNumeric()) return HoleKind::Arith;
      if (isShift(op) && e.type.kind == TypeKind::Int) return HoleKind::Shift;
      if (isRelational(op) && e.kids[0]->type.isPrimitive() && e.kids[0]->type == e.kids[1]->type)
        return HoleKind::Relation;
      if (isLogical(op)) return HoleKind::Logic;
      return std::nullopt;
    }
    case ExprKind::ArrayAccess:
      return HoleKind::ArrAcc;
    case ExprKind::Cast:
      if (castable(e.castType) && castable(e.kids[0]->type)) return HoleKind::Cast;
      return std::nullopt;
    default:
      return std::nullopt;
  }
}

HoleSpec leaf(HoleKind k, const Expr& e) {
  HoleSpec h;
  h.kind = k;
  h.type = e.type;
  h.source = e.clone();
  return h;
}

void setOps(HoleSpec& h, const Expr& e) {
  switch (h.kind) {
    case HoleKind::Arith: h.ops = kArithOps; break;
    case HoleKind::Shift: h.ops = kShiftOps; break;
    case HoleKind::Relation: h.ops = e.kids[0]->type.kind == TypeKind::Bool ? kEqOps : kRelOps; break;
    case HoleKind::Logic: h.ops = kLogicOps; break;
    default: break;
  }
}

// All kinds: a composite converts only when every operand converts.
std::optional<HoleSpec> convertAll(const Expr& e) {
  auto k = naturalKind(e);
  if (!k) return std::nullopt;
  HoleSpec h = leaf(*k, e);
  if (*k == HoleKind::Id || *k == HoleKind::Val) return h;
  setOps(h, e);
  for (const auto& kid : e.kids) {
    auto sub = convertAll(*kid);
    if (!sub) return std::nullopt;
    h.operands.push_back(std::move(*sub));
  }
  return h;
}

// Restricted kinds: operands of other kinds are kept fixed.
std::optional<HoleSpec> convertRestricted(const Expr& e, const HoleKinds& kinds) {
  auto k = naturalKind(e);
  if (!k || !kinds.allows(*k)) return std::nullopt;
  HoleSpec h = leaf(*k, e);
  if (*k == HoleKind::Id || *k == HoleKind::Val) return h;
  setOps(h, e);
  for (const auto& kid : e.kids) {
    auto sub = convertRestricted(*kid, kinds);
    h.operands.push_back(sub ? std::move(*sub) : leaf(HoleKind::Fixed, *kid));
  }
  return h;
}

ExprPtr holeNode(HoleSpec spec, SourceSpan span) {
  auto e = std::make_unique<Expr>();
  e->kind = ExprKind::Hole;
  e->span = span;
  e->hole = std::make_unique<HoleSpec>(std::move(spec));
  return e;
}

class Rewriter {
 public:
  explicit Rewriter(const HoleKinds& kinds) : kinds_(kinds) {}

  void expr(ExprPtr& slot) {
    if (auto spec = convert(*slot, kinds_)) {
      slot = holeNode(std::move(*spec), slot->span);
      return;
    }
    Expr& e = *slot;
    switch (e.kind) {
      case ExprKind::Unary:
        if (e.unOp == UnOp::PostInc || e.unOp == UnOp::PostDec) return;
        break;
      case ExprKind::Hole:
      case ExprKind::Unfilled:
      case ExprKind::Nondet:
      case ExprKind::Literal:
      case ExprKind::This:
      case ExprKind::Ident:
        return;
      default:
        break;
    }
    for (auto& k : e.kids) expr(k);
  }

  void block(Block& b) {
    for (auto& s : b) stmt(*s);
  }

  void stmt(Stmt& s) {
    switch (s.kind) {
      case StmtKind::VarDecl:
        expr(s.expr);
        break;
      case StmtKind::Assign:
        if (s.target->kind == ExprKind::ArrayAccess) expr(s.target->kids[1]);
        expr(s.expr);
        break;
      case StmtKind::ExprStmt:
      case StmtKind::Return:
        if (s.expr) expr(s.expr);
        break;
      case StmtKind::If:
      case StmtKind::While:
        expr(s.expr);
        block(s.body);
        block(s.elseBody);
        break;
      case StmtKind::For:
        if (s.init) stmt(*s.init);
        expr(s.expr);
        if (s.update) stmt(*s.update);
        block(s.body);
        break;
      case StmtKind::Block:
        block(s.body);
        break;
    }
  }

 private:
  HoleKinds kinds_;
};

template <typename F>
void forEachProgramExpr(Program& p, F&& f) {
  for (auto& g : p.globals) forEachExpr(*g.init, f);
  for (auto& fn : p.functions)
    for (auto& s : fn.body) forEachExpr(*s, f);
  if (p.args) {
    for (auto& s : p.args->body) forEachExpr(*s, f);
    for (auto& y : p.args->yields) forEachExpr(*y, f);
  }
}

void numberHoles(Program& p) {
  int next = 0;
  forEachProgramExpr(p, [&](Expr& e) {
    if (e.kind == ExprKind::Hole) e.holeId = ++next;
  });
}

bool containsHole(const Expr& e) {
  if (e.kind == ExprKind::Hole) return true;
  for (const auto& k : e.kids)
    if (containsHole(*k)) return true;
  return false;
}

bool isLimiterName(const std::string& n) {
  if (n.size() <= 4 || n.compare(0, 4, "_lim") != 0) return false;
  for (std::size_t i = 4; i < n.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(n[i]))) return false;
  return true;
}

bool reserved(const std::string& n) { return n.compare(0, 4, "_lim") == 0; }

bool declaresReserved(const Block& b) {
  for (const auto& s : b) {
    if (s->kind == StmtKind::VarDecl && reserved(s->name)) return true;
    if (s->init && s->init->kind == StmtKind::VarDecl && reserved(s->init->name)) return true;
    if (declaresReserved(s->body) || declaresReserved(s->elseBody)) return true;
  }
  return false;
}

bool mentionsLimiterPrefix(const Program& p) {
  for (const auto& g : p.globals)
    if (reserved(g.name)) return true;
  for (const auto& fn : p.functions) {
    for (const auto& prm : fn.params)
      if (reserved(prm.name)) return true;
    if (declaresReserved(fn.body)) return true;
  }
  for (const auto& r : p.records)
    for (const auto& f : r.fields)
      if (reserved(f.name)) return true;
  return false;
}

class LimiterInserter {
 public:
  LimiterInserter(int bound, std::vector<Limiter>& out) : bound_(bound), out_(out) {}

  void block(Block& b) {
    for (std::size_t i = 0; i < b.size(); ++i) {
      Stmt& s = *b[i];
      bool loop = s.kind == StmtKind::While || s.kind == StmtKind::For;
      int site = loop ? loops_++ : -1;
      if (loop && s.expr && containsHole(*s.expr)) {
        std::string var = "_lim" + std::to_string(out_.size() + 1);
        out_.push_back({site, var, bound_});
        auto counter = makeUnary(UnOp::PostInc, makeIdent(var));
        auto check = makeBinary(BinOp::Lt, std::move(counter), makeLiteral(Value::ofInt(bound_)));
        s.expr = makeBinary(BinOp::And, std::move(s.expr), std::move(check));
        auto decl = std::make_unique<Stmt>();
        decl->kind = StmtKind::VarDecl;
        decl->declType = Type::intT();
        decl->name = var;
        decl->expr = makeLiteral(Value::ofInt(0));
        decl->span = s.span;
        b.insert(b.begin() + static_cast<std::ptrdiff_t>(i), std::move(decl));
        ++i;
      }
      block(b[i]->body);
      block(b[i]->elseBody);
    }
  }

 private:
  int bound_;
  std::vector<Limiter>& out_;
  int loops_ = 0;
};

void collectHoles(Template& t) {
  t.holes.clear();
  forEachProgramExpr(t.unit, [&](Expr& e) {
    if (e.kind == ExprKind::Hole) t.holes.emplace(e.holeId, *e.hole);
  });
}

void countSpec(const HoleSpec& h, HoleCounts& c) {
  if (h.kind != HoleKind::Fixed) ++c.byKind[h.kind];
  for (const auto& o : h.operands) countSpec(o, c);
}

std::string argsText(const std::string& entry, const std::string& body, const std::vector<std::string>& yields) {
  std::string out = "entry " + entry + ";\nargs {\n" + body + "  yield";
  for (std::size_t i = 0; i < yields.size(); ++i) out += (i ? ", " : " ") + yields[i];
  return out + ";\n}\n";
}

ArgsBlock parseArgs(const std::string& text) {
  Program p = parseSyntax(text);
  return std::move(*p.args);
}

// Undo `(g) && _limN++ < b` and drop `int _limN = 0;` declarations.
void stripLimiters(Block& b) {
  for (std::size_t i = 0; i < b.size();) {
    Stmt& s = *b[i];
    if (s.kind == StmtKind::VarDecl && isLimiterName(s.name)) {
      b.erase(b.begin() + static_cast<std::ptrdiff_t>(i));
      continue;
    }
    if ((s.kind == StmtKind::While || s.kind == StmtKind::For) && s.expr->kind == ExprKind::Binary &&
        s.expr->binOp == BinOp::And) {
      const Expr& rhs = *s.expr->kids[1];
      if (rhs.kind == ExprKind::Binary && rhs.binOp == BinOp::Lt && rhs.kids[0]->kind == ExprKind::Unary &&
          rhs.kids[0]->unOp == UnOp::PostInc && rhs.kids[0]->kids[0]->kind == ExprKind::Ident &&
          isLimiterName(rhs.kids[0]->kids[0]->name)) {
        ExprPtr g = std::move(s.expr->kids[0]);
        s.expr = std::move(g);
      }
    }
    stripLimiters(s.body);
    stripLimiters(s.elseBody);
    ++i;
  }
}

void findLimiters(const Block& b, std::vector<Limiter>& out, int& loops) {
  for (const auto& sp : b) {
    const Stmt& s = *sp;
    if (s.kind == StmtKind::While || s.kind == StmtKind::For) {
      int site = loops++;
      const Expr& g = *s.expr;
      if (g.kind == ExprKind::Binary && g.binOp == BinOp::And) {
        const Expr& rhs = *g.kids[1];
        if (rhs.kind == ExprKind::Binary && rhs.binOp == BinOp::Lt && rhs.kids[0]->kind == ExprKind::Unary &&
            rhs.kids[0]->unOp == UnOp::PostInc && rhs.kids[0]->kids[0]->kind == ExprKind::Ident &&
            isLimiterName(rhs.kids[0]->kids[0]->name) && rhs.kids[1]->kind == ExprKind::Literal)
          out.push_back({site, rhs.kids[0]->kids[0]->name, rhs.kids[1]->literal.i});
      }
    }
    findLimiters(s.body, out, loops);
    findLimiters(s.elseBody, out, loops);
  }
}

}  // namespace

HoleKinds HoleKinds::parse(const std::string& text) {
  unsigned mask = 0;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    auto b = item.find_first_not_of(" \t");
    auto e = item.find_last_not_of(" \t");
    if (b == std::string::npos) continue;
    item = item.substr(b, e - b + 1);
    if (item == "all") mask |= Everything;
    else if (item == "id") mask |= Id;
    else if (item == "val") mask |= Val;
    else if (item == "arith-shift") mask |= ArithShift;
    else if (item == "rel-logic") mask |= RelLogic;
    else throw std::invalid_argument("unknown hole kind group '" + item + "'");
  }
  if (mask == 0) throw std::invalid_argument("empty hole kind set");
  return HoleKinds(mask);
}

bool HoleKinds::allows(HoleKind k) const {
  if (mask_ & Everything) return k != HoleKind::Fixed;
  switch (k) {
    case HoleKind::Id: return mask_ & Id;
    case HoleKind::Val: return mask_ & Val;
    case HoleKind::Arith:
    case HoleKind::Shift: return mask_ & ArithShift;
    case HoleKind::Relation:
    case HoleKind::Logic: return mask_ & RelLogic;
    default: return false;
  }
}

std::string HoleKinds::toString() const {
  if (mask_ & Everything) return "all";
  std::string out;
  auto add = [&](unsigned bit, const char* name) {
    if (!(mask_ & bit)) return;
    if (!out.empty()) out += ",";
    out += name;
  };
  add(Id, "id");
  add(Val, "val");
  add(ArithShift, "arith-shift");
  add(RelLogic, "rel-logic");
  return out;
}

const char* modeName(InputMode m) {
  switch (m) {
    case InputMode::TestBased: return "test";
    case InputMode::PoolBased: return "pool";
    case InputMode::Embedded: return "embedded";
  }
  return "?";
}

InputMode modeFromString(const std::string& s) {
  if (s == "test" || s == "test-based") return InputMode::TestBased;
  if (s == "pool" || s == "pool-based") return InputMode::PoolBased;
  if (s == "embedded") return InputMode::Embedded;
  throw std::invalid_argument("unknown mode '" + s + "'");
}

Template Template::clone() const {
  Template t;
  t.name = name;
  t.unit = unit.clone();
  t.entry = entry;
  t.holes = holes;
  t.limiters = limiters;
  t.argProviders = argProviders;
  t.mode = mode;
  t.kinds = kinds;
  return t;
}

int HoleCounts::total() const {
  int n = limiters;
  for (const auto& [k, v] : byKind) n += v;
  return n;
}

HoleCounts& HoleCounts::operator+=(const HoleCounts& o) {
  for (const auto& [k, v] : o.byKind) byKind[k] += v;
  limiters += o.limiters;
  return *this;
}

std::optional<HoleSpec> convert(const Expr& e, const HoleKinds& kinds) {
  return kinds.isAll() ? convertAll(e) : convertRestricted(e, kinds);
}

void insertLoopLimiters(Template& t, int bound) {
  LimiterInserter ins(bound, t.limiters);
  for (auto& fn : t.unit.functions) ins.block(fn.body);
}

Template extract(const ExtractionRequest& req) {
  if (!req.program) throw ExtractError("no program");
  const Program& src = *req.program;
  int fi = src.findFunction(req.entry);
  if (fi < 0) throw ExtractError("entry '" + req.entry + "' not found");
  const FunctionDecl& entry = src.functions[fi];
  if (!entry.receiver.empty() && entry.name == "init") throw ExtractError("init methods cannot be entries");

  Template t;
  t.name = req.name.empty() ? req.entry : req.name;
  t.entry = req.entry;
  t.mode = req.mode;
  t.kinds = req.kinds;
  t.unit = src.clone();
  if (mentionsLimiterPrefix(t.unit)) throw ExtractError("program already uses the reserved _lim prefix");
  t.unit.entry = req.entry;
  t.unit.harnessLoops.reset();

  std::vector<Type> paramTypes;
  if (!entry.receiver.empty()) paramTypes.push_back(Type::recordRef(entry.receiver));
  for (const auto& prm : entry.params) paramTypes.push_back(prm.type);

  std::vector<int> valHoleYields;
  switch (req.mode) {
    case InputMode::Embedded: {
      if (!src.args) throw ExtractError("program has no args block");
      if (src.entry && *src.entry != req.entry) throw ExtractError("args block belongs to entry " + *src.entry);
      ArgProvider pr;
      pr.kind = ArgProvider::Kind::ArgumentsMethod;
      t.argProviders.push_back(std::move(pr));
      break;
    }
    case InputMode::TestBased: {
      const auto& seq = req.recordedInput;
      if (seq.steps.empty() || seq.steps.back().kind != corpus::Step::Kind::Call ||
          seq.steps.back().callee != req.entry)
        throw ExtractError("recorded input does not end in a call to " + req.entry);
      const auto& last = seq.steps.back();
      if (last.args.size() != paramTypes.size()) throw ExtractError("recorded input arity mismatch");
      std::vector<std::string> yields;
      for (const auto& a : last.args) yields.push_back(corpus::CallSequence::argText(a, ""));
      std::string body = seq.render("", static_cast<int>(seq.steps.size()) - 1, 1);
      t.unit.args = parseArgs(argsText(req.entry, body, yields));
      ArgProvider pr;
      pr.kind = ArgProvider::Kind::ArgumentsMethod;
      pr.sequence = seq;
      t.argProviders.push_back(std::move(pr));
      break;
    }
    case InputMode::PoolBased: {
      corpus::Rng rng(req.seed);
      std::string body;
      std::vector<std::string> yields;
      for (std::size_t i = 0; i < paramTypes.size(); ++i) {
        const Type& pt = paramTypes[i];
        ArgProvider pr;
        pr.paramIndex = static_cast<int>(i);
        pr.type = pt;
        if (pt.isPrimitive()) {
          pr.kind = ArgProvider::Kind::ValHole;
          Value v = interp::randomValue(pt, rng);
          yields.push_back(printLiteral(v));
          if (req.kinds.allows(HoleKind::Val)) valHoleYields.push_back(static_cast<int>(i));
        } else if (pt.kind == TypeKind::Unit || pt.kind == TypeKind::Null) {
          throw ExtractError("parameter " + std::to_string(i) + " of " + req.entry + " has no constructible type");
        } else if (auto seq = req.pool ? corpus::pickFromPool(pt, *req.pool, rng) : std::nullopt) {
          pr.kind = ArgProvider::Kind::PoolSequence;
          std::string prefix = "a" + std::to_string(i) + "_";
          body += seq->render(prefix);
          yields.push_back(corpus::CallSequence::bindName(seq->result, prefix));
          pr.sequence = std::move(*seq);
        } else if (pt.isArray()) {
          pr.kind = ArgProvider::Kind::EmptyArray;
          yields.push_back("new " + toString(pt.elementType()) + "[0]");
        } else {
          pr.kind = ArgProvider::Kind::NullDefault;
          yields.push_back("null");
        }
        t.argProviders.push_back(std::move(pr));
      }
      t.unit.args = parseArgs(argsText(req.entry, body, yields));
      break;
    }
  }
  if (req.mode != InputMode::Embedded) {
    try {
      typecheck(t.unit);
    } catch (const std::exception& e) {
      throw ExtractError(std::string("argument provider does not typecheck: ") + e.what());
    }
  }

  Rewriter rw(req.kinds);
  for (auto& g : t.unit.globals)
    if (!g.isFinal) rw.expr(g.init);
  for (auto& fn : t.unit.functions) rw.block(fn.body);
  for (int i : valHoleYields) {
    ExprPtr& y = t.unit.args->yields[static_cast<std::size_t>(i)];
    y->type = paramTypes[static_cast<std::size_t>(i)];
    y = holeNode(leaf(HoleKind::Val, *y), y->span);
  }
  numberHoles(t.unit);
  insertLoopLimiters(t, req.limiterBound);
  try {
    typecheck(t.unit);
  } catch (const std::exception& e) {
    throw ExtractError(std::string("template does not typecheck: ") + e.what());
  }
  collectHoles(t);
  return t;
}

HoleCounts countHoles(const Template& t) {
  HoleCounts c;
  for (const auto& [id, h] : t.holes) countSpec(h, c);
  c.limiters = static_cast<int>(t.limiters.size());
  return c;
}

HoleCounts scanHoleCounts(const std::string& text) {
  HoleCounts c;
  static const std::regex kindRe(R"(kind=([A-Za-z]+))");
  for (auto it = std::sregex_iterator(text.begin(), text.end(), kindRe); it != std::sregex_iterator(); ++it) {
    auto k = holeKindFromString((*it)[1].str());
    if (k && *k != HoleKind::Fixed) ++c.byKind[*k];
  }
  static const std::regex limRe(R"(\bint _lim[0-9]+ = 0;)");
  c.limiters = static_cast<int>(std::distance(std::sregex_iterator(text.begin(), text.end(), limRe), std::sregex_iterator()));
  return c;
}

Program fillWithSources(const Template& t) {
  Program p = t.unit.clone();
  auto fill = [](auto&& self, ExprPtr& slot) -> void {
    if (slot->kind == ExprKind::Hole) {
      slot = slot->hole->source->clone();
      return;
    }
    for (auto& k : slot->kids) self(self, k);
  };
  auto fillStmt = [&](auto&& self, Stmt& s) -> void {
    if (s.init) self(self, *s.init);
    if (s.target) fill(fill, s.target);
    if (s.expr) fill(fill, s.expr);
    if (s.update) self(self, *s.update);
    for (auto& b : s.body) self(self, *b);
    for (auto& b : s.elseBody) self(self, *b);
  };
  for (auto& g : p.globals) fill(fill, g.init);
  for (auto& fn : p.functions) {
    stripLimiters(fn.body);
    for (auto& s : fn.body) fillStmt(fillStmt, *s);
  }
  if (p.args) {
    for (auto& s : p.args->body) fillStmt(fillStmt, *s);
    for (auto& y : p.args->yields) fill(fill, y);
  }
  typecheck(p);
  return p;
}

std::string metadataJson(const Template& t) {
  HoleCounts c = countHoles(t);
  json holes = json::object();
  for (int i = 0; i < static_cast<int>(HoleKind::Fixed); ++i) {
    auto k = static_cast<HoleKind>(i);
    holes[spelling(k)] = c.of(k);
  }
  json j{{"template", t.name},      {"file", t.name + ".mjt"},  {"entry", t.entry},
         {"mode", modeName(t.mode)}, {"holeKinds", t.kinds.toString()}, {"holes", holes},
         {"outerHoles", t.holes.size()}, {"limiters", c.limiters},  {"total", c.total()}};
  return j.dump();
}

std::string writeTemplate(const Template& t, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ofstream out(dir / (t.name + ".mjt"), std::ios::binary);
  if (!out) throw std::runtime_error("cannot write template " + t.name);
  out << print(t.unit);
  return metadataJson(t);
}

Template loadTemplate(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + file.string());
  std::stringstream ss;
  ss << in.rdbuf();
  Template t;
  t.name = file.stem().string();
  t.unit = parse(ss.str());
  if (!t.unit.entry) throw ExtractError(file.string() + ": template has no entry");
  t.entry = *t.unit.entry;
  collectHoles(t);
  int loops = 0;
  for (const auto& fn : t.unit.functions) findLimiters(fn.body, t.limiters, loops);
  return t;
}

}  // namespace holegen::extract
