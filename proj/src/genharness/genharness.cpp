#include "holegen/genharness/genharness.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "holegen/interp/interp.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/lang/printer.hpp"
#include "holegen/util/seed.hpp"

namespace holegen::genharness {

using json = nlohmann::json;
using namespace lang;
using Clock = std::chrono::steady_clock;

namespace {

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

void substitute(ExprPtr& slot, const std::map<int, ExprPtr>& decisions) {
  if (slot->kind == ExprKind::Hole) {
    auto it = decisions.find(slot->holeId);
    if (it != decisions.end()) {
      slot = it->second->clone();
    } else {
      auto u = std::make_unique<Expr>();
      u->kind = ExprKind::Unfilled;
      u->holeId = slot->holeId;
      u->castType = slot->hole->type;
      u->span = slot->span;
      slot = std::move(u);
    }
    return;
  }
  for (auto& k : slot->kids) substitute(k, decisions);
}

void substitute(Stmt& s, const std::map<int, ExprPtr>& decisions) {
  if (s.init) substitute(*s.init, decisions);
  if (s.target) substitute(s.target, decisions);
  if (s.expr) substitute(s.expr, decisions);
  if (s.update) substitute(*s.update, decisions);
  for (auto& b : s.body) substitute(*b, decisions);
  for (auto& b : s.elseBody) substitute(*b, decisions);
}

std::string padded(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%03d", k);
  return buf;
}

}  // namespace

const char* statusName(SessionStatus s) {
  switch (s) {
    case SessionStatus::Complete: return "Complete";
    case SessionStatus::PartialAfterN: return "PartialAfterN";
    case SessionStatus::SkippedPreEntry: return "SkippedPreEntry";
    case SessionStatus::Exhausted: return "Exhausted";
  }
  return "?";
}

const char* crashName(CrashKind k) {
  switch (k) {
    case CrashKind::UnfilledHole: return "UnfilledHole";
    case CrashKind::EngineInternal: return "EngineInternal";
    case CrashKind::Limit: return "Limit";
  }
  return "?";
}

Program emitProgram(const extract::Template& t, const std::map<int, ExprPtr>& decisions, std::int64_t loops) {
  Program p = t.unit.clone();
  for (auto& g : p.globals) substitute(g.init, decisions);
  for (auto& fn : p.functions)
    for (auto& s : fn.body) substitute(*s, decisions);
  if (p.args) {
    for (auto& s : p.args->body) substitute(*s, decisions);
    for (auto& y : p.args->yields) substitute(y, decisions);
  }
  p.harnessLoops = loops;
  return p;
}

GenerateResult generate(const extract::Template& t, const GenConfig& cfg) {
  GenerateResult out;
  const auto start = Clock::now();
  const Program& unit = t.unit;
  int fi = unit.findFunction(t.entry);
  bool hasReceiver = fi >= 0 && !unit.functions[fi].receiver.empty();
  const auto N = cfg.maxFillIterations;
  const auto H = cfg.harnessLoopCount;

  for (int k = 0; k < cfg.programsPerTemplate; ++k) {
    double remaining = cfg.templateTimeout - since(start);
    if (remaining <= 0) {
      out.timedOut = true;
      break;
    }
    interp::ExecLimits limits = cfg.limits;
    limits.wallTimeout = std::min(limits.wallTimeout, remaining);

    GenSession s;
    s.index = k;
    s.seed = util::splitSeed(cfg.rngSeed, {util::nameHash(t.name), static_cast<std::uint64_t>(k)});
    auto oracle = interp::HoleOracle::filling(s.seed);
    GlobalState st;
    std::vector<Value> args;

    auto drop = [&](const interp::Outcome& o, const char* phase) {
      s.status = o.isExhausted() ? SessionStatus::Exhausted : SessionStatus::SkippedPreEntry;
      s.detail = std::string(phase) + ": " + o.describe();
    };
    auto o = interp::initGlobals(unit, st, oracle, limits);
    if (!o.isReturned()) {
      drop(o, "globals");
    } else if (o = interp::runArgs(unit, st, args, oracle, limits); !o.isReturned()) {
      drop(o, "args");
    } else if (hasReceiver && (args.empty() || args[0].tag != ValueTag::Record)) {
      s.status = SessionStatus::SkippedPreEntry;
      s.detail = "args: null receiver";
    } else {
      for (std::int64_t it = 0; it < N; ++it) {
        o = interp::callEntry(unit, st, t.entry, args, oracle, limits);
        ++s.iterations;
        if (o.isExhausted()) {
          drop(o, "entry");
          break;
        }
        bool allDecided = oracle.decisions().size() >= t.holes.size();
        if (allDecided && (H > N || s.iterations >= H)) break;
      }
      if (s.status != SessionStatus::Exhausted)
        s.status = oracle.decisions().size() >= t.holes.size() ? SessionStatus::Complete : SessionStatus::PartialAfterN;
    }
    for (const auto& [id, e] : oracle.decisions()) s.decisions[id] = printExpr(*e);

    if (s.status == SessionStatus::Exhausted && since(start) >= cfg.templateTimeout) {
      out.timedOut = true;
      out.sessions.push_back(std::move(s));
      break;
    }
    if (s.kept()) {
      Program p = emitProgram(t, oracle.decisions(), H);
      GeneratedProgram g;
      g.templateName = t.name;
      g.index = k;
      g.text = print(p);
      parse(g.text);
      g.session = s;
      out.programs.push_back(std::move(g));
    }
    out.sessions.push_back(std::move(s));
  }
  return out;
}

std::string sessionJson(const std::string& templateName, const GenSession& s) {
  json decisions = json::object();
  for (const auto& [id, text] : s.decisions) decisions[std::to_string(id)] = text;
  json j{{"template", templateName},
         {"session", s.index},
         {"seed", s.seed},
         {"status", statusName(s.status)},
         {"iterations", s.iterations},
         {"decisions", decisions}};
  if (!s.detail.empty()) j["detail"] = s.detail;
  if (s.kept()) j["file"] = padded(s.index) + "/" + templateName + ".mj";
  return j.dump();
}

void writeGenerated(const GenerateResult& r, const std::string& templateName, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  for (const auto& g : r.programs) {
    auto sub = dir / padded(g.index);
    std::filesystem::create_directories(sub);
    std::ofstream out(sub / (templateName + ".mj"), std::ios::binary);
    if (!out) throw std::runtime_error("cannot write generated program in " + sub.string());
    out << g.text;
  }
  std::ofstream log(dir / "sessions.jsonl", std::ios::binary);
  for (const auto& s : r.sessions) log << sessionJson(templateName, s) << "\n";
}

std::int64_t harnessLoops(const Program& p, std::int64_t fallback) { return p.harnessLoops.value_or(fallback); }

HarnessResult runHarness(interp::Engine& engine, std::int64_t loops, double timeoutSeconds) {
  HarnessResult r;
  const auto start = Clock::now();
  auto crash = [&](CrashKind k, std::string detail) {
    r.kind = HarnessResult::Kind::Crash;
    r.crash = k;
    r.detail = std::move(detail);
    r.seconds = since(start);
    return r;
  };
  auto crashOf = [&](const interp::Outcome& o) {
    if (o.isTrap(interp::TrapKind::UnfilledHole)) return crash(CrashKind::UnfilledHole, o.describe());
    return crash(CrashKind::Limit, o.describe());
  };
  auto fatal = [](const interp::Outcome& o) {
    return o.isExhausted() || o.isTrap(interp::TrapKind::UnfilledHole);
  };
  try {
    Checksum cs;
    GlobalState st;
    std::vector<Value> args;
    auto o = engine.initGlobals(st);
    if (o.isReturned()) o = engine.runArgs(st, args);
    if (fatal(o)) return crashOf(o);
    if (o.isTrapped()) {
      cs.updateTrap(interp::trapName(o.trap));
    } else {
      for (const auto& a : args) cs.update(a, st);
      for (std::int64_t i = 0; i < loops; ++i) {
        o = engine.callEntry(st, args);
        if (fatal(o)) return crashOf(o);
        if (o.isReturned()) cs.update(o.value, st);
        else cs.updateTrap(interp::trapName(o.trap));
        if ((i & 63) == 63 && since(start) > timeoutSeconds) return crash(CrashKind::Limit, "harness timeout");
      }
    }
    for (const auto& g : st.globals) cs.update(g, st);
    r.kind = HarnessResult::Kind::Checksum;
    r.checksum = cs.value();
  } catch (const std::exception& e) {
    return crash(CrashKind::EngineInternal, e.what());
  }
  r.seconds = since(start);
  return r;
}

}  // namespace holegen::genharness
