#include "holegen/difftest/difftest.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "holegen/interp/interp.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/optvm/vm.hpp"
#include "holegen/util/process.hpp"
#include "holegen/util/seed.hpp"

namespace holegen::difftest {

using json = nlohmann::json;
using genharness::HarnessResult;

namespace {

class OwnedInterpEngine : public interp::Engine {
 public:
  OwnedInterpEngine(const Program& p, const interp::ExecLimits& limits)
      : oracle_(interp::HoleOracle::trapping()), engine_(p, oracle_, limits) {}

  interp::Outcome initGlobals(lang::GlobalState& st) override { return engine_.initGlobals(st); }
  interp::Outcome runArgs(lang::GlobalState& st, std::vector<lang::Value>& args) override {
    return engine_.runArgs(st, args);
  }
  interp::Outcome callEntry(lang::GlobalState& st, const std::vector<lang::Value>& args) override {
    return engine_.callEntry(st, args);
  }

 private:
  interp::HoleOracle oracle_;
  interp::InterpEngine engine_;
};

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

HarnessResult crashResult(CrashKind k, std::string detail) {
  HarnessResult r;
  r.kind = HarnessResult::Kind::Crash;
  r.crash = k;
  r.detail = std::move(detail);
  return r;
}

std::string readAll(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeAll(const std::filesystem::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::filesystem::path materialize(const ExecutableProgram& x) {
  if (!x.file.empty()) return x.file;
  auto dir = std::filesystem::temp_directory_path() / "holegen_exec";
  std::filesystem::create_directories(dir);
  auto path = dir / (genharness::hex16(util::nameHash(x.text)) + ".mj");
  if (!std::filesystem::exists(path)) writeAll(path, x.text);
  return path;
}

RunResult runExternal(const ExecutableProgram& x, const RunConfig& c, const MatrixOptions& opt) {
  RunResult rr;
  rr.config = c.name;
  auto argv = util::splitCommand(c.command);
  for (const auto& f : c.flags) argv.push_back(f);
  argv.push_back(materialize(x).string());
  auto start = std::chrono::steady_clock::now();
  auto pr = util::runProcess(argv, opt.timeout);
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (pr.timedOut) {
    rr.result = crashResult(CrashKind::Limit, "timeout");
  } else if (pr.spawnFailed || pr.signaled) {
    rr.result = crashResult(CrashKind::EngineInternal, pr.spawnFailed ? "spawn failed" : "killed by signal");
  } else if (pr.exitCode == 0) {
    std::istringstream in(pr.out);
    std::string line;
    bool found = false;
    while (std::getline(in, line)) {
      if (line.rfind("CHECKSUM ", 0) == 0 && line.size() >= 25) {
        rr.result.kind = HarnessResult::Kind::Checksum;
        rr.result.checksum = std::stoull(line.substr(9, 16), nullptr, 16);
        found = true;
      }
    }
    if (!found) rr.result = crashResult(CrashKind::EngineInternal, "no CHECKSUM line");
  } else if (pr.exitCode == 10) {
    rr.result = crashResult(CrashKind::UnfilledHole, "exit 10");
  } else if (pr.exitCode == 12) {
    rr.result = crashResult(CrashKind::Limit, "exit 12");
  } else {
    rr.result = crashResult(CrashKind::EngineInternal, "exit " + std::to_string(pr.exitCode));
  }
  rr.result.seconds = secs;
  return rr;
}

const char* reasonName(PruneResult::Reason r) {
  switch (r) {
    case PruneResult::Reason::None: return "None";
    case PruneResult::Reason::NondeterministicAcrossReruns: return "NondeterministicAcrossReruns";
    case PruneResult::Reason::ReproducesUnderReference: return "ReproducesUnderReference";
  }
  return "?";
}

Verdict::Kind verdictFrom(const std::string& s) {
  if (s == "Mismatch") return Verdict::Kind::Mismatch;
  if (s == "CrashFailure") return Verdict::Kind::CrashFailure;
  return Verdict::Kind::Consistent;
}

std::string sanitize(const std::string& s) {
  std::string out;
  for (char c : s) out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out;
}

}  // namespace

RunConfig RunConfig::interp(std::string name) {
  RunConfig c;
  c.name = std::move(name);
  c.backend = Backend::Interp;
  return c;
}

RunConfig RunConfig::vm(optvm::OptLevel level, optvm::FaultSet faults, std::string name) {
  RunConfig c;
  c.backend = Backend::OptVM;
  c.level = level;
  c.faults = faults;
  if (name.empty()) {
    name = std::string("vm-") + optvm::levelName(level);
    for (const auto& f : faults.names()) name += "+" + f;
  }
  c.name = std::move(name);
  return c;
}

RunConfig RunConfig::external(std::string name, std::string command) {
  RunConfig c;
  c.name = std::move(name);
  c.backend = Backend::External;
  c.command = std::move(command);
  return c;
}

RunConfig RunConfig::parse(const std::string& raw) {
  std::string text = trim(raw);
  auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) throw std::invalid_argument("config '" + text + "' lacks a name");
  std::string name = trim(text.substr(0, eq));
  std::string rest = trim(text.substr(eq + 1));
  std::vector<std::string> parts;
  if (rest.rfind("cmd:", 0) == 0) return external(name, trim(rest.substr(4)));
  std::stringstream ss(rest);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(trim(part));
  if (parts.empty()) throw std::invalid_argument("config '" + text + "' lacks a backend");
  if (parts[0] == "interp") {
    if (parts.size() != 1) throw std::invalid_argument("interp takes no options: '" + text + "'");
    return interp(name);
  }
  if (parts[0] == "vm") {
    if (parts.size() < 2 || parts.size() > 3) throw std::invalid_argument("expected vm:<level>[:<faults>] in '" + text + "'");
    auto level = optvm::levelFromString(parts[1]);
    if (!level) throw std::invalid_argument("unknown level '" + parts[1] + "'");
    return vm(*level, optvm::FaultSet::parse(parts.size() == 3 ? parts[2] : ""), name);
  }
  throw std::invalid_argument("unknown backend '" + parts[0] + "'");
}

std::string RunConfig::toString() const {
  switch (backend) {
    case Backend::Interp: return name + "=interp";
    case Backend::OptVM: {
      std::string s = name + "=vm:" + optvm::levelName(level);
      if (faults.any()) s += ":" + faults.toString();
      return s;
    }
    case Backend::External: return name + "=cmd:" + command;
  }
  return name;
}

bool RunConfig::isReference() const {
  return backend == Backend::Interp || (backend == Backend::OptVM && level == optvm::OptLevel::L0 && !faults.any());
}

std::vector<RunConfig> parseConfigList(const std::string& text) {
  std::vector<RunConfig> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ';'))
    if (!trim(item).empty()) out.push_back(RunConfig::parse(item));
  return out;
}

std::vector<RunConfig> defaultMatrix() {
  return {RunConfig::interp(), RunConfig::vm(optvm::OptLevel::L0), RunConfig::vm(optvm::OptLevel::L1),
          RunConfig::vm(optvm::OptLevel::L2)};
}

std::vector<RunConfig> defaultReferences() { return {RunConfig::interp(), RunConfig::vm(optvm::OptLevel::L0)}; }

ExecutableProgram ExecutableProgram::fromFile(const std::filesystem::path& file) {
  ExecutableProgram x;
  x.name = file.stem().string();
  x.file = file;
  x.text = readAll(file);
  return x;
}

ExecutableProgram ExecutableProgram::fromText(std::string name, std::string text) {
  ExecutableProgram x;
  x.name = std::move(name);
  x.text = std::move(text);
  return x;
}

std::string RunResult::summary() const {
  if (result.isCrash()) return std::string("CRASH ") + genharness::crashName(result.crash);
  return "CHECKSUM " + genharness::hex16(result.checksum);
}

std::unique_ptr<interp::Engine> makeEngine(const RunConfig& c, const Program& p, const interp::ExecLimits& limits) {
  switch (c.backend) {
    case Backend::Interp: return std::make_unique<OwnedInterpEngine>(p, limits);
    case Backend::OptVM: return std::make_unique<optvm::VmEngine>(p, c.level, c.faults, limits);
    case Backend::External: break;
  }
  throw std::invalid_argument("config " + c.name + " is not an in-process engine");
}

RunResult runOne(const ExecutableProgram& x, const Program* parsed, const RunConfig& c, const MatrixOptions& opt) {
  if (c.backend == Backend::External) return runExternal(x, c, opt);
  RunResult rr;
  rr.config = c.name;
  Program local;
  try {
    if (!parsed) {
      local = lang::parse(x.text);
      parsed = &local;
    }
    interp::ExecLimits limits = opt.limits;
    limits.wallTimeout = std::min(limits.wallTimeout, opt.timeout);
    auto engine = makeEngine(c, *parsed, limits);
    rr.result = genharness::runHarness(*engine, genharness::harnessLoops(*parsed, opt.defaultLoops), opt.timeout);
  } catch (const std::exception& e) {
    rr.result = crashResult(CrashKind::EngineInternal, e.what());
  }
  return rr;
}

std::vector<RunResult> runMatrix(const ExecutableProgram& x, const std::vector<RunConfig>& configs,
                                 const MatrixOptions& opt) {
  std::vector<RunResult> out;
  std::optional<Program> parsed;
  try {
    parsed = lang::parse(x.text);
  } catch (const std::exception&) {
  }
  for (const auto& c : configs) out.push_back(runOne(x, parsed ? &*parsed : nullptr, c, opt));
  return out;
}

const char* verdictName(Verdict::Kind k) {
  switch (k) {
    case Verdict::Kind::Consistent: return "Consistent";
    case Verdict::Kind::Mismatch: return "Mismatch";
    case Verdict::Kind::CrashFailure: return "CrashFailure";
  }
  return "?";
}

Verdict compare(const std::vector<RunResult>& results) {
  Verdict v;
  v.results = results;
  std::set<std::uint64_t> sums;
  for (const auto& r : results) {
    if (r.isCrash()) {
      if (!v.crashed) v.crashKind = r.result.crash;
      v.crashed = true;
      v.crashConfigs.push_back(r.config);
    } else {
      sums.insert(r.result.checksum);
    }
  }
  v.mismatch = sums.size() >= 2;
  v.kind = v.crashed ? Verdict::Kind::CrashFailure : v.mismatch ? Verdict::Kind::Mismatch : Verdict::Kind::Consistent;
  return v;
}

std::string PruneResult::describe() const {
  if (kind == Kind::Bug) return "Bug";
  return std::string("FalsePositive(") + reasonName(reason) + ")";
}

PruneResult prune(const ExecutableProgram& x, const Verdict& v, const std::vector<RunConfig>& refs, int reruns,
                  const MatrixOptions& opt) {
  PruneResult out;
  if (!v.failed()) return out;
  std::optional<Program> parsed;
  try {
    parsed = lang::parse(x.text);
  } catch (const std::exception&) {
  }
  for (int rep = 0; rep < reruns; ++rep)
    for (const auto& c : refs) out.reruns.push_back(runOne(x, parsed ? &*parsed : nullptr, c, opt));
  bool anyCrash = false;
  std::set<std::uint64_t> sums;
  for (const auto& r : out.reruns) {
    if (r.isCrash()) anyCrash = true;
    else sums.insert(r.result.checksum);
  }
  if (anyCrash) {
    out.reason = PruneResult::Reason::ReproducesUnderReference;
  } else if (sums.size() != 1) {
    out.reason = PruneResult::Reason::NondeterministicAcrossReruns;
  } else {
    out.kind = PruneResult::Kind::Bug;
  }
  return out;
}

std::string dedupKey(const ExecutableProgram& x, const Verdict& v, const std::vector<RunConfig>& configs) {
  std::set<std::string> fired;
  try {
    Program p = lang::parse(x.text);
    for (const auto& c : configs) {
      if (c.backend != Backend::OptVM || !c.faults.any()) continue;
      auto m = optvm::compile(p, c.level, c.faults);
      fired.insert(m.firedFaults.begin(), m.firedFaults.end());
    }
  } catch (const std::exception&) {
  }
  if (!fired.empty()) {
    std::string key = "fault";
    for (const auto& f : fired) key += "-" + f;
    return key;
  }
  std::map<std::string, int> groups;
  std::string sig;
  for (const auto& r : v.results) {
    std::string cls = r.isCrash() ? r.summary() : genharness::hex16(r.result.checksum);
    auto [it, fresh] = groups.emplace(cls, static_cast<int>(groups.size()));
    sig += r.config + "=" + (r.isCrash() ? r.summary() : "G" + std::to_string(it->second)) + ";";
  }
  return "sig-" + genharness::hex16(util::nameHash(sig));
}

std::vector<std::filesystem::path> report(const std::vector<BugReport>& bugs, const std::filesystem::path& dir) {
  std::vector<std::filesystem::path> out;
  std::filesystem::create_directories(dir);
  std::map<std::string, int> perKey;
  for (const auto& b : bugs) {
    int n = perKey[b.key]++;
    auto sub = dir / (sanitize(b.key) + "-" + std::to_string(n));
    std::filesystem::create_directories(sub);
    writeAll(sub / "program.mj", b.program.text);
    writeAll(sub / "session.json", b.program.sessionLog.empty() ? "{}\n" : b.program.sessionLog + "\n");
    std::string results = "config\tresult\n";
    for (const auto& r : b.verdict.results) results += r.config + "\t" + r.summary() + "\n";
    for (const auto& r : b.pruned.reruns) results += "rerun:" + r.config + "\t" + r.summary() + "\n";
    writeAll(sub / "results.tsv", results);
    std::string configs;
    for (const auto& c : b.configs) configs += c.toString() + "\n";
    writeAll(sub / "configs.txt", configs);
    json j{{"program", b.program.name},
           {"verdict", verdictName(b.verdict.kind)},
           {"pruned", b.pruned.describe()},
           {"key", b.key}};
    writeAll(sub / "verdict.json", j.dump() + "\n");
    out.push_back(sub);
  }
  return out;
}

bool replayBundle(const std::filesystem::path& bundle, const MatrixOptions& opt) {
  auto x = ExecutableProgram::fromFile(bundle / "program.mj");
  std::vector<RunConfig> configs;
  std::istringstream in(readAll(bundle / "configs.txt"));
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) configs.push_back(RunConfig::parse(line));
  json stored = json::parse(readAll(bundle / "verdict.json"));
  Verdict v = compare(runMatrix(x, configs, opt));
  return v.kind == verdictFrom(stored.at("verdict").get<std::string>());
}

}  // namespace holegen::difftest
