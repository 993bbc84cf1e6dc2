#include "holegen/cli/campaign.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <json.hpp>
#include <mutex>
#include <sstream>
#include <thread>

#include "holegen/corpus/corpus.hpp"
#include "holegen/lang/parser.hpp"
#include "holegen/util/seed.hpp"

namespace holegen::cli {

using json = nlohmann::json;
using difftest::ExecutableProgram;
using difftest::RunConfig;
using difftest::Verdict;
using extract::HoleCounts;
using lang::HoleKind;
using lang::Program;

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::string readAll(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void writeAll(const fs::path& p, const std::string& text) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::vector<std::string> readLines(const fs::path& p) {
  std::vector<std::string> out;
  std::istringstream in(readAll(p));
  std::string line;
  while (std::getline(in, line))
    if (!trim(line).empty()) out.push_back(line);
  return out;
}

void freshDir(const fs::path& d) {
  fs::remove_all(d);
  fs::create_directories(d);
}

long long toInt(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  long long n = 0;
  try {
    n = std::stoll(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument(key + ": expected an integer, got '" + v + "'");
  return n;
}

double toDouble(const std::string& key, const std::string& v) {
  std::size_t used = 0;
  double d = 0;
  try {
    d = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty()) throw std::invalid_argument(key + ": expected a number, got '" + v + "'");
  return d;
}

long long positive(const std::string& key, long long n) {
  if (n <= 0) throw std::invalid_argument(key + ": must be positive");
  return n;
}

/// Runs fn(i) for i in [0, n) on up to `jobs` threads.
void parallelFor(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
  std::size_t workers = std::min<std::size_t>(n, static_cast<std::size_t>(std::max(1, jobs)));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> nextIndex{0};
  std::exception_ptr failure;
  std::mutex failureMu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = nextIndex++; i < n; i = nextIndex++) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard lock(failureMu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

std::string templateName(const std::string& program, const std::string& entry) {
  std::string e = entry;
  std::replace(e.begin(), e.end(), '.', '_');
  return program + "__" + e;
}

difftest::MatrixOptions matrixOptions(const CampaignConfig& cfg) {
  difftest::MatrixOptions opt;
  opt.timeout = cfg.testTimeout;
  opt.defaultLoops = cfg.gen.harnessLoopCount;
  opt.limits = cfg.gen.limits;
  opt.limits.wallTimeout = cfg.testTimeout;
  return opt;
}

fs::path phaseDir(const CampaignConfig& cfg, const char* phase) { return cfg.outputDir / phase; }

genharness::HarnessResult resultFromSummary(const std::string& s) {
  genharness::HarnessResult r;
  if (s.rfind("CHECKSUM ", 0) == 0) {
    r.kind = genharness::HarnessResult::Kind::Checksum;
    r.checksum = std::stoull(s.substr(9), nullptr, 16);
    return r;
  }
  r.kind = genharness::HarnessResult::Kind::Crash;
  std::string kind = s.rfind("CRASH ", 0) == 0 ? s.substr(6) : s;
  for (auto k : {genharness::CrashKind::UnfilledHole, genharness::CrashKind::EngineInternal,
                 genharness::CrashKind::Limit})
    if (kind == genharness::crashName(k)) r.crash = k;
  return r;
}

TestSummary testPrograms(const CampaignConfig& cfg, const std::vector<fs::path>& files, const fs::path& root) {
  auto matrix = cfg.effectiveMatrix();
  auto opt = matrixOptions(cfg);
  std::vector<Verdict> verdicts(files.size());
  parallelFor(files.size(), cfg.jobs, [&](std::size_t i) {
    auto x = ExecutableProgram::fromFile(files[i]);
    verdicts[i] = difftest::compare(difftest::runMatrix(x, matrix, opt));
  });

  TestSummary s;
  std::string lines;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const auto& v = verdicts[i];
    std::string rel = fs::relative(files[i], root).generic_string();
    json results = json::array();
    for (const auto& r : v.results) results.push_back({r.config, r.summary()});
    json j{{"program", rel}, {"verdict", difftest::verdictName(v.kind)}, {"results", results}};
    lines += j.dump() + "\n";
    ++s.programs;
    switch (v.kind) {
      case Verdict::Kind::Consistent: ++s.consistent; break;
      case Verdict::Kind::Mismatch: ++s.mismatches; break;
      case Verdict::Kind::CrashFailure: ++s.crashFailures; break;
    }
    if (v.failed()) s.failures.push_back({rel, v});
  }
  auto dir = phaseDir(cfg, "test");
  freshDir(dir);
  writeAll(dir / "results.jsonl", lines);
  writeAll(dir / "root.txt", fs::absolute(root).lexically_normal().string() + "\n");
  return s;
}

std::string sessionLogFor(const fs::path& programFile) {
  // <generate>/<template>/<k>/<template>.mj with sessions.jsonl beside <k>/
  auto templateDir = programFile.parent_path().parent_path();
  auto log = templateDir / "sessions.jsonl";
  if (!fs::exists(log)) return "";
  std::string index = programFile.parent_path().filename().string();
  int k = 0;
  try {
    k = std::stoi(index);
  } catch (const std::exception&) {
    return "";
  }
  for (const auto& line : readLines(log)) {
    json j = json::parse(line);
    if (j.value("session", -1) == k) return line;
  }
  return "";
}

const std::vector<std::pair<HoleKind, const char*>>& statsColumns() {
  static const std::vector<std::pair<HoleKind, const char*>> cols{
      {HoleKind::Id, "Id"},         {HoleKind::Val, "Val"},           {HoleKind::ArrAcc, "ArrAcc"},
      {HoleKind::Arith, "Arith"},   {HoleKind::Shift, "Shift"},       {HoleKind::Relation, "Relation"},
      {HoleKind::Logic, "Logic"},   {HoleKind::Cast, "Cast"}};
  return cols;
}

}  // namespace

void CampaignConfig::set(const std::string& rawKey, const std::string& rawValue) {
  std::string key = trim(rawKey);
  std::string v = trim(rawValue);
  if (key == "corpus") corpusDir = v;
  else if (key == "mode") {
    mode = extract::modeFromString(v);
    if (mode == extract::InputMode::Embedded) throw std::invalid_argument("mode: expected test or pool");
  } else if (key == "hole-kinds") holeKinds = extract::HoleKinds::parse(v);
  else if (key == "programs-per-template") gen.programsPerTemplate = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "max-fill-iterations") gen.maxFillIterations = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "template-timeout") gen.templateTimeout = toDouble(key, v);
  else if (key == "harness-loops") gen.harnessLoopCount = positive(key, toInt(key, v));
  else if (key == "max-steps") gen.limits.maxSteps = static_cast<std::uint64_t>(positive(key, toInt(key, v)));
  else if (key == "matrix") matrix = difftest::parseConfigList(v);
  else if (key == "references") references = difftest::parseConfigList(v);
  else if (key == "faults") faults = optvm::FaultSet::parse(v);
  else if (key == "output") outputDir = v;
  else if (key == "seed") seed = static_cast<std::uint64_t>(toInt(key, v));
  else if (key == "jobs") jobs = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "sequence-budget") sequenceBudget = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "templates-per-program") templatesPerProgram = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "limiter-bound") limiterBound = static_cast<int>(positive(key, toInt(key, v)));
  else if (key == "test-timeout") testTimeout = toDouble(key, v);
  else if (key == "reruns") reruns = static_cast<int>(positive(key, toInt(key, v)));
  else throw std::invalid_argument("unknown config key '" + key + "'");
  if (key == "template-timeout" && gen.templateTimeout <= 0) throw std::invalid_argument(key + ": must be positive");
  if (key == "test-timeout" && testTimeout <= 0) throw std::invalid_argument(key + ": must be positive");
}

void CampaignConfig::loadFile(const fs::path& file) {
  std::istringstream in(readAll(file));
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (trim(line).empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument(file.string() + ":" + std::to_string(n) + ": expected 'key = value'");
    try {
      set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(file.string() + ":" + std::to_string(n) + ": " + e.what());
    }
  }
}

std::vector<RunConfig> CampaignConfig::effectiveMatrix() const {
  auto m = matrix;
  if (!faults.any()) return m;
  for (auto it = m.rbegin(); it != m.rend(); ++it) {
    if (it->backend != difftest::Backend::OptVM) continue;
    auto merged = optvm::FaultSet::parse(it->faults.toString() + "," + faults.toString());
    *it = RunConfig::vm(it->level, merged);
    return m;
  }
  m.push_back(RunConfig::vm(optvm::OptLevel::L2, faults));
  return m;
}

std::string CampaignConfig::describe() const {
  auto list = [](const std::vector<RunConfig>& cs) {
    std::string s;
    for (const auto& c : cs) s += (s.empty() ? "" : "; ") + c.toString();
    return s;
  };
  std::ostringstream o;
  o << "corpus = " << corpusDir.string() << "\n"
    << "mode = " << extract::modeName(mode) << "\n"
    << "hole-kinds = " << holeKinds.toString() << "\n"
    << "programs-per-template = " << gen.programsPerTemplate << "\n"
    << "max-fill-iterations = " << gen.maxFillIterations << "\n"
    << "template-timeout = " << gen.templateTimeout << "\n"
    << "harness-loops = " << gen.harnessLoopCount << "\n"
    << "max-steps = " << gen.limits.maxSteps << "\n"
    << "matrix = " << list(matrix) << "\n"
    << "references = " << list(references) << "\n"
    << "faults = " << (faults.any() ? faults.toString() : "none") << "\n"
    << "output = " << outputDir.string() << "\n"
    << "seed = " << seed << "\n"
    << "jobs = " << jobs << "\n"
    << "sequence-budget = " << sequenceBudget << "\n"
    << "templates-per-program = " << templatesPerProgram << "\n"
    << "limiter-bound = " << limiterBound << "\n"
    << "test-timeout = " << testTimeout << "\n"
    << "reruns = " << reruns << "\n";
  return o.str();
}

std::vector<fs::path> listFiles(const fs::path& dir, const std::string& ext, bool recursive) {
  std::vector<fs::path> out;
  if (!fs::is_directory(dir)) return out;
  auto take = [&](const fs::directory_entry& e) {
    if (e.is_regular_file() && e.path().extension() == ext) out.push_back(e.path());
  };
  if (recursive)
    for (const auto& e : fs::recursive_directory_iterator(dir)) take(e);
  else
    for (const auto& e : fs::directory_iterator(dir)) take(e);
  std::sort(out.begin(), out.end());
  return out;
}

CollectSummary cmdCollect(const CampaignConfig& cfg) {
  auto files = listFiles(cfg.corpusDir, ".mj", false);
  if (!fs::is_directory(cfg.corpusDir)) throw PhaseError("collect", "no corpus directory " + cfg.corpusDir.string());
  auto dir = phaseDir(cfg, "collect");
  freshDir(dir);
  struct Item {
    std::vector<corpus::CallSequence> seqs;
    corpus::ObjectPool pool;
    bool embedded = false;
  };
  std::vector<Item> items(files.size());
  parallelFor(files.size(), cfg.jobs, [&](std::size_t i) {
    Program p;
    try {
      p = lang::parse(readAll(files[i]));
    } catch (const std::exception& e) {
      throw PhaseError("collect", files[i].string() + ": " + e.what());
    }
    if (p.entry && p.args) {
      items[i].embedded = true;
      return;
    }
    std::string stem = files[i].stem().string();
    auto seed = util::splitSeed(cfg.seed, {util::nameHash("collect"), util::nameHash(stem)});
    items[i].seqs = corpus::generateSequences(p, cfg.sequenceBudget, seed);
    items[i].pool = corpus::buildPool(items[i].seqs);
  });
  CollectSummary s;
  for (std::size_t i = 0; i < files.size(); ++i) {
    ++s.programs;
    if (items[i].embedded) continue;
    std::string stem = files[i].stem().string();
    corpus::saveSequences(dir / (stem + ".seqs.jsonl"), items[i].seqs);
    corpus::savePool(dir / (stem + ".pool.jsonl"), items[i].pool);
    s.sequences += static_cast<int>(items[i].seqs.size());
    for (const auto& [t, v] : items[i].pool.byType) s.poolEntries += static_cast<int>(v.size());
  }
  return s;
}

ExtractSummary cmdExtract(const CampaignConfig& cfg) {
  if (!fs::is_directory(cfg.corpusDir)) throw PhaseError("extract", "no corpus directory " + cfg.corpusDir.string());
  auto files = listFiles(cfg.corpusDir, ".mj", false);
  auto collectDir = phaseDir(cfg, "collect");
  auto dir = phaseDir(cfg, "extract");
  freshDir(dir);

  ExtractSummary s;
  std::string meta, errors;
  for (const auto& file : files) {
    std::string stem = file.stem().string();
    Program p = lang::parse(readAll(file));
    std::vector<extract::ExtractionRequest> reqs;
    corpus::ObjectPool pool;
    std::vector<corpus::EntryInput> chosen;
    if (p.entry && p.args) {
      extract::ExtractionRequest r;
      r.entry = *p.entry;
      r.mode = extract::InputMode::Embedded;
      reqs.push_back(r);
    } else {
      auto seqFile = collectDir / (stem + ".seqs.jsonl");
      if (!fs::exists(seqFile)) throw PhaseError("extract", "missing collection output " + seqFile.string());
      auto entries = corpus::toEntries(corpus::loadSequences(seqFile));
      std::stable_sort(entries.begin(), entries.end(),
                       [](const auto& a, const auto& b) { return a.entry < b.entry; });
      for (auto& e : entries) {
        if (!chosen.empty() && chosen.back().entry == e.entry) continue;
        if (static_cast<int>(chosen.size()) >= cfg.templatesPerProgram) break;
        chosen.push_back(std::move(e));
      }
      if (cfg.mode == extract::InputMode::PoolBased) pool = corpus::loadPool(collectDir / (stem + ".pool.jsonl"));
      for (const auto& e : chosen) {
        extract::ExtractionRequest r;
        r.entry = e.entry;
        r.mode = cfg.mode;
        r.recordedInput = e.input;
        reqs.push_back(r);
      }
    }
    for (auto& r : reqs) {
      r.program = &p;
      r.pool = &pool;
      r.kinds = cfg.holeKinds;
      r.limiterBound = cfg.limiterBound;
      r.name = r.mode == extract::InputMode::Embedded ? stem : templateName(stem, r.entry);
      r.seed = util::splitSeed(cfg.seed, {util::nameHash("extract"), util::nameHash(r.name)});
      try {
        auto t = extract::extract(r);
        json j = json::parse(extract::writeTemplate(t, dir));
        j["source"] = stem;
        meta += j.dump() + "\n";
        ++s.templates;
        s.counts += extract::countHoles(t);
      } catch (const extract::ExtractError& e) {
        ++s.errors;
        errors += r.name + "\t" + e.what() + "\n";
      }
    }
  }
  writeAll(dir / "templates.jsonl", meta);
  if (!errors.empty()) writeAll(dir / "errors.tsv", errors);
  return s;
}

GenerateSummary cmdGenerate(const CampaignConfig& cfg) {
  if (!fs::is_directory(phaseDir(cfg, "extract")))
    throw PhaseError("generate", "no templates under " + phaseDir(cfg, "extract").string());
  auto files = listFiles(phaseDir(cfg, "extract"), ".mjt", false);
  auto dir = phaseDir(cfg, "generate");
  freshDir(dir);
  auto gen = cfg.gen;
  gen.rngSeed = util::splitSeed(cfg.seed, {util::nameHash("generate")});
  std::vector<genharness::GenerateResult> results(files.size());
  parallelFor(files.size(), cfg.jobs, [&](std::size_t i) {
    extract::Template t;
    try {
      t = extract::loadTemplate(files[i]);
    } catch (const std::exception& e) {
      throw PhaseError("generate", files[i].string() + ": " + e.what());
    }
    results[i] = genharness::generate(t, gen);
    genharness::writeGenerated(results[i], t.name, dir / t.name);
  });
  GenerateSummary s;
  for (const auto& r : results) {
    ++s.templates;
    s.programs += static_cast<int>(r.programs.size());
    s.sessions += static_cast<int>(r.sessions.size());
    for (const auto& sess : r.sessions) ++s.byStatus[sess.status];
    if (r.timedOut) ++s.timedOut;
  }
  return s;
}

TestSummary cmdTest(const CampaignConfig& cfg) {
  auto root = phaseDir(cfg, "generate");
  if (!fs::is_directory(root)) throw PhaseError("test", "no generated programs under " + root.string());
  return testPrograms(cfg, listFiles(root, ".mj", true), root);
}

TestSummary testDirectory(const CampaignConfig& cfg, const fs::path& dir) {
  if (!fs::is_directory(dir)) throw PhaseError("test", "no directory " + dir.string());
  return testPrograms(cfg, listFiles(dir, ".mj", true), dir);
}

PruneSummary cmdPrune(const CampaignConfig& cfg) {
  auto testDir = phaseDir(cfg, "test");
  if (!fs::exists(testDir / "results.jsonl")) throw PhaseError("prune", "no test results under " + testDir.string());
  fs::path root = trim(readAll(testDir / "root.txt"));
  auto matrix = cfg.effectiveMatrix();
  auto opt = matrixOptions(cfg);

  struct Failure {
    ExecutableProgram program;
    Verdict verdict;
    difftest::PruneResult pruned;
    std::string key;
  };
  std::vector<Failure> failures;
  for (const auto& line : readLines(testDir / "results.jsonl")) {
    json j = json::parse(line);
    if (j.at("verdict").get<std::string>() == difftest::verdictName(Verdict::Kind::Consistent)) continue;
    Failure f;
    f.program = ExecutableProgram::fromFile(root / j.at("program").get<std::string>());
    f.program.name = j.at("program").get<std::string>();
    f.program.sessionLog = sessionLogFor(f.program.file);
    std::vector<difftest::RunResult> results;
    for (const auto& r : j.at("results"))
      results.push_back({r.at(0).get<std::string>(), resultFromSummary(r.at(1).get<std::string>())});
    f.verdict = difftest::compare(results);
    failures.push_back(std::move(f));
  }
  parallelFor(failures.size(), cfg.jobs, [&](std::size_t i) {
    auto& f = failures[i];
    f.pruned = difftest::prune(f.program, f.verdict, cfg.references, cfg.reruns, opt);
    if (f.pruned.isBug()) f.key = difftest::dedupKey(f.program, f.verdict, matrix);
  });

  auto dir = phaseDir(cfg, "prune");
  freshDir(dir);
  fs::remove_all(cfg.outputDir / "bugs");
  PruneSummary s;
  std::string lines;
  std::vector<difftest::BugReport> bugs;
  for (const auto& f : failures) {
    ++s.failures;
    json j{{"program", f.program.name},
           {"verdict", difftest::verdictName(f.verdict.kind)},
           {"pruned", f.pruned.describe()}};
    if (f.pruned.isBug()) {
      ++s.bugs;
      ++s.bugKeys[f.key];
      j["key"] = f.key;
      bugs.push_back({f.program, f.verdict, f.pruned, f.key, matrix});
    } else {
      ++s.falsePositives;
    }
    lines += j.dump() + "\n";
  }
  writeAll(dir / "verdicts.jsonl", lines);
  difftest::report(bugs, cfg.outputDir / "bugs");
  return s;
}

RunAllSummary cmdRunAll(const CampaignConfig& cfg) {
  auto start = std::chrono::steady_clock::now();
  auto startWall = std::chrono::system_clock::now();
  fs::create_directories(cfg.outputDir);
  writeAll(cfg.outputDir / "config.txt", cfg.describe());
  RunAllSummary s;
  s.collect = cmdCollect(cfg);
  s.extract = cmdExtract(cfg);
  s.generate = cmdGenerate(cfg);
  s.test = cmdTest(cfg);
  s.prune = cmdPrune(cfg);
  auto rows = cmdStats(phaseDir(cfg, "extract"));
  writeAll(cfg.outputDir / "stats.tsv", statsTsv(rows));
  s.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  auto stamp = [](std::chrono::system_clock::time_point t) {
    std::time_t tt = std::chrono::system_clock::to_time_t(t);
    std::tm tm{};
    gmtime_r(&tt, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return std::string(buf);
  };
  std::ostringstream o;
  o << "started " << stamp(startWall) << "\n"
    << "finished " << stamp(std::chrono::system_clock::now()) << "\n"
    << "seconds " << std::fixed << std::setprecision(1) << s.seconds << "\n"
    << "collect programs=" << s.collect.programs << " sequences=" << s.collect.sequences
    << " pool=" << s.collect.poolEntries << "\n"
    << "extract templates=" << s.extract.templates << " errors=" << s.extract.errors
    << " holes=" << s.extract.counts.total() << "\n"
    << "generate templates=" << s.generate.templates << " sessions=" << s.generate.sessions
    << " programs=" << s.generate.programs << " timedOut=" << s.generate.timedOut << "\n"
    << "test programs=" << s.test.programs << " consistent=" << s.test.consistent
    << " mismatch=" << s.test.mismatches << " crash=" << s.test.crashFailures << "\n"
    << "prune failures=" << s.prune.failures << " bugs=" << s.prune.bugs
    << " falsePositives=" << s.prune.falsePositives << "\n";
  for (const auto& [k, n] : s.prune.bugKeys) o << "bug " << k << " " << n << "\n";
  writeAll(cfg.outputDir / "summary.txt", o.str());
  return s;
}

std::vector<StatsRow> cmdStats(const fs::path& templatesDir) {
  std::map<std::string, HoleCounts> byProgram;
  auto meta = templatesDir / "templates.jsonl";
  if (fs::exists(meta)) {
    for (const auto& line : readLines(meta)) {
      json j = json::parse(line);
      HoleCounts c;
      for (const auto& [name, n] : j.at("holes").items())
        if (auto k = lang::holeKindFromString(name); k && n.get<int>() > 0) c.byKind[*k] = n.get<int>();
      c.limiters = j.at("limiters").get<int>();
      byProgram[j.value("source", j.at("template").get<std::string>())] += c;
    }
  } else {
    for (const auto& f : listFiles(templatesDir, ".mjt", false)) {
      std::string name = f.stem().string();
      byProgram[name.substr(0, name.find("__"))] += extract::scanHoleCounts(readAll(f));
    }
  }
  std::vector<StatsRow> rows;
  HoleCounts total;
  for (const auto& [name, c] : byProgram) {
    rows.push_back({name, c});
    total += c;
  }
  rows.push_back({"total", total});
  return rows;
}

std::string statsTsv(const std::vector<StatsRow>& rows) {
  std::string out = "program";
  for (const auto& [k, name] : statsColumns()) out += std::string("\t") + name;
  out += "\tLimiters\tTotal\n";
  for (const auto& r : rows) {
    out += r.name;
    for (const auto& [k, name] : statsColumns()) out += "\t" + std::to_string(r.counts.of(k));
    out += "\t" + std::to_string(r.counts.limiters) + "\t" + std::to_string(r.counts.total()) + "\n";
  }
  return out;
}

std::string statsTable(const std::vector<StatsRow>& rows) {
  std::vector<std::vector<std::string>> cells;
  std::istringstream in(statsTsv(rows));
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, '\t')) row.push_back(cell);
    cells.push_back(row);
  }
  std::vector<std::size_t> width;
  for (const auto& row : cells)
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (width.size() <= i) width.push_back(0);
      width[i] = std::max(width[i], row[i].size());
    }
  std::ostringstream o;
  for (const auto& row : cells) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i == 0) o << std::left << std::setw(static_cast<int>(width[i])) << row[i];
      else o << "  " << std::right << std::setw(static_cast<int>(width[i])) << row[i];
    }
    o << "\n";
  }
  return o.str();
}

}  // namespace holegen::cli
