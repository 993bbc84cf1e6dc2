#pragma once

#include <string>
#include <vector>

namespace holegen::util {

struct ProcessResult {
  int exitCode = -1;  // valid when !signaled && !timedOut
  bool signaled = false;
  bool timedOut = false;
  bool spawnFailed = false;
  std::string out;
};

/// Runs argv[0] (looked up on PATH) with stdout captured and stderr discarded;
/// kills it after `timeoutSeconds`.
ProcessResult runProcess(const std::vector<std::string>& argv, double timeoutSeconds);

/// Splits a command line on whitespace (no quoting).
std::vector<std::string> splitCommand(const std::string& cmd);

}  // namespace holegen::util
