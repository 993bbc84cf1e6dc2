#pragma once

#include <chrono>
#include <cstdint>
#include <string>

#include "holegen/lang/value.hpp"

namespace holegen::interp {

using lang::Value;

enum class TrapKind : std::uint8_t { DivByZero, IndexOutOfBounds, NullDeref, UnfilledHole };
enum class LimitKind : std::uint8_t { Steps, HeapCells, WallTime, CallDepth };

const char* trapName(TrapKind k);
const char* limitName(LimitKind k);

/// Per-invocation resource bounds. A step is one loop-guard evaluation or one
/// function call; both backends count steps identically.
struct ExecLimits {
  std::uint64_t maxSteps = 10'000'000;
  std::size_t maxHeapCells = 4'000'000;
  double wallTimeout = 60.0;
  int maxCallDepth = 512;
};

struct Outcome {
  enum class Kind : std::uint8_t { Returned, Trapped, Exhausted };

  Kind kind = Kind::Returned;
  Value value;
  TrapKind trap = TrapKind::DivByZero;
  int holeId = -1;
  LimitKind limit = LimitKind::Steps;

  static Outcome returned(Value v) {
    Outcome o;
    o.value = v;
    return o;
  }
  static Outcome trapped(TrapKind k, int hole = -1) {
    Outcome o;
    o.kind = Kind::Trapped;
    o.trap = k;
    o.holeId = hole;
    return o;
  }
  static Outcome exhausted(LimitKind k) {
    Outcome o;
    o.kind = Kind::Exhausted;
    o.limit = k;
    return o;
  }

  bool isReturned() const { return kind == Kind::Returned; }
  bool isTrapped() const { return kind == Kind::Trapped; }
  bool isExhausted() const { return kind == Kind::Exhausted; }
  bool isTrap(TrapKind k) const { return kind == Kind::Trapped && trap == k; }

  std::string describe() const;
};

/// Same variant and payload; returned references compare by id.
bool sameOutcome(const Outcome& a, const Outcome& b);

// Raised internally by both backends and converted to an Outcome at the API boundary.
struct TrapSignal {
  TrapKind kind;
  int holeId = -1;
};
struct LimitSignal {
  LimitKind kind;
};

class Budget {
 public:
  explicit Budget(const ExecLimits& limits)
      : limits_(limits), start_(std::chrono::steady_clock::now()) {}

  void tick() {
    if (++steps_ > limits_.maxSteps) throw LimitSignal{LimitKind::Steps};
    if ((steps_ & 4095) == 0) checkClock();
  }

  void enter() {
    if (++depth_ > limits_.maxCallDepth) throw LimitSignal{LimitKind::CallDepth};
  }
  void leave() { --depth_; }

  void reserveCells(std::size_t current, std::size_t extra) const {
    if (extra > limits_.maxHeapCells || current + extra > limits_.maxHeapCells)
      throw LimitSignal{LimitKind::HeapCells};
  }

  std::uint64_t steps() const { return steps_; }

 private:
  void checkClock() const {
    std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - start_;
    if (elapsed.count() > limits_.wallTimeout) throw LimitSignal{LimitKind::WallTime};
  }

  ExecLimits limits_;
  std::chrono::steady_clock::time_point start_;
  std::uint64_t steps_ = 0;
  int depth_ = 0;
};

}  // namespace holegen::interp
