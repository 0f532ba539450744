#pragma once

// The fixture specs exercised throughout the suite.

#include <string>
#include <utility>
#include <vector>

namespace fixtures {

inline constexpr const char* kNoGrab =
    "percepts: ok err\n"
    "actions: noop move grab\n"
    "good: ([noop move] _p)*\n";

inline constexpr const char* kRedStop =
    "percepts: green red\n"
    "actions: go stop\n"
    "good: (go | stop | green | (red stop))* red?\n";

inline constexpr const char* kGuess =
    "percepts: pa pb\n"
    "actions: a b\n"
    "good: ((a pa) | (b pb))*\n";

inline constexpr const char* kGamble =
    "percepts: win lose\n"
    "actions: bet pass\n"
    "good: ((pass _p) | (bet win))*\n";

inline constexpr const char* kDebt =
    "percepts: tick\n"
    "actions: borrow repay noop\n"
    "good: eps | (% [repay noop] tick)\n";

inline constexpr const char* kHom =
    "percepts: ok err\n"
    "actions: G B\n"
    "good: (G _p)*\n";

inline const std::vector<std::pair<std::string, const char*>>& all() {
  static const std::vector<std::pair<std::string, const char*>> fixtures = {
      {"no-grab", kNoGrab}, {"red-stop", kRedStop}, {"guess", kGuess},
      {"gamble", kGamble},  {"debt", kDebt},        {"homunculus", kHom},
  };
  return fixtures;
}

/// The strongly viable subset used for governor runs.
inline const std::vector<std::pair<std::string, const char*>>& strongly_viable() {
  static const std::vector<std::pair<std::string, const char*>> fixtures = {
      {"no-grab", kNoGrab}, {"red-stop", kRedStop}, {"gamble", kGamble},
      {"debt", kDebt},      {"homunculus", kHom},
  };
  return fixtures;
}

}  // namespace fixtures
