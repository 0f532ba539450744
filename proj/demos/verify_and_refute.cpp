// Builds the two witness policies for a deontology and verifies both:
// the always-safe one passes, the violating one is refuted with a minimal
// counterexample.

#include <iostream>

#include "deon/deon.hpp"

int main() {
  const char* spec_text =
      "percepts: green red\n"
      "actions: go stop\n"
      "good: (go | stop | green | (red stop))* red?\n";

  deon::Deontology d = deon::compile(deon::parse_spec(spec_text));

  auto good = deon::good_policy(d);
  deon::Verdict good_verdict = deon::verify_policy(d, *good->as_transducer());
  std::cout << "good policy: " << (good_verdict ? "refuted?!" : "Verified") << "\n";

  auto bad = deon::bad_policy(d);
  deon::Verdict bad_verdict = deon::verify_policy(d, *bad->as_transducer());
  if (bad_verdict) {
    std::cout << "bad policy: counterexample after \""
              << deon::render_history(bad_verdict->history) << "\" with action "
              << d.alphabet.name(bad_verdict->action) << " and percept "
              << d.alphabet.name(bad_verdict->percept) << " (cycle "
              << bad_verdict->violation_cycle << ")\n";
  }
  return 0;
}
