// A reckless random agent kept Good by the governor: every proposal is
// filtered so the emitted history never leaves the good language.

#include <iostream>

#include "deon/deon.hpp"

int main() {
  const char* spec_text =
      "percepts: ok err\n"
      "actions: noop move grab\n"
      "good: ([noop move] _p)*\n";

  deon::Deontology d = deon::compile(deon::parse_spec(spec_text));
  auto policy = deon::random_policy(d.alphabet, 42);
  auto env = deon::random_env(d.alphabet, 7);

  deon::RunRecord record = deon::simulate(d, *policy, *env, 20, /*governed=*/true);

  for (std::size_t k = 0; k < record.verdicts.size(); ++k) {
    const deon::ProposalOutcome& v = record.verdicts[k];
    std::cout << "cycle " << k + 1 << ": proposed " << d.alphabet.name(v.proposed);
    if (v.kind == deon::ProposalKind::substituted)
      std::cout << " -> substituted " << d.alphabet.name(*v.emitted);
    else
      std::cout << " -> approved";
    std::cout << ", emitted so far is "
              << deon::history_class_name(record.prefix_classes[k]) << "\n";
  }
  std::cout << "history: " << deon::render_history(record.history) << "\n";
  std::cout << "violations: " << (record.first_violation_cycle ? "yes" : "none") << "\n";
  return 0;
}
