#include <iostream>

#include "indexcode/indexcode.hpp"

using namespace indexcode;

int main() {
  ReproOptions opts;
  opts.search_budget = budget_from_env();
  const ReproReport rep = repro_run_all(opts);
  int criterion = 0;
  for (const ClaimResult& c : rep.claims) {
    ++criterion;
    std::cout << (c.pass ? "PASS" : "FAIL") << " criterion " << criterion << " [" << c.id << "] " << c.claim
              << ": expected " << c.expected << "; observed " << c.observed << "\n";
  }
  std::cout << (rep.all_pass() ? "all criteria pass" : "some criteria failed") << "\n";
  return rep.all_pass() ? 0 : 1;
}
