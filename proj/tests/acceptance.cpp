// Runs the acceptance criteria; optional arguments select criteria by number.

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "dnc/verify.hpp"

int main(int argc, char** argv) {
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const bool ok = dnc::run_acceptance(std::cout, only);
  std::cout << (ok ? "acceptance: all selected criteria passed" : "acceptance: some criteria failed") << std::endl;
  return ok ? 0 : 1;
}
