#include "dysonrg/parallel.hpp"

#include <cstdlib>

namespace dysonrg {

int thread_budget() {
  int budget = static_cast<int>(std::thread::hardware_concurrency());
  if (budget < 1) budget = 1;
  if (const char* env = std::getenv("RG_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && cap >= 1 && cap < budget) budget = static_cast<int>(cap);
  }
  return budget;
}

}  // namespace dysonrg
