#include "symbranch/parallel.hpp"

#include <cstdlib>
#include <string>

namespace sbm {

int worker_count() {
  if (const char* env = std::getenv("SYMBRANCH_THREADS")) {
    try {
      const int n = std::stoi(env);
      if (n >= 1) return n;
    } catch (...) {
      // fall through to hardware default on unparsable values
    }
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

}  // namespace sbm
