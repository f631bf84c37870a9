#include "amulab/parallel.hpp"

#include <cstdlib>
#include <string>

namespace amulab {

std::size_t effective_threads(std::size_t requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("AMULAB_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && v > 0) return static_cast<std::size_t>(v);
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? hw : 1;
}

}  // namespace amulab
