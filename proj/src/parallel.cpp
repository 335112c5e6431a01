#include "uqdc/parallel.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace uqdc {

std::size_t worker_count() {
  std::size_t hw = std::thread::hardware_concurrency();
  if (hw == 0) hw = 1;
  if (const char* env = std::getenv("UQDC_THREADS")) {
    std::size_t cap = 0;
    const auto* end = env + std::strlen(env);
    auto [ptr, ec] = std::from_chars(env, end, cap);
    if (ec == std::errc{} && ptr == end && cap > 0) return std::min(hw, cap);
  }
  return hw;
}

}  // namespace uqdc
