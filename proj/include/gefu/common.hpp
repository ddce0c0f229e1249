#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>

namespace gefu {

namespace detail {
template <class... A>
inline std::string cat(A&&... a) {
  std::ostringstream os;
  (os << ... << a);
  return os.str();
}
}  // namespace detail

// Runtime contract check. Throws std::runtime_error with a descriptive message.
#define GEFU_CHECK(cond, ...)                                                 \
  do {                                                                        \
    if (!(cond))                                                              \
      throw std::runtime_error(                                              \
          ::gefu::detail::cat("gefu: ", __VA_ARGS__, " (", #cond, ")"));      \
  } while (0)

// Max worker threads for parallel kernels. Honors the GEFU_THREADS
// environment variable; 1 forces the serial path. Cached on first use.
int max_threads();

// Strict-mode arithmetic: division by exact zero throws instead of
// producing inf/nan. On by default.
bool strict_divide();
void set_strict_divide(bool on);

}  // namespace gefu
