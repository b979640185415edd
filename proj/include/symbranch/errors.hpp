#ifndef SYMBRANCH_ERRORS_HPP
#define SYMBRANCH_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace sbm {

// Invalid experiment or lattice configuration detected at setup time.
struct ConfigError : std::runtime_error {
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace sbm

#endif
