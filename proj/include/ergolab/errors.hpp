#ifndef ERGOLAB_ERRORS_HPP
#define ERGOLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ergolab {

// config / input validation failures (CLI exit code 2)
class config_error : public std::runtime_error {
public:
  explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// enumeration budget exhausted (CLI exit code 3)
class budget_error : public std::runtime_error {
public:
  explicit budget_error(const std::string& msg) : std::runtime_error(msg) {}
};

// operation applied outside its declared domain, e.g. a segment
// outside a decomposition's domain D
class domain_error : public std::runtime_error {
public:
  explicit domain_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace ergolab

#endif
