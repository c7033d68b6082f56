#ifndef JSCC_ERRORS_HPP
#define JSCC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace jscc {

// Raised when a computation cannot meet its accuracy or truncation budget
// (as opposed to a caller passing invalid arguments, which is domain_error).
class numeric_error : public std::runtime_error {
 public:
  numeric_error(const std::string& what, double achieved_budget)
      : std::runtime_error(what), achieved_budget_(achieved_budget) {}
  double achieved_budget() const { return achieved_budget_; }

 private:
  double achieved_budget_;
};

// Raised when a tiny-instance enumerator is asked for an instance beyond
// its size guard.
class size_guard_error : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace jscc

#endif
