#ifndef ZHALL_ERRORS_HPP
#define ZHALL_ERRORS_HPP

#include <complex>
#include <stdexcept>
#include <string>

namespace zhall {

using Complex = std::complex<double>;

// Base class for all structured numeric errors. Downstream contour code
// must be able to distinguish poles from overflow, so poles are reported
// as exceptions carrying the offending point, never as Inf.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class PoleError : public Error {
public:
    PoleError(const std::string& what_function, Complex where)
        : Error(what_function + ": pole at s = (" + std::to_string(where.real()) + ", " +
                std::to_string(where.imag()) + ")"),
          location(where) {}
    Complex location;
};

class ZeroDivisionError : public Error {
public:
    ZeroDivisionError(const std::string& offending_factor, Complex where)
        : Error("division by vanishing factor " + offending_factor + " at s = (" +
                std::to_string(where.real()) + ", " + std::to_string(where.imag()) + ")"),
          location(where) {}
    Complex location;
};

class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

class BudgetError : public Error {
public:
    BudgetError(const std::string& msg, std::size_t budget)
        : Error(msg + " (budget " + std::to_string(budget) + ")"), budget(budget) {}
    std::size_t budget;
};

class NonPrimitiveError : public Error {
public:
    explicit NonPrimitiveError(const std::string& msg) : Error(msg) {}
};

class NonSurjectiveError : public Error {
public:
    explicit NonSurjectiveError(const std::string& msg) : Error(msg) {}
};

class NotCofaceError : public Error {
public:
    explicit NotCofaceError(const std::string& msg) : Error(msg) {}
};

class RenumberError : public Error {
public:
    explicit RenumberError(const std::string& msg) : Error(msg) {}
};

class IllConditionedError : public Error {
public:
    explicit IllConditionedError(const std::string& msg) : Error(msg) {}
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

} // namespace zhall

#endif
