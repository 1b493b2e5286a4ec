#ifndef COLECOLE_ERRORS_HPP
#define COLECOLE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace colecole {

// Argument outside the mathematical domain of an operation.
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& msg) : std::domain_error(msg) {}
};

// Evaluation requested exactly at a non-integrable/singular point (e.g. the
// kernel t^{beta-1} at t = 0 with beta < 1).
class singular_evaluation_error : public domain_error {
public:
    explicit singular_evaluation_error(const std::string& msg) : domain_error(msg) {}
};

// An iterative evaluation (series, asymptotic expansion, eigensolver, ...)
// failed to reach the requested tolerance.  Never return a silently wrong value.
class nonconvergence_error : public std::runtime_error {
public:
    explicit nonconvergence_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A numerical operation produced unusable output (non-finite integrand,
// singular linear system, indefinite mass matrix, ...).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Bad or inconsistent run configuration (CLI / config file level).
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace colecole

#endif
