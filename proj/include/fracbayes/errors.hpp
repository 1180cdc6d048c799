#ifndef FRACBAYES_ERRORS_HPP_
#define FRACBAYES_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fracbayes {

// Base class for all errors thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Invalid argument to a numerical routine (e.g. log_gamma at z <= 0).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A configuration or data structure violates its invariants.
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Malformed input file. `row` is the 1-based line number of the offending row.
class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t row)
        : Error(msg + " (row " + std::to_string(row) + ")"), row_(row) {}
    std::size_t row() const noexcept { return row_; }

private:
    std::size_t row_;
};

// Series truncation hit k_max before the tolerance was met.  Carries the
// partial sum and the last term so callers can inspect how far off it was.
class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& msg, double partial_sum, double last_term, int k_max)
        : Error(msg + " (partial_sum=" + std::to_string(partial_sum) +
                ", last_term=" + std::to_string(last_term) +
                ", k_max=" + std::to_string(k_max)),
          partial_sum_(partial_sum),
          last_term_(last_term),
          k_max_(k_max) {}
    double partial_sum() const noexcept { return partial_sum_; }
    double last_term() const noexcept { return last_term_; }
    int k_max() const noexcept { return k_max_; }

private:
    double partial_sum_;
    double last_term_;
    int k_max_;
};

// Importance weights collapsed (no or too few finite weights).
class DegeneracyError : public Error {
public:
    DegeneracyError(const std::string& msg, int n_finite_weights)
        : Error(msg), n_finite_weights_(n_finite_weights) {}
    int n_finite_weights() const noexcept { return n_finite_weights_; }

private:
    int n_finite_weights_;
};

}  // namespace fracbayes

#endif  // FRACBAYES_ERRORS_HPP_
