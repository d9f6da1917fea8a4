// Exception types shared by every talbot module.

#ifndef TALBOT_ERROR_HPP
#define TALBOT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace talbot {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of a verification routine was violated.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// gcd(p, q) != 1 where coprimality is required.
class NotCoprime : public Error {
public:
    NotCoprime(long long p, long long q);
    long long p() const noexcept { return p_; }
    long long q() const noexcept { return q_; }

private:
    long long p_;
    long long q_;
};

/// Quadrature exhausted its subdivision budget before meeting tolerance.
/// Carries the best partial result so callers can report it.
class NonConvergence : public Error {
public:
    NonConvergence(const std::string& what, double partial_value, double err_estimate);
    double partial_value() const noexcept { return partial_; }
    double err_estimate() const noexcept { return err_; }

    /// Same failure with additional context prepended to the message.
    NonConvergence with_context(const std::string& context) const;

private:
    double partial_;
    double err_;
};

class IoError : public Error {
public:
    using Error::Error;
};

class UsageError : public Error {
public:
    using Error::Error;
};

}  // namespace talbot

#endif
