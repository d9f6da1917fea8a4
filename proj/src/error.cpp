#include "talbot/error.hpp"

namespace talbot {

NotCoprime::NotCoprime(long long p, long long q)
    : Error("gcd(" + std::to_string(p) + ", " + std::to_string(q) + ") != 1"), p_(p), q_(q) {}

NonConvergence::NonConvergence(const std::string& what, double partial_value, double err_estimate)
    : Error(what), partial_(partial_value), err_(err_estimate) {}

NonConvergence NonConvergence::with_context(const std::string& context) const {
    return NonConvergence(context + ": " + what(), partial_, err_);
}

}  // namespace talbot
