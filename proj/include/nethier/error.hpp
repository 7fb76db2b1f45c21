#pragma once

#include <stdexcept>
#include <string>

namespace nethier {

/// Malformed input, invalid ids, or a metric that fails its axioms.
class data_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Caller-side contract violation (bad parameter ranges).
class usage_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Exhaustive subset search would exceed its combination budget.
class blowup_error : public std::runtime_error {
public:
    blowup_error(const std::string& what, double combinations, double limit)
        : std::runtime_error(what), m_combinations(combinations), m_limit(limit) {}

    double combinations() const noexcept { return m_combinations; }
    double limit() const noexcept { return m_limit; }

private:
    double m_combinations;
    double m_limit;
};

} // namespace nethier
