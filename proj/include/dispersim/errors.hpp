#ifndef DISPERSIM_ERRORS_HPP
#define DISPERSIM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dispersim {

/// Rejected input: a precondition on parameters or a case selection failed.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Adaptive quadrature ran out of panels before meeting its tolerance.
class NonConvergence : public std::runtime_error {
public:
    NonConvergence(const std::string& what, double estimate, double target)
        : std::runtime_error(what), error_estimate(estimate), target_error(target) {}

    double error_estimate;
    double target_error;
};

/// A reconstructed outcome distribution left the probability simplex.
class InvalidDistribution : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}

#endif
