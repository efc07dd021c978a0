#ifndef DISPERSIM_PHASE_CORE_HPP
#define DISPERSIM_PHASE_CORE_HPP

// Dispersion model of the single dispersive interferometer arm.
//
// All quantities are in natural units with the carrier frequency set to one:
// detunings are multiples of omega_0, alphaL is in omega_0^-1, betaL and sigma
// in omega_0^-2. Only the products alpha*L and beta*L ever enter the physics.

#include <cmath>
#include <limits>
#include <string>

#include "errors.hpp"

namespace dispersim {

struct DispersionParams {
    double alphaL = 0.0;
    double betaL = 0.0;
    double sigma = 1.0;
    double phi0 = 0.0;
};

/// Shape parameters derived from the dispersion coefficients.
///
/// r1, theta1 are the modulus and argument of 1 + i betaL/sigma; r2, theta2
/// the same for 1 + i betaL/(2 sigma). zeta = exp(-alphaL^2 / (4 r1^2 sigma))
/// is the visibility decay factor of uncorrelated two-photon interference.
struct DispersionShape {
    double r1 = 1.0;
    double r2 = 1.0;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double zeta = 1.0;
    double lambda1 = std::numeric_limits<double>::infinity(); // sigma / betaL
    double lambda2 = std::numeric_limits<double>::infinity(); // sigma / alphaL^2
};

inline void require_positive_sigma(double sigma) {
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw InvalidArgument("sigma must be finite and > 0, got " + std::to_string(sigma));
    }
}

/// phi(omega) = phi0 + alphaL * detuning + betaL * detuning^2.
inline double phase_shift(const DispersionParams& params, double detuning) {
    return params.phi0 + detuning * (params.alphaL + params.betaL * detuning);
}

inline DispersionShape dispersion_shape(const DispersionParams& params) {
    require_positive_sigma(params.sigma);
    DispersionShape shape;
    const double t1 = params.betaL / params.sigma;
    const double t2 = 0.5 * t1;
    shape.r1 = std::hypot(1.0, t1);
    shape.r2 = std::hypot(1.0, t2);
    shape.theta1 = std::atan(t1);
    shape.theta2 = std::atan(t2);
    // alphaL^2 / (4 r1^2 sigma) == 1 / (4 lambda2 (1 + lambda1^-2)), written
    // without the reciprocals so betaL == 0 and alphaL == 0 need no branches.
    const double a2 = params.alphaL * params.alphaL;
    shape.zeta = std::exp(-a2 / (4.0 * shape.r1 * shape.r1 * params.sigma));
    if (params.betaL != 0.0) {
        shape.lambda1 = params.sigma / params.betaL;
    }
    if (a2 != 0.0) {
        shape.lambda2 = params.sigma / a2;
    }
    return shape;
}

}

#endif
