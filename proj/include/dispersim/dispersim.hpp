#ifndef DISPERSIM_DISPERSIM_HPP
#define DISPERSIM_DISPERSIM_HPP

#include "analytic.hpp"
#include "distribution.hpp"
#include "errors.hpp"
#include "fidelity.hpp"
#include "oracle.hpp"
#include "phase_core.hpp"
#include "quadrature.hpp"
#include "states.hpp"
#include "sweep.hpp"

#endif
