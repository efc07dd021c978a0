#ifndef DISPERSIM_ANALYTIC_HPP
#define DISPERSIM_ANALYTIC_HPP

// Closed-form outcome probabilities for cases A through K.
//
// Every probability is a trigonometric polynomial of degree <= 2 in phi0. The
// building blocks are Gaussian averages of exp(i * dispersive phase):
//   E1 = <e^{i(alphaL x + betaL x^2)}> over |amplitude|^2 ~ e^{-sigma x^2}
//      = zeta / sqrt(r1) * e^{i(theta1/2 - alphaL^2 betaL / (4 r1^2 sigma^2))}
//   E2 = the same average over e^{-2 sigma x^2} (one photon of an anticorrelated pair)
//   Q  = <e^{2 i betaL x^2}> over e^{-2 sigma x^2} = e^{i theta1/2} / sqrt(r1)
// Anticorrelated pairs see phi(w+) + phi(w-) = 2 phi0 + 2 betaL x^2, which is
// why alphaL drops out of their two-photon fringe.

#include <cmath>
#include <complex>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "phase_core.hpp"
#include "states.hpp"

namespace dispersim {

namespace detail {

struct ClosedFormTerms {
    DispersionShape shape;
    double amp1;      // |E1|
    double arg1;      // arg E1
    double amp2;      // |E1|^2
    double arg2;      // arg E1^2
    double pairDecay; // e^{-alphaL^2 / (2 sigma)}
    double ampQ;      // |Q|
    double argQ;      // arg Q
    double ampE2;     // |E2|
    double argE2;     // arg E2
};

inline ClosedFormTerms closed_form_terms(const DispersionParams& p) {
    ClosedFormTerms t{};
    t.shape = dispersion_shape(p);
    const auto& s = t.shape;
    const double a2 = p.alphaL * p.alphaL;
    const double sig = p.sigma;
    t.amp1 = s.zeta / std::sqrt(s.r1);
    t.arg1 = 0.5 * s.theta1 - a2 * p.betaL / (4.0 * s.r1 * s.r1 * sig * sig);
    t.amp2 = t.amp1 * t.amp1;
    t.arg2 = 2.0 * t.arg1;
    t.pairDecay = std::exp(-a2 / (2.0 * sig));
    t.ampQ = 1.0 / std::sqrt(s.r1);
    t.argQ = 0.5 * s.theta1;
    t.ampE2 = std::exp(-a2 / (8.0 * s.r2 * s.r2 * sig)) / std::sqrt(s.r2);
    t.argE2 = 0.5 * s.theta2 - a2 * p.betaL / (16.0 * s.r2 * s.r2 * sig * sig);
    return t;
}

inline void require_closed_form_case(CaseId id) {
    if (id == CaseId::L) {
        throw InvalidArgument("case L has no closed form; use spdc_distribution");
    }
}

}

/// Closed-form P(N_c, N_d | phi0) for case A..K.
inline OutcomeDistribution analytic_distribution(CaseId id, const DispersionParams& p) {
    detail::require_closed_form_case(id);
    const auto t = detail::closed_form_terms(p);
    const double phi = p.phi0;

    OutcomeDistribution d;
    d.phi0 = phi;
    d.photons = photon_count(id);

    switch (id) {
    case CaseId::A: {
        const double v = t.amp1 * std::cos(phi + t.arg1);
        d.probs = {0.5 * (1.0 - v), 0.5 * (1.0 + v)};
        break;
    }
    case CaseId::B: {
        const double v = t.amp1 * std::sin(phi + t.arg1);
        d.probs = {0.5 * (1.0 - v), 0.5 * (1.0 + v)};
        break;
    }
    case CaseId::I: {
        const double v = t.amp1 * std::sin(phi + t.arg1);
        d.probs = {0.5 * (1.0 + v), 0.5 * (1.0 - v)};
        break;
    }
    case CaseId::C: {
        const double v = t.amp1 * std::cos(phi + t.arg1);
        d.probs = {0.25 * (1.0 - v) * (1.0 - v), 0.5 * (1.0 - v * v), 0.25 * (1.0 + v) * (1.0 + v)};
        break;
    }
    case CaseId::D:
    case CaseId::J: {
        const double w = t.amp2 * std::cos(2.0 * phi + t.arg2);
        d.probs = {0.25 * (1.0 - w), 0.5 * (1.0 + w), 0.25 * (1.0 - w)};
        break;
    }
    case CaseId::E: {
        d.probs = {0.25 * (1.0 + t.amp2), 0.5 * (1.0 - t.amp2), 0.25 * (1.0 + t.amp2)};
        break;
    }
    case CaseId::F: {
        const double fringe2 = t.ampQ * std::cos(2.0 * phi + t.argQ);
        const double fringe1 = 4.0 * t.ampE2 * std::cos(phi + t.argE2);
        const double even = 2.0 + t.pairDecay + fringe2;
        d.probs = {(even - fringe1) / 8.0, 0.25 * (2.0 - t.pairDecay - fringe2), (even + fringe1) / 8.0};
        break;
    }
    case CaseId::G: {
        d.probs = {0.25 * (1.0 + t.pairDecay), 0.5 * (1.0 - t.pairDecay), 0.25 * (1.0 + t.pairDecay)};
        break;
    }
    case CaseId::H:
    case CaseId::K: {
        const double w = t.ampQ * std::cos(2.0 * phi + t.argQ);
        d.probs = {0.25 * (1.0 - w), 0.5 * (1.0 + w), 0.25 * (1.0 - w)};
        break;
    }
    case CaseId::L:
        break;
    }
    return d;
}

/// Exact phi0 Fourier series of every outcome for case A..K. params.phi0 is ignored.
inline std::vector<PhaseFourierSeries> phase_fourier(CaseId id, const DispersionParams& p) {
    detail::require_closed_form_case(id);
    const auto t = detail::closed_form_terms(p);
    const Complex e1 = std::polar(t.amp1, t.arg1);
    const Complex e1sq = std::polar(t.amp2, t.arg2);
    const Complex q = std::polar(t.ampQ, t.argQ);
    const Complex e2 = std::polar(t.ampE2, t.argE2);
    const Complex i{0.0, 1.0};

    switch (id) {
    case CaseId::A:
        return {{0.5, -0.25 * e1, {}}, {0.5, 0.25 * e1, {}}};
    case CaseId::B:
        return {{0.5, 0.25 * i * e1, {}}, {0.5, -0.25 * i * e1, {}}};
    case CaseId::I:
        return {{0.5, -0.25 * i * e1, {}}, {0.5, 0.25 * i * e1, {}}};
    case CaseId::C: {
        const double m = 0.125 * t.amp2;
        return {{0.25 + m, -0.25 * e1, e1sq / 16.0},
                {0.5 - 2.0 * m, {}, -e1sq / 8.0},
                {0.25 + m, 0.25 * e1, e1sq / 16.0}};
    }
    case CaseId::D:
    case CaseId::J:
        return {{0.25, {}, -e1sq / 8.0}, {0.5, {}, e1sq / 4.0}, {0.25, {}, -e1sq / 8.0}};
    case CaseId::E:
        return {{0.25 * (1.0 + t.amp2), {}, {}}, {0.5 * (1.0 - t.amp2), {}, {}}, {0.25 * (1.0 + t.amp2), {}, {}}};
    case CaseId::F: {
        const double even = (2.0 + t.pairDecay) / 8.0;
        return {{even, -0.25 * e2, q / 16.0},
                {0.25 * (2.0 - t.pairDecay), {}, -q / 8.0},
                {even, 0.25 * e2, q / 16.0}};
    }
    case CaseId::G:
        return {{0.25 * (1.0 + t.pairDecay), {}, {}},
                {0.5 * (1.0 - t.pairDecay), {}, {}},
                {0.25 * (1.0 + t.pairDecay), {}, {}}};
    case CaseId::H:
    case CaseId::K:
        return {{0.25, {}, -q / 8.0}, {0.5, {}, q / 4.0}, {0.25, {}, -q / 8.0}};
    case CaseId::L:
        break;
    }
    return {};
}

}

#endif
