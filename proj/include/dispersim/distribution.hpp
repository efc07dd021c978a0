#ifndef DISPERSIM_DISTRIBUTION_HPP
#define DISPERSIM_DISTRIBUTION_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace dispersim {

using Complex = std::complex<double>;

/// Photon-count outcome probabilities for one phase value.
///
/// probs[l] is P(N_c = N - l, N_d = l | phi0), i.e. the index counts photons
/// at detector D. Values are raw; clamping happens only at presentation.
struct OutcomeDistribution {
    int photons = 0;
    std::vector<double> probs;
    double phi0 = 0.0;

    double total() const {
        double s = 0.0;
        for (double p : probs) {
            s += p;
        }
        return s;
    }
};

/// Probability of one outcome as a function of phi0, band-limited to |k| <= 2:
///   P(phi0) = c0 + 2 Re[c1 e^{i phi0}] + 2 Re[c2 e^{2 i phi0}].
/// c0 is the phase average and is real.
struct PhaseFourierSeries {
    static constexpr int order = 2;

    double c0 = 0.0;
    Complex c1{};
    Complex c2{};

    double operator()(double phi) const {
        const Complex e1 = std::polar(1.0, phi);
        return c0 + 2.0 * (c1 * e1).real() + 2.0 * (c2 * e1 * e1).real();
    }

    /// Series of P(phi + delta).
    PhaseFourierSeries shifted(double delta) const {
        const Complex e1 = std::polar(1.0, delta);
        return {c0, c1 * e1, c2 * e1 * e1};
    }

    bool is_constant(double tol) const { return std::abs(c1) <= tol && std::abs(c2) <= tol; }
};

/// Outcome distribution at phi from one series per outcome.
inline OutcomeDistribution reconstruct(const std::vector<PhaseFourierSeries>& series, double phi) {
    OutcomeDistribution d;
    d.photons = static_cast<int>(series.size()) - 1;
    d.phi0 = phi;
    d.probs.reserve(series.size());
    for (const auto& s : series) {
        d.probs.push_back(s(phi));
    }
    return d;
}

inline double clamp_probability(double p) { return std::clamp(p, 0.0, 1.0); }

}

#endif
