#ifndef DISPERSIM_ORACLE_HPP
#define DISPERSIM_ORACLE_HPP

// Brute-force outcome probabilities: port coefficients are applied frequency
// by frequency, two-photon amplitudes are symmetrized explicitly, and the
// squared amplitudes are integrated over detector frequencies. Shares no
// algebra with analytic.hpp. This is also the only path for the SPDC case.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"
#include "phase_core.hpp"
#include "quadrature.hpp"
#include "states.hpp"

namespace dispersim {

enum class Port { A, B };

/// Coefficients of c^dag and d^dag in the output expansion of one input
/// creation operator at a given frequency.
struct ScatterCoeffs {
    Complex toC;
    Complex toD;
};

inline ScatterCoeffs mz_port_coeffs(const DispersionParams& params, Port port, double detuning) {
    using namespace std::complex_literals;
    const Complex u = std::polar(1.0, phase_shift(params, detuning));
    if (port == Port::A) {
        return {0.5 * (u - 1.0), -0.5i * (u + 1.0)};
    }
    return {-0.5i * (u + 1.0), -0.5 * (u - 1.0)};
}

inline ScatterCoeffs hom_port_coeffs(const DispersionParams& params, Port port, double detuning) {
    using namespace std::complex_literals;
    const double h = std::numbers::sqrt2 / 2.0;
    if (port == Port::A) {
        const Complex u = std::polar(1.0, phase_shift(params, detuning));
        return {h * u, 1i * h * u};
    }
    return {1i * h, Complex(h, 0.0)};
}

/// Default width of the narrow Gaussian standing in for the frequency
/// anticorrelation delta. Scaled with the bandwidth so the oracle respects
/// the (sigma, betaL, alphaL) rescaling symmetry.
inline double default_eps_width(double sigma) {
    require_positive_sigma(sigma);
    return 1e-3 / std::sqrt(sigma);
}

enum class EpsLimit {
    /// Evaluate at epsWidth and epsWidth/2 and extrapolate the even series to zero width.
    Richardson,
    /// Single evaluation at epsWidth.
    Raw,
};

namespace oracle_detail {

struct PortPair {
    Port first;
    Port second;
    double weight;
};

struct InputState {
    bool hom = false;
    int photons = 1;
    bool anticorrelated = false;
    std::vector<PortPair> terms;
    // Single-photon amplitudes per port.
    double singleA = 0.0;
    double singleB = 0.0;
};

inline InputState input_state(CaseId id) {
    InputState s;
    s.hom = case_spec(id).interferometer == Interferometer::HongOuMandel;
    s.photons = case_spec(id).photons;
    s.anticorrelated = case_spec(id).correlation == Correlation::Anticorrelated;
    switch (id) {
    case CaseId::A:
        s.singleA = 1.0;
        break;
    case CaseId::B:
    case CaseId::I:
        s.singleA = s.singleB = std::numbers::sqrt2 / 2.0;
        break;
    case CaseId::C:
    case CaseId::F:
        s.terms = {{Port::A, Port::A, 1.0}};
        break;
    case CaseId::D:
    case CaseId::H:
        s.terms = {{Port::A, Port::B, 1.0}};
        break;
    case CaseId::E:
    case CaseId::G:
    case CaseId::J:
    case CaseId::K:
        s.terms = {{Port::A, Port::A, 1.0}, {Port::B, Port::B, 1.0}};
        break;
    case CaseId::L:
        throw InvalidArgument("case L has no Gaussian-product oracle; use spdc_distribution");
    }
    return s;
}

struct PortTable {
    ScatterCoeffs a;
    ScatterCoeffs b;
    const ScatterCoeffs& operator[](Port p) const { return p == Port::A ? a : b; }
};

inline PortTable ports_at(const InputState& s, const DispersionParams& p, double x) {
    if (s.hom) {
        return {hom_port_coeffs(p, Port::A, x), hom_port_coeffs(p, Port::B, x)};
    }
    return {mz_port_coeffs(p, Port::A, x), mz_port_coeffs(p, Port::B, x)};
}

inline PortTable identity_ports() { return {{1.0, 0.0}, {0.0, 1.0}}; }

// Output amplitude G_oo'(x1, x2) = psi(x1, x2) * sum_t w_t T_p(x1)[o] T_q(x2)[o'].
struct PairAmplitudes {
    Complex cc, cd, dc, dd;
};

inline PairAmplitudes pair_amplitudes(const InputState& s, const PortTable& t1, const PortTable& t2, double psi) {
    PairAmplitudes g{};
    for (const auto& term : s.terms) {
        const ScatterCoeffs& u = t1[term.first];
        const ScatterCoeffs& v = t2[term.second];
        g.cc += term.weight * u.toC * v.toC;
        g.cd += term.weight * u.toC * v.toD;
        g.dc += term.weight * u.toD * v.toC;
        g.dd += term.weight * u.toD * v.toD;
    }
    g.cc *= psi;
    g.cd *= psi;
    g.dc *= psi;
    g.dd *= psi;
    return g;
}

// Densities of (2,0), (1,1), (0,2) from G(x1,x2) and G(x2,x1).
inline std::array<double, 3> pair_densities(const PairAmplitudes& g, const PairAmplitudes& swapped) {
    return {0.5 * std::norm(g.cc + swapped.cc), std::norm(g.cd + swapped.dc), 0.5 * std::norm(g.dd + swapped.dd)};
}

// Outcome densities plus the input norm density at one (x1, x2).
inline std::array<double, 4> two_photon_point(const InputState& s, const DispersionParams& p, double x1, double x2,
                                               double psi12, double psi21) {
    const PortTable t1 = ports_at(s, p, x1);
    const PortTable t2 = ports_at(s, p, x2);
    const auto out = pair_densities(pair_amplitudes(s, t1, t2, psi12), pair_amplitudes(s, t2, t1, psi21));
    const PortTable id = identity_ports();
    const auto in = pair_densities(pair_amplitudes(s, id, id, psi12), pair_amplitudes(s, id, id, psi21));
    return {out[0], out[1], out[2], in[0] + in[1] + in[2]};
}

inline OutcomeDistribution normalized(int photons, double phi0, std::span<const double> values, double norm) {
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw NonConvergence("input state norm evaluated to a nonpositive value", 0.0, 0.0);
    }
    OutcomeDistribution d;
    d.photons = photons;
    d.phi0 = phi0;
    for (double v : values) {
        d.probs.push_back(v / norm);
    }
    return d;
}

inline OutcomeDistribution single_photon(const InputState& s, const DispersionParams& p, const QuadratureSpec& spec) {
    const Interval range = truncation_bounds(p.sigma, spec);
    auto integrand = [&](double x) {
        const PortTable t = ports_at(s, p, x);
        const double env = std::exp(-p.sigma * x * x);
        const Complex c = s.singleA * t.a.toC + s.singleB * t.b.toC;
        const Complex d = s.singleA * t.a.toD + s.singleB * t.b.toD;
        return std::array<double, 3>{env * std::norm(c), env * std::norm(d),
                                     env * (s.singleA * s.singleA + s.singleB * s.singleB)};
    };
    const auto r = integrate_1d(integrand, range.lo, range.hi, spec);
    return normalized(1, p.phi0, std::span<const double>(r.value.data(), 2), r.value[2]);
}

inline OutcomeDistribution uncorrelated_pair(const InputState& s, const DispersionParams& p,
                                             const QuadratureSpec& spec) {
    const Interval range = truncation_bounds(p.sigma, spec);
    auto integrand = [&](double x1, double x2) {
        const double psi = std::exp(-0.5 * p.sigma * (x1 * x1 + x2 * x2));
        return two_photon_point(s, p, x1, x2, psi, psi);
    };
    const auto r = integrate_2d(integrand, {range.lo, range.hi, range.lo, range.hi}, spec);
    return normalized(2, p.phi0, std::span<const double>(r.value.data(), 3), r.value[3]);
}

// Coordinates: x1 = w, x2 = -w + e (unit Jacobian). psi(x1, x2) = exp(-sigma x1^2) f(x1 + x2).
inline OutcomeDistribution anticorrelated_pair(const InputState& s, const DispersionParams& p,
                                               const QuadratureSpec& spec, double epsWidth) {
    const Interval outer = truncation_bounds(2.0 * p.sigma, spec);
    const Interval inner = truncation_bounds(1.0 / (epsWidth * epsWidth), spec);
    const double inv2w2 = 0.5 / (epsWidth * epsWidth);
    auto integrand = [&](double w, double e) {
        const double x1 = w;
        const double x2 = -w + e;
        const double f = std::exp(-e * e * inv2w2);
        return two_photon_point(s, p, x1, x2, std::exp(-p.sigma * x1 * x1) * f, std::exp(-p.sigma * x2 * x2) * f);
    };
    const auto r = integrate_2d(integrand, {outer.lo, outer.hi, inner.lo, inner.hi}, spec);
    return normalized(2, p.phi0, std::span<const double>(r.value.data(), 3), r.value[3]);
}

}

/// Outcome distribution of cases A-K by direct frequency integration.
/// spec governs the 1-D integral for single-photon cases and the 2-D integral
/// otherwise. epsWidth only matters for the anticorrelated cases.
inline OutcomeDistribution oracle_distribution(CaseId id, const DispersionParams& params, const QuadratureSpec& spec,
                                               double epsWidth, EpsLimit limit = EpsLimit::Richardson) {
    require_positive_sigma(params.sigma);
    const auto state = oracle_detail::input_state(id);
    if (state.photons == 1) {
        return oracle_detail::single_photon(state, params, spec);
    }
    if (!state.anticorrelated) {
        return oracle_detail::uncorrelated_pair(state, params, spec);
    }
    if (!(epsWidth > 0.0) || !std::isfinite(epsWidth)) {
        throw InvalidArgument("epsWidth must be > 0");
    }
    auto coarse = oracle_detail::anticorrelated_pair(state, params, spec, epsWidth);
    if (limit == EpsLimit::Raw) {
        return coarse;
    }
    const auto fine = oracle_detail::anticorrelated_pair(state, params, spec, 0.5 * epsWidth);
    for (std::size_t l = 0; l < coarse.probs.size(); ++l) {
        coarse.probs[l] = (4.0 * fine.probs[l] - coarse.probs[l]) / 3.0;
    }
    return coarse;
}

inline OutcomeDistribution oracle_distribution(CaseId id, const DispersionParams& params, const QuadratureSpec& spec) {
    return oracle_distribution(id, params, spec, default_eps_width(params.sigma));
}

// ---------------------------------------------------------------------------
// SPDC biphoton. Both photons enter port A with joint amplitude
// Phi(Omega_p, Omega), detunings x1 = Omega_p + Omega and x2 = Omega_p - Omega.

/// sinc(y) e^{-iy}, with sinc(0) = 1.
inline Complex sinc_phase(double y) {
    const double s = std::abs(y) < 1e-4 ? 1.0 - y * y / 6.0 : std::sin(y) / y;
    return std::polar(s, -y);
}

inline Complex spdc_joint_amplitude(const CrystalParams& crystal, double sigma, double omegaP, double omegaMinus,
                                    double normalization = 1.0) {
    validate(crystal);
    require_positive_sigma(sigma);
    // Delta k * L_c / 2 with Delta k = lambdaP Omega_p + lambdaBig Omega.
    const double y = 0.5 * (crystal.b() * omegaP + crystal.q() * omegaMinus);
    return normalization * std::exp(-2.0 * sigma * omegaP * omegaP) * sinc_phase(y);
}

namespace spdc_detail {

// Starting cutoff X0 of the Omega integral, a whole number of sinc periods
// 2 pi / |q| so that every doubling of it is one too. The sinc^2 tail beyond
// X carries mass ~ 1/X; pairs of cutoffs X, 2X feed a Richardson step that
// removes it. The interferometer factor must have settled before that
// extrapolation is valid, which takes Omega well beyond 1/|alphaL| and
// 1/sqrt|betaL|.
struct OmegaCutoff {
    double start;
    double limit;
};

inline OmegaCutoff omega_cutoff(const CrystalParams& crystal, double alphaL, double betaL, double sigma,
                                const QuadratureSpec& spec) {
    const double period = 2.0 * std::numbers::pi / std::abs(crystal.q());
    const double limit = 40.0 * spec.truncationWidth / std::sqrt(sigma);
    const double slow = std::max(std::abs(alphaL), std::sqrt(std::abs(betaL)));
    double wanted = 2.0 * spec.truncationWidth / std::sqrt(sigma);
    if (slow > 0.0) {
        wanted = std::max(wanted, std::min(4.0 / slow, 0.25 * limit));
    }
    wanted = std::max(wanted, 8.0 * period);
    return {period * std::ceil(wanted / period), limit};
}

// Breakpoints on [lo, hi] such that each panel spans about one period of
// the fastest oscillation, rate(x) being the local angular frequency.
template <class Rate>
std::vector<double> oscillation_breaks(double lo, double hi, Rate&& rate) {
    std::vector<double> b{lo};
    double x = lo;
    while (x < hi) {
        const double step = 2.0 * std::numbers::pi / std::max(rate(x), 1.0);
        x = std::min(hi, x + step);
        if (hi - x < 0.25 * step) {
            x = hi;
        }
        b.push_back(x);
    }
    return b;
}

// Folded integrand over Omega >= 0. Component 0 is the norm density, then
// (2,0), (1,1), (0,2) for each requested phase.
template <std::size_t NP>
struct Integrand {
    static constexpr std::size_t size = 1 + 3 * NP;
    using Value = std::array<double, size>;

    double alphaL, betaL, sigma, b, q;
    std::array<Complex, NP> rotations;
    bool withOutcomes;

    Value operator()(double omega, double omegaP) const {
        Value v{};
        const Complex amp = sinc_phase(0.5 * (b * omegaP + q * omega)) + sinc_phase(0.5 * (b * omegaP - q * omega));
        const double weight = 0.5 * std::exp(-4.0 * sigma * omegaP * omegaP) * std::norm(amp);
        v[0] = weight;
        if (!withOutcomes) {
            return v;
        }
        const double x1 = omegaP + omega;
        const double x2 = omegaP - omega;
        const Complex e1 = std::polar(1.0, alphaL * x1 + betaL * x1 * x1);
        const Complex e2 = std::polar(1.0, alphaL * x2 + betaL * x2 * x2);
        for (std::size_t k = 0; k < NP; ++k) {
            // |toC|^2 = (1 - cos phi) / 2 for port A of the Mach-Zehnder.
            const double c1 = 0.5 * (1.0 - (rotations[k] * e1).real());
            const double c2 = 0.5 * (1.0 - (rotations[k] * e2).real());
            const double d1 = 1.0 - c1;
            const double d2 = 1.0 - c2;
            v[1 + 3 * k] = weight * c1 * c2;
            v[2 + 3 * k] = weight * (c1 * d2 + d1 * c2);
            v[3 + 3 * k] = weight * d1 * d2;
        }
        return v;
    }
};

template <std::size_t NP>
typename Integrand<NP>::Value integrate_folded(const Integrand<NP>& f, const OmegaCutoff& cutoff,
                                               const QuadratureSpec& spec) {
    using Value = typename Integrand<NP>::Value;
    const double halfP = spec.truncationWidth / std::sqrt(8.0 * f.sigma);
    const double a = std::abs(f.alphaL);
    const double beta = std::abs(f.betaL);
    const bool outcomes = f.withOutcomes;
    // Local angular frequencies of the integrand along each axis.
    auto innerRate = [&](double omega) {
        return std::abs(f.b) + (outcomes ? 2.0 * (a + 2.0 * beta * (halfP + omega)) : 0.0);
    };
    auto outerRate = [&](double omega) {
        return std::abs(f.q) + (outcomes ? 2.0 * (a + 2.0 * beta * (halfP + omega)) : 0.0);
    };
    auto innerBreaks = [&](double omega) {
        const int n = static_cast<int>(std::ceil(2.0 * halfP * innerRate(omega) / (2.0 * std::numbers::pi)));
        return uniform_breaks(-halfP, halfP, std::max(n, 2));
    };
    // Scale of the unnormalized mass, used only for the inner error floor.
    const double scale = std::pow(std::numbers::pi, 1.5) / (2.0 * std::sqrt(f.sigma) * std::abs(f.q));

    auto part = [&](double lo, double hi) -> Value {
        const auto outer = oscillation_breaks(lo, hi, outerRate);
        return integrate_nested(f, std::span<const double>(outer), innerBreaks, spec, scale).value;
    };
    auto plus = [](Value a, const Value& b, double w) {
        for (std::size_t i = 0; i < a.size(); ++i) {
            a[i] += w * b[i];
        }
        return a;
    };

    // inside = integral over [0, X]; estimate = inside + 2 * integral over [X, 2X].
    double X = cutoff.start;
    Value inside = part(0.0, X);
    Value last = part(X, 2.0 * X);
    Value estimate = plus(inside, last, 2.0);
    while (2.0 * X < cutoff.limit) {
        inside = plus(inside, last, 1.0);
        X *= 2.0;
        last = part(X, 2.0 * X);
        const Value next = plus(inside, last, 2.0);
        double change = 0.0;
        for (std::size_t i = 0; i < next.size(); ++i) {
            change = std::max(change, std::abs(next[i] - estimate[i]));
        }
        estimate = next;
        // What survives the 1/X correction falls at least like X^-2, so the
        // newer estimate is off by about a third of the change.
        if (change / 3.0 <= 10.0 * spec.relTol * std::abs(estimate[0])) {
            break;
        }
    }
    return estimate;
}

template <std::size_t NP>
Integrand<NP> make_integrand(double alphaL, double betaL, double sigma, const CrystalParams& crystal,
                             const std::array<double, NP>& phases, bool withOutcomes) {
    Integrand<NP> f{alphaL, betaL, sigma, crystal.b(), crystal.q(), {}, withOutcomes};
    for (std::size_t k = 0; k < NP; ++k) {
        f.rotations[k] = std::polar(1.0, phases[k]);
    }
    return f;
}

}

/// Normalization constant N of the joint amplitude, from a 2-D quadrature of
/// the symmetrized state norm.
inline double normalize_biphoton(const CrystalParams& crystal, double sigma, const QuadratureSpec& spec) {
    validate(crystal);
    require_positive_sigma(sigma);
    spec.validate();
    const auto f = spdc_detail::make_integrand<0>(0.0, 0.0, sigma, crystal, {}, false);
    const double mass =
        spdc_detail::integrate_folded(f, spdc_detail::omega_cutoff(crystal, 0.0, 0.0, sigma, spec), spec)[0];
    return 1.0 / std::sqrt(mass);
}

/// Case L distributions at several phases, sharing one quadrature pass.
template <std::size_t NP>
std::array<OutcomeDistribution, NP> spdc_distributions(const DispersionParams& params, const CrystalParams& crystal,
                                                       const std::array<double, NP>& phases,
                                                       const QuadratureSpec& spec) {
    validate(crystal);
    require_positive_sigma(params.sigma);
    spec.validate();
    const double n = normalize_biphoton(crystal, params.sigma, spec);
    const auto f = spdc_detail::make_integrand<NP>(params.alphaL, params.betaL, params.sigma, crystal, phases, true);
    const auto cutoff = spdc_detail::omega_cutoff(crystal, params.alphaL, params.betaL, params.sigma, spec);
    const auto v = spdc_detail::integrate_folded(f, cutoff, spec);
    std::array<OutcomeDistribution, NP> out;
    for (std::size_t k = 0; k < NP; ++k) {
        out[k].photons = 2;
        out[k].phi0 = phases[k];
        for (std::size_t l = 0; l < 3; ++l) {
            out[k].probs.push_back(n * n * v[1 + 3 * k + l]);
        }
    }
    return out;
}

inline OutcomeDistribution spdc_distribution(const DispersionParams& params, const CrystalParams& crystal,
                                             const QuadratureSpec& spec) {
    return spdc_distributions<1>(params, crystal, {params.phi0}, spec)[0];
}

// ---------------------------------------------------------------------------
// Fourier structure in phi0.

/// Equally spaced phases start + 2 pi j / N.
template <std::size_t N>
std::array<double, N> phase_nodes(double start = 0.0) {
    std::array<double, N> phases{};
    for (std::size_t j = 0; j < N; ++j) {
        phases[j] = start + 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(N);
    }
    return phases;
}

/// Fourier coefficient c_k of each outcome from samples at equally spaced phases.
inline std::vector<Complex> sample_coefficient(std::span<const OutcomeDistribution> samples, int k) {
    if (samples.empty()) {
        throw InvalidArgument("no samples");
    }
    const std::size_t outcomes = samples.front().probs.size();
    std::vector<Complex> c(outcomes);
    for (const auto& s : samples) {
        if (s.probs.size() != outcomes) {
            throw InvalidArgument("samples disagree on the number of outcomes");
        }
        const Complex e = std::polar(1.0 / static_cast<double>(samples.size()), -k * s.phi0);
        for (std::size_t l = 0; l < outcomes; ++l) {
            c[l] += e * s.probs[l];
        }
    }
    return c;
}

/// Exact trigonometric interpolation through 5 equally spaced samples.
inline std::vector<PhaseFourierSeries> fourier_from_samples(std::span<const OutcomeDistribution> samples) {
    if (samples.size() != 5) {
        throw InvalidArgument("fourier_from_samples needs 5 equally spaced samples");
    }
    const auto c0 = sample_coefficient(samples, 0);
    const auto c1 = sample_coefficient(samples, 1);
    const auto c2 = sample_coefficient(samples, 2);
    std::vector<PhaseFourierSeries> out(c0.size());
    for (std::size_t l = 0; l < out.size(); ++l) {
        out[l] = {c0[l].real(), c1[l], c2[l]};
    }
    return out;
}

/// Series for any evaluator phi0 -> OutcomeDistribution.
template <class Evaluator>
std::vector<PhaseFourierSeries> fourier_decompose(Evaluator&& evaluate) {
    std::array<OutcomeDistribution, 5> samples;
    const auto phases = phase_nodes<5>();
    for (std::size_t j = 0; j < 5; ++j) {
        samples[j] = evaluate(phases[j]);
        samples[j].phi0 = phases[j];
    }
    return fourier_from_samples(samples);
}

/// Series of a closed-form-free case A-K through the oracle.
inline std::vector<PhaseFourierSeries> fourier_decompose(CaseId id, DispersionParams params, const QuadratureSpec& spec) {
    if (id == CaseId::L) {
        throw InvalidArgument("case L needs crystal parameters; use fourier_decompose_spdc");
    }
    return fourier_decompose([&](double phi) {
        params.phi0 = phi;
        return oracle_distribution(id, params, spec);
    });
}

inline std::vector<PhaseFourierSeries> fourier_decompose_spdc(const DispersionParams& params,
                                                              const CrystalParams& crystal,
                                                              const QuadratureSpec& spec) {
    const auto samples = spdc_distributions<5>(params, crystal, phase_nodes<5>(), spec);
    return fourier_from_samples(samples);
}

/// Largest |c_k| with 2 < |k| <= N/2 over all outcomes, from N equally spaced samples.
inline double harmonic_excess(std::span<const OutcomeDistribution> samples) {
    double worst = 0.0;
    const int top = static_cast<int>(samples.size()) / 2;
    for (int k = 3; k <= top; ++k) {
        for (const Complex& c : sample_coefficient(samples, k)) {
            worst = std::max(worst, std::abs(c));
        }
    }
    return worst;
}

}

#endif
