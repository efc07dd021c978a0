#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "dispersim/analytic.hpp"

using namespace dispersim;

namespace {

constexpr double pi = std::numbers::pi;

const std::vector<CaseId> closed_form_cases = {CaseId::A, CaseId::B, CaseId::C, CaseId::D, CaseId::E, CaseId::F,
                                               CaseId::G, CaseId::H, CaseId::I, CaseId::J, CaseId::K};

struct RandomParams {
    std::mt19937_64 rng;
    std::uniform_real_distribution<double> alpha{0.0, 3.0}, beta{-2.0, 2.0}, sigma{0.2, 5.0}, phase{-pi, pi};

    explicit RandomParams(unsigned seed) : rng(seed) {}
    DispersionParams operator()() { return {alpha(rng), beta(rng), sigma(rng), phase(rng)}; }
};

void expect_same(const OutcomeDistribution& a, const OutcomeDistribution& b, double tol) {
    ASSERT_EQ(a.probs.size(), b.probs.size());
    for (std::size_t l = 0; l < a.probs.size(); ++l) {
        EXPECT_NEAR(a.probs[l], b.probs[l], tol) << "outcome " << l;
    }
}

}

TEST(Analytic, SinglePhotonDispersionless) {
    const auto d = analytic_distribution(CaseId::A, {0.0, 0.0, 1.0, 0.0});
    ASSERT_EQ(d.probs.size(), 2u);
    EXPECT_EQ(d.photons, 1);
    EXPECT_NEAR(d.probs[0], 0.0, 1e-15);
    EXPECT_NEAR(d.probs[1], 1.0, 1e-15);
}

TEST(Analytic, NoonCoincidencesVanishWithoutDispersion) {
    for (double phi : {-2.0, 0.0, 0.4, 3.0}) {
        const auto d = analytic_distribution(CaseId::E, {0.0, 0.0, 1.0, phi});
        EXPECT_NEAR(d.probs[0], 0.5, 1e-15);
        EXPECT_NEAR(d.probs[1], 0.0, 1e-15);
        EXPECT_NEAR(d.probs[2], 0.5, 1e-15);
    }
}

TEST(Analytic, SinglePhotonWithGroupDelay) {
    const auto d = analytic_distribution(CaseId::A, {1.0, 0.0, 1.0, 0.0});
    EXPECT_NEAR(d.probs[0], 0.5 * (1.0 - std::exp(-0.25)), 1e-15);
    EXPECT_NEAR(d.probs[0], 0.110600, 5e-7);
}

TEST(Analytic, DualFockAnticorrelatedIgnoresGroupDelay) {
    const auto d = analytic_distribution(CaseId::H, {7.0, 0.0, 1.0, pi / 4.0});
    EXPECT_NEAR(d.probs[0], 0.25, 1e-15);
    EXPECT_NEAR(d.probs[1], 0.5, 1e-15);
    EXPECT_NEAR(d.probs[2], 0.25, 1e-15);
}

TEST(Analytic, HomNoonAlwaysCoincidentWithoutSecondOrder) {
    for (double alpha : {0.0, 0.7, 3.0, 12.0}) {
        const auto d = analytic_distribution(CaseId::K, {alpha, 0.0, 1.0, 0.0});
        EXPECT_NEAR(d.probs[1], 1.0, 1e-15);
    }
}

TEST(Analytic, RejectsCaseLAndBadSigma) {
    EXPECT_THROW(analytic_distribution(CaseId::L, {}), InvalidArgument);
    EXPECT_THROW(phase_fourier(CaseId::L, {}), InvalidArgument);
    EXPECT_THROW(analytic_distribution(CaseId::A, {0.0, 0.0, 0.0}), InvalidArgument);
    EXPECT_THROW(phase_fourier(CaseId::C, {0.0, 0.0, -1.0}), InvalidArgument);
}

TEST(Analytic, Normalization) {
    RandomParams gen(1);
    for (int trial = 0; trial < 300; ++trial) {
        const auto p = gen();
        for (auto id : closed_form_cases) {
            const auto d = analytic_distribution(id, p);
            ASSERT_EQ(static_cast<int>(d.probs.size()), photon_count(id) + 1);
            EXPECT_NEAR(d.total(), 1.0, 1e-12);
            for (double v : d.probs) {
                EXPECT_GE(v, -1e-12);
                EXPECT_LE(v, 1.0 + 1e-12);
            }
        }
    }
}

TEST(Analytic, EquivalentCasesAgreePointwise) {
    RandomParams gen(2);
    for (int trial = 0; trial < 200; ++trial) {
        const auto p = gen();
        expect_same(analytic_distribution(CaseId::D, p), analytic_distribution(CaseId::J, p), 1e-14);
        expect_same(analytic_distribution(CaseId::H, p), analytic_distribution(CaseId::K, p), 1e-14);
    }
}

TEST(Analytic, ZeroDispersionCollapse) {
    for (double sigma : {0.2, 1.0, 5.0}) {
        for (double phi = -pi; phi < pi; phi += 0.25) {
            const DispersionParams p{0.0, 0.0, sigma, phi};
            expect_same(analytic_distribution(CaseId::C, p), analytic_distribution(CaseId::F, p), 1e-14);
            expect_same(analytic_distribution(CaseId::J, p), analytic_distribution(CaseId::K, p), 1e-14);
        }
    }
}

TEST(Analytic, HomNoonAnticorrelatedIgnoresAlpha) {
    RandomParams gen(3);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = gen();
        const auto ref = analytic_distribution(CaseId::K, p);
        p.alphaL = 10.0 * gen.alpha(gen.rng);
        expect_same(analytic_distribution(CaseId::K, p), ref, 1e-15);
    }
}

TEST(Analytic, NoonMachZehnderIgnoresPhase) {
    RandomParams gen(4);
    for (int trial = 0; trial < 100; ++trial) {
        auto p = gen();
        for (auto id : {CaseId::E, CaseId::G}) {
            const auto ref = analytic_distribution(id, p);
            auto q = p;
            q.phi0 = gen.phase(gen.rng);
            expect_same(analytic_distribution(id, q), ref, 1e-15);
        }
    }
}

TEST(Analytic, RescalingInvariance) {
    RandomParams gen(5);
    for (int trial = 0; trial < 100; ++trial) {
        const auto p = gen();
        for (double t : {0.5, 2.0, 10.0}) {
            const DispersionParams q{std::sqrt(t) * p.alphaL, t * p.betaL, t * p.sigma, p.phi0};
            for (auto id : closed_form_cases) {
                expect_same(analytic_distribution(id, q), analytic_distribution(id, p), 1e-13);
            }
        }
    }
}

TEST(PhaseFourier, ReconstructsDistributions) {
    RandomParams gen(6);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = gen();
        for (auto id : closed_form_cases) {
            const auto series = phase_fourier(id, p);
            for (double phi = -pi; phi < pi; phi += 0.37) {
                auto q = p;
                q.phi0 = phi;
                const auto d = analytic_distribution(id, q);
                ASSERT_EQ(series.size(), d.probs.size());
                for (std::size_t l = 0; l < series.size(); ++l) {
                    EXPECT_NEAR(series[l](phi), d.probs[l], 1e-14);
                }
            }
        }
    }
}

TEST(PhaseFourier, CoefficientSums) {
    RandomParams gen(7);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = gen();
        for (auto id : closed_form_cases) {
            double c0 = 0.0;
            Complex c1, c2;
            for (const auto& s : phase_fourier(id, p)) {
                c0 += s.c0;
                c1 += s.c1;
                c2 += s.c2;
                EXPECT_GE(s.c0, 0.0);
            }
            EXPECT_NEAR(c0, 1.0, 1e-15);
            EXPECT_NEAR(std::abs(c1), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(c2), 0.0, 1e-15);
        }
    }
}

TEST(PhaseFourier, DualFockAnticorrelatedSecondHarmonic) {
    const DispersionParams p{0.3, 0.8, 1.2};
    const auto s = dispersion_shape(p);
    const auto series = phase_fourier(CaseId::H, p);
    EXPECT_NEAR(series[0].c0, 0.25, 1e-15);
    EXPECT_EQ(std::abs(series[0].c1), 0.0);
    EXPECT_NEAR(std::abs(series[0].c2), 1.0 / (8.0 * std::sqrt(s.r1)), 1e-15);
    // Only the phase up to sign is convention; the angle is theta1 / 2 modulo pi.
    EXPECT_NEAR(std::remainder(std::arg(series[0].c2) - 0.5 * s.theta1, pi), 0.0, 1e-14);
}

TEST(PhaseFourier, NoonHasNoHarmonics) {
    for (auto id : {CaseId::E, CaseId::G}) {
        for (const auto& s : phase_fourier(id, {1.1, -0.4, 0.6})) {
            EXPECT_TRUE(s.is_constant(0.0));
        }
    }
}

TEST(PhaseFourier, SinglePhotonFirstHarmonic) {
    const DispersionParams p{1.3, 0.5, 0.9};
    const auto s = dispersion_shape(p);
    const auto series = phase_fourier(CaseId::A, p);
    EXPECT_NEAR(std::abs(series[0].c1), s.zeta / (4.0 * std::sqrt(s.r1)), 1e-15);
    EXPECT_EQ(std::abs(series[0].c2), 0.0);
}

TEST(PhaseFourier, SineAndCosineCasesShareMagnitudes) {
    RandomParams gen(8);
    for (int trial = 0; trial < 50; ++trial) {
        const auto p = gen();
        const auto a = phase_fourier(CaseId::A, p);
        const auto b = phase_fourier(CaseId::B, p);
        const auto i = phase_fourier(CaseId::I, p);
        for (std::size_t l = 0; l < 2; ++l) {
            EXPECT_NEAR(std::abs(a[l].c1), std::abs(b[l].c1), 1e-15);
            EXPECT_NEAR(std::abs(a[l].c1), std::abs(i[l].c1), 1e-15);
            EXPECT_EQ(a[l].c0, b[l].c0);
        }
        // B is A delayed by a quarter period.
        for (double phi = -pi; phi < pi; phi += 0.5) {
            EXPECT_NEAR(b[0](phi), a[0](phi - pi / 2.0), 1e-14);
        }
    }
}
