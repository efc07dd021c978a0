#include <cctype>
#include <cmath>
#include <set>
#include <string>

#include <gtest/gtest.h>

#include "dispersim/states.hpp"

using namespace dispersim;

TEST(Catalog, HasTwelveRowsInOrder) {
    const auto& cat = case_catalog();
    ASSERT_EQ(cat.size(), 12u);
    for (std::size_t i = 0; i < cat.size(); ++i) {
        EXPECT_EQ(cat[i].id, all_cases[i]);
        EXPECT_EQ(to_char(cat[i].id), static_cast<char>('A' + i));
        EXPECT_EQ(&case_spec(cat[i].id), &cat[i]);
    }
}

TEST(Catalog, RowA) {
    const auto& a = case_catalog()[0];
    EXPECT_EQ(a.id, CaseId::A);
    EXPECT_EQ(a.photons, 1);
    EXPECT_EQ(a.interferometer, Interferometer::MachZehnder);
    EXPECT_EQ(a.family, StateFamily::Fock);
    EXPECT_EQ(a.correlation, Correlation::NotApplicable);
}

TEST(Catalog, RowK) {
    const auto& k = case_catalog()[10];
    EXPECT_EQ(k.id, CaseId::K);
    EXPECT_EQ(k.photons, 2);
    EXPECT_EQ(k.interferometer, Interferometer::HongOuMandel);
    EXPECT_EQ(k.family, StateFamily::N00N);
    EXPECT_EQ(k.correlation, Correlation::Anticorrelated);
}

TEST(Catalog, RowsFAndL) {
    const auto& f = case_spec(CaseId::F);
    EXPECT_EQ(f.photons, 2);
    EXPECT_EQ(f.interferometer, Interferometer::MachZehnder);
    EXPECT_EQ(f.family, StateFamily::Fock);
    EXPECT_EQ(f.correlation, Correlation::Anticorrelated);
    const auto& l = case_spec(CaseId::L);
    EXPECT_EQ(l.photons, 2);
    EXPECT_EQ(l.interferometer, Interferometer::MachZehnder);
    EXPECT_EQ(l.family, StateFamily::SpdcFock);
    EXPECT_EQ(l.correlation, Correlation::Anticorrelated);
}

TEST(Catalog, OnlyTheHomCasesUseTheHomInterferometer) {
    std::set<CaseId> hom;
    for (const auto& c : case_catalog()) {
        if (c.interferometer == Interferometer::HongOuMandel) {
            hom.insert(c.id);
        }
    }
    EXPECT_EQ(hom, (std::set<CaseId>{CaseId::I, CaseId::J, CaseId::K}));
}

TEST(CaseLetters, RoundTrip) {
    for (auto id : all_cases) {
        EXPECT_EQ(parse_case_id(std::string(1, to_char(id))), id);
        EXPECT_EQ(case_from_char(static_cast<char>(std::tolower(to_char(id)))), id);
    }
}

TEST(CaseLetters, UnknownLetterListsValidOnes) {
    for (const char* bad : {"M", "", "AB", "1"}) {
        try {
            parse_case_id(bad);
            FAIL() << "accepted '" << bad << "'";
        } catch (const InvalidArgument& e) {
            EXPECT_NE(std::string(e.what()).find("A B C D E F G H I J K L"), std::string::npos);
        }
    }
}

TEST(GaussianEnvelope, Examples) {
    EXPECT_EQ(gaussian_envelope(1.0, 0.0), 1.0);
    EXPECT_NEAR(gaussian_envelope(1.0, std::sqrt(2.0)), std::exp(-1.0), 1e-15);
    EXPECT_NEAR(gaussian_envelope(4.0, 1.0), std::exp(-2.0), 1e-15);
}

TEST(GaussianEnvelope, EvenAndDecreasing) {
    for (double sigma : {0.2, 1.0, 5.0}) {
        double prev = gaussian_envelope(sigma, 0.0);
        for (double x = 0.05; x < 6.0; x += 0.05) {
            EXPECT_EQ(gaussian_envelope(sigma, x), gaussian_envelope(sigma, -x));
            const double v = gaussian_envelope(sigma, x);
            EXPECT_LT(v, prev);
            prev = v;
        }
    }
}

TEST(GaussianEnvelope, RejectsNonpositiveSigma) {
    EXPECT_THROW(gaussian_envelope(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(gaussian_envelope(-2.0, 1.0), InvalidArgument);
}

TEST(Crystal, DerivedQuantities) {
    const CrystalParams c{2.0, 6.0, 0.5};
    EXPECT_DOUBLE_EQ(c.b(), 1.0);
    EXPECT_DOUBLE_EQ(c.lambda_ratio(), 3.0);
    EXPECT_DOUBLE_EQ(c.q(), 3.0);
    EXPECT_NO_THROW(validate(c));
}

TEST(Crystal, FromBAndLambda) {
    const auto c = CrystalParams::from_b_lambda(20.0, 5.0);
    EXPECT_DOUBLE_EQ(c.b(), 20.0);
    EXPECT_DOUBLE_EQ(c.lambda_ratio(), 5.0);
    EXPECT_DOUBLE_EQ(c.q(), 100.0);
}

TEST(Crystal, Validation) {
    EXPECT_THROW(validate(CrystalParams{1.0, 1.0, 0.0}), InvalidArgument);
    EXPECT_THROW(validate(CrystalParams{1.0, 1.0, -1.0}), InvalidArgument);
    EXPECT_THROW(validate(CrystalParams{1.0, 0.0, 1.0}), InvalidArgument);
    EXPECT_THROW(validate(CrystalParams{std::nan(""), 1.0, 1.0}), InvalidArgument);
    EXPECT_NO_THROW(validate(CrystalParams{0.0, 1.0, 1.0}));
    EXPECT_THROW(CrystalParams({0.0, 1.0, 1.0}).lambda_ratio(), InvalidArgument);
}

TEST(Labels, Strings) {
    EXPECT_EQ(to_string(Interferometer::MachZehnder), "MZ");
    EXPECT_EQ(to_string(Interferometer::HongOuMandel), "HOM");
    EXPECT_EQ(to_string(StateFamily::SpdcFock), "SPDC Fock");
    EXPECT_EQ(to_string(Correlation::Anticorrelated), "anticorrelated");
}
