#ifndef DISPERSIM_STATES_HPP
#define DISPERSIM_STATES_HPP

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <string_view>

#include "errors.hpp"
#include "phase_core.hpp"

namespace dispersim {

enum class CaseId { A, B, C, D, E, F, G, H, I, J, K, L };

enum class Interferometer { MachZehnder, HongOuMandel };
enum class StateFamily { Fock, DualFock, N00N, SpdcFock };
enum class Correlation { None, Anticorrelated, NotApplicable };

struct CaseSpec {
    CaseId id;
    int photons;
    Interferometer interferometer;
    StateFamily family;
    Correlation correlation;
};

inline constexpr std::array<CaseId, 12> all_cases = {
    CaseId::A, CaseId::B, CaseId::C, CaseId::D, CaseId::E, CaseId::F,
    CaseId::G, CaseId::H, CaseId::I, CaseId::J, CaseId::K, CaseId::L};

inline constexpr std::array<CaseSpec, 12> case_table = {{
    {CaseId::A, 1, Interferometer::MachZehnder, StateFamily::Fock, Correlation::NotApplicable},
    {CaseId::B, 1, Interferometer::MachZehnder, StateFamily::N00N, Correlation::NotApplicable},
    {CaseId::C, 2, Interferometer::MachZehnder, StateFamily::Fock, Correlation::None},
    {CaseId::D, 2, Interferometer::MachZehnder, StateFamily::DualFock, Correlation::None},
    {CaseId::E, 2, Interferometer::MachZehnder, StateFamily::N00N, Correlation::None},
    {CaseId::F, 2, Interferometer::MachZehnder, StateFamily::Fock, Correlation::Anticorrelated},
    {CaseId::G, 2, Interferometer::MachZehnder, StateFamily::N00N, Correlation::Anticorrelated},
    {CaseId::H, 2, Interferometer::MachZehnder, StateFamily::DualFock, Correlation::Anticorrelated},
    {CaseId::I, 1, Interferometer::HongOuMandel, StateFamily::N00N, Correlation::None},
    {CaseId::J, 2, Interferometer::HongOuMandel, StateFamily::N00N, Correlation::None},
    {CaseId::K, 2, Interferometer::HongOuMandel, StateFamily::N00N, Correlation::Anticorrelated},
    {CaseId::L, 2, Interferometer::MachZehnder, StateFamily::SpdcFock, Correlation::Anticorrelated},
}};

/// The twelve input configurations, in table order A..L.
inline const std::array<CaseSpec, 12>& case_catalog() { return case_table; }

inline const CaseSpec& case_spec(CaseId id) { return case_table[static_cast<std::size_t>(id)]; }

inline char to_char(CaseId id) { return static_cast<char>('A' + static_cast<int>(id)); }

inline std::optional<CaseId> case_from_char(char c) {
    if (c >= 'a' && c <= 'l') {
        c = static_cast<char>(c - 'a' + 'A');
    }
    if (c < 'A' || c > 'L') {
        return std::nullopt;
    }
    return static_cast<CaseId>(c - 'A');
}

inline CaseId parse_case_id(std::string_view text) {
    if (text.size() == 1) {
        if (auto id = case_from_char(text[0])) {
            return *id;
        }
    }
    throw InvalidArgument("unknown case '" + std::string(text) +
                          "'; valid cases are A B C D E F G H I J K L");
}

inline int photon_count(CaseId id) { return case_spec(id).photons; }

inline std::string_view to_string(Interferometer v) {
    return v == Interferometer::MachZehnder ? "MZ" : "HOM";
}

inline std::string_view to_string(StateFamily v) {
    switch (v) {
    case StateFamily::Fock: return "Fock";
    case StateFamily::DualFock: return "Dual Fock";
    case StateFamily::N00N: return "N00N";
    case StateFamily::SpdcFock: return "SPDC Fock";
    }
    return "?";
}

inline std::string_view to_string(Correlation v) {
    switch (v) {
    case Correlation::None: return "none";
    case Correlation::Anticorrelated: return "anticorrelated";
    case Correlation::NotApplicable: return "not applicable";
    }
    return "?";
}

/// Unnormalized single-photon spectral amplitude exp(-sigma detuning^2 / 2).
inline double gaussian_envelope(double sigma, double detuning) {
    require_positive_sigma(sigma);
    return std::exp(-0.5 * sigma * detuning * detuning);
}

/// Nonlinear crystal for the downconversion source.
///
/// lambdaP = 2 k_p'(2 w0) - k_s'(w0) - k_i'(w0) and lambdaBig = k_i'(w0) - k_s'(w0),
/// so the phase mismatch is dk = lambdaP * Omega_p + lambdaBig * Omega.
/// Only the products with the crystal length enter the joint amplitude.
struct CrystalParams {
    double lambdaP = 1.0;
    double lambdaBig = 1.0;
    double crystalLength = 1.0;

    /// b = lambdaP * L_c. Figure captions elsewhere quote b = L_c lambdaP / 2;
    /// this library uses the unhalved product throughout.
    double b() const { return lambdaP * crystalLength; }
    /// lambda = lambdaBig / lambdaP.
    double lambda_ratio() const {
        if (lambdaP == 0.0) {
            throw InvalidArgument("lambda ratio undefined for lambdaP == 0");
        }
        return lambdaBig / lambdaP;
    }
    /// Signal-idler mismatch coefficient lambdaBig * L_c.
    double q() const { return lambdaBig * crystalLength; }

    /// Crystal with unit length and the given b and lambda ratio.
    static CrystalParams from_b_lambda(double b, double lambda) {
        return CrystalParams{b, lambda * b, 1.0};
    }
};

inline void validate(const CrystalParams& crystal) {
    if (!(crystal.crystalLength > 0.0) || !std::isfinite(crystal.crystalLength)) {
        throw InvalidArgument("crystal length must be > 0");
    }
    if (!std::isfinite(crystal.lambdaP) || !std::isfinite(crystal.lambdaBig)) {
        throw InvalidArgument("crystal dispersion coefficients must be finite");
    }
    if (crystal.q() == 0.0) {
        // No phase-matching constraint on the signal-idler difference: the
        // biphoton is not normalizable.
        throw InvalidArgument("crystal needs lambdaBig * L_c != 0 (lambda ratio must be nonzero)");
    }
}

}

#endif
