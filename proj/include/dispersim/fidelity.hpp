#ifndef DISPERSIM_FIDELITY_HPP
#define DISPERSIM_FIDELITY_HPP

// Shannon mutual information, in bits, between a uniformly distributed phase
// and the photon-count outcome, evaluated with the trapezoid rule on a
// uniform periodic grid.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <vector>

#include "distribution.hpp"
#include "errors.hpp"

namespace dispersim {

/// Uniform nodes -pi + 2 pi m / points on [-pi, pi).
///
/// The default is large because a probability that touches zero makes
/// P log P only once differentiable there; the trapezoid error then falls
/// like points^-3 rather than spectrally.
struct PhaseGrid {
    int points = 8192;

    void validate() const {
        if (points < 16 || points % 2 != 0) {
            std::ostringstream msg;
            msg << "phase grid needs an even number of points >= 16, got " << points;
            throw InvalidArgument(msg.str());
        }
    }

    double node(int m) const { return -std::numbers::pi + 2.0 * std::numbers::pi * m / points; }
};

struct MutualInfo {
    double bits = 0.0;
    int gridPoints = 0;
    /// |H(points) - H(points / 2)|; the half grid is every other node.
    double estimatedError = 0.0;
};

inline constexpr double probability_slack = 1e-6;
inline constexpr double normalization_slack = 1e-4;

inline MutualInfo mutual_information(const std::vector<PhaseFourierSeries>& series, const PhaseGrid& grid = {}) {
    grid.validate();
    if (series.empty()) {
        throw InvalidArgument("mutual_information needs at least one outcome");
    }
    double full = 0.0;
    double half = 0.0;
    for (int m = 0; m < grid.points; ++m) {
        const double phi = grid.node(m);
        double sum = 0.0;
        double node = 0.0;
        for (const auto& s : series) {
            const double raw = s(phi);
            if (raw < -probability_slack || raw > 1.0 + probability_slack || !std::isfinite(raw)) {
                std::ostringstream msg;
                msg << "outcome probability " << raw << " at phase " << phi << " is outside [0, 1]";
                throw InvalidDistribution(msg.str());
            }
            sum += raw;
            const double p = clamp_probability(raw);
            // The phase average c0 is the outcome's marginal; P log P -> 0 as P -> 0.
            if (p < 1e-30 || s.c0 <= 0.0) {
                continue;
            }
            node += p * std::log2(p / s.c0);
        }
        if (std::abs(sum - 1.0) > normalization_slack) {
            std::ostringstream msg;
            msg << "outcome probabilities sum to " << sum << " at phase " << phi;
            throw InvalidDistribution(msg.str());
        }
        full += node;
        if (m % 2 == 0) {
            half += node;
        }
    }
    full /= grid.points;
    half /= grid.points / 2;
    MutualInfo out;
    out.bits = std::max(0.0, full);
    out.gridPoints = grid.points;
    out.estimatedError = std::abs(full - half);
    return out;
}

struct GridRefinement {
    std::vector<int> points;
    std::vector<double> bits;
    /// bits[i] - bits[i - 1] for i >= 1.
    std::vector<double> differences;
    double estimatedError = 0.0;
};

inline GridRefinement mi_grid_refinement(const std::vector<PhaseFourierSeries>& series,
                                         const std::vector<PhaseGrid>& grids) {
    if (grids.size() < 2) {
        throw InvalidArgument("grid refinement needs at least two grids");
    }
    GridRefinement r;
    for (const auto& g : grids) {
        const auto mi = mutual_information(series, g);
        r.points.push_back(g.points);
        r.bits.push_back(mi.bits);
        if (r.bits.size() > 1) {
            r.differences.push_back(r.bits.back() - r.bits[r.bits.size() - 2]);
        }
    }
    r.estimatedError = std::abs(r.differences.back());
    return r;
}

}

#endif
