#ifndef DISPERSIM_QUADRATURE_HPP
#define DISPERSIM_QUADRATURE_HPP

// Adaptive Gauss-Kronrod (7/15) quadrature over real intervals, with nested
// application for rectangles. Results are deterministic: the subdivision
// sequence depends only on the integrand values, and the final value is a
// compensated sum over panels in left-to-right order.
//
// Value types: double, std::complex<double>, or std::array of either. The
// error norm of an array is the max over its components.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <queue>
#include <span>
#include <sstream>
#include <type_traits>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace dispersim {

struct QuadratureSpec {
    double relTol = 1e-9;
    int maxPanels = 1 << 14;
    /// Number of Gaussian standard deviations kept when truncating infinite ranges.
    double truncationWidth = 10.0;
    /// Absolute error floor, for integrals whose value is at or near zero.
    double absTol = 1e-15;

    static QuadratureSpec one_d() { return {}; }
    static QuadratureSpec two_d() {
        QuadratureSpec s;
        s.relTol = 1e-6;
        return s;
    }

    void validate() const {
        if (!(relTol > 0.0)) {
            throw InvalidArgument("quadrature relTol must be > 0");
        }
        if (maxPanels < 4) {
            throw InvalidArgument("quadrature maxPanels must be >= 4");
        }
        if (!(truncationWidth >= 4.0)) {
            throw InvalidArgument("quadrature truncationWidth must be >= 4");
        }
        if (!(absTol >= 0.0)) {
            throw InvalidArgument("quadrature absTol must be >= 0");
        }
    }
};

template <class V>
struct IntegralResult {
    V value{};
    double errorEstimate = 0.0;
    int panelsUsed = 0;
};

struct Interval {
    double lo;
    double hi;
};

struct Rect {
    double xlo;
    double xhi;
    double ylo;
    double yhi;
};

/// Symmetric interval outside of which exp(-sigmaEff x^2) < exp(-w^2/2).
inline Interval truncation_bounds(double sigmaEff, const QuadratureSpec& spec) {
    if (!(sigmaEff > 0.0) || !std::isfinite(sigmaEff)) {
        throw InvalidArgument("truncation_bounds needs sigmaEff > 0");
    }
    const double half = spec.truncationWidth / std::sqrt(2.0 * sigmaEff);
    return {-half, half};
}

namespace quad_detail {

template <class T>
struct is_std_array : std::false_type {};
template <class T, std::size_t N>
struct is_std_array<std::array<T, N>> : std::true_type {};

template <class V>
double magnitude(const V& v) {
    if constexpr (is_std_array<V>::value) {
        double m = 0.0;
        for (const auto& x : v) {
            m = std::max(m, std::abs(x));
        }
        return m;
    } else {
        return std::abs(v);
    }
}

template <class V>
void add_scaled(V& acc, const V& v, double w) {
    if constexpr (is_std_array<V>::value) {
        for (std::size_t i = 0; i < acc.size(); ++i) {
            acc[i] += w * v[i];
        }
    } else {
        acc += w * v;
    }
}

// Neumaier summation, componentwise.
template <class V>
struct CompensatedSum {
    V sum{};
    V carry{};

    static void step(double& s, double& c, double x) {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    static void step(std::complex<double>& s, std::complex<double>& c, const std::complex<double>& x) {
        double sr = s.real(), si = s.imag(), cr = c.real(), ci = c.imag();
        step(sr, cr, x.real());
        step(si, ci, x.imag());
        s = {sr, si};
        c = {cr, ci};
    }

    void add(const V& x) {
        if constexpr (is_std_array<V>::value) {
            for (std::size_t i = 0; i < x.size(); ++i) {
                step(sum[i], carry[i], x[i]);
            }
        } else {
            step(sum, carry, x);
        }
    }
    V result() const {
        V out = sum;
        add_scaled(out, carry, 1.0);
        return out;
    }
};

inline constexpr std::array<double, 8> kronrod_nodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.0};
inline constexpr std::array<double, 8> kronrod_weights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
// Gauss weights for kronrod_nodes[1], [3], [5] and the center.
inline constexpr std::array<double, 4> gauss_weights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class V>
struct Panel {
    double lo;
    double hi;
    V value;
    double error;
    double absolute;
    bool splittable;
};

// Real components of a value, in storage order.
template <class V>
std::span<const double> components(const V& v) {
    if constexpr (is_std_array<V>::value) {
        using T = typename V::value_type;
        constexpr std::size_t per = std::is_same_v<T, double> ? 1 : 2;
        return {reinterpret_cast<const double*>(v.data()), v.size() * per};
    } else {
        constexpr std::size_t per = std::is_same_v<V, double> ? 1 : 2;
        return {reinterpret_cast<const double*>(&v), per};
    }
}

template <class V, class F>
Panel<V> gauss_kronrod_panel(F& f, double lo, double hi) {
    const double center = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    std::array<V, 15> fv;
    fv[7] = f(center);
    for (std::size_t j = 0; j < 7; ++j) {
        const double dx = half * kronrod_nodes[j];
        fv[j] = f(center - dx);
        fv[14 - j] = f(center + dx);
    }
    V kronrod{};
    V gauss{};
    add_scaled(kronrod, fv[7], kronrod_weights[7]);
    add_scaled(gauss, fv[7], gauss_weights[3]);
    for (std::size_t j = 0; j < 7; ++j) {
        add_scaled(kronrod, fv[j], kronrod_weights[j]);
        add_scaled(kronrod, fv[14 - j], kronrod_weights[j]);
        if (j % 2 == 1) {
            add_scaled(gauss, fv[j], gauss_weights[j / 2]);
            add_scaled(gauss, fv[14 - j], gauss_weights[j / 2]);
        }
    }

    // Per-component error in the QUADPACK qk15 form: |K - G| rescaled by the
    // spread of f about its mean, which tracks the true Kronrod error far
    // better than the raw difference.
    constexpr double eps = 2.220446049250313e-16;
    const auto k = components(kronrod);
    const auto g = components(gauss);
    double error = 0.0;
    double largest = 0.0;
    for (std::size_t c = 0; c < k.size(); ++c) {
        const double mean = 0.5 * k[c];
        double spread = kronrod_weights[7] * std::abs(components(fv[7])[c] - mean);
        double absolute = kronrod_weights[7] * std::abs(components(fv[7])[c]);
        for (std::size_t j = 0; j < 7; ++j) {
            const double f1 = components(fv[j])[c];
            const double f2 = components(fv[14 - j])[c];
            spread += kronrod_weights[j] * (std::abs(f1 - mean) + std::abs(f2 - mean));
            absolute += kronrod_weights[j] * (std::abs(f1) + std::abs(f2));
        }
        spread *= half;
        absolute *= half;
        double e = std::abs((k[c] - g[c]) * half);
        if (spread != 0.0 && e != 0.0) {
            e = spread * std::min(1.0, std::pow(200.0 * e / spread, 1.5));
        }
        if (absolute > 1e-300 / (50.0 * eps)) {
            e = std::max(50.0 * eps * absolute, e);
        }
        error = std::max(error, e);
        largest = std::max(largest, absolute);
    }

    V value{};
    add_scaled(value, kronrod, half);
    // A panel narrower than a few ulps of its position cannot be refined.
    const double scale = std::max(std::abs(lo), std::abs(hi));
    const bool splittable = (hi - lo) > 64.0 * eps * std::max(scale, 1e-300);
    return {lo, hi, value, error, largest, splittable};
}

}

/// Adaptive integral of f over consecutive intervals [breaks[0], breaks[1]], ...
/// Supplying breakpoints resolves known oscillation or peak scales up front.
template <class F>
auto integrate_1d(F&& f, std::span<const double> breaks, const QuadratureSpec& spec)
    -> IntegralResult<std::decay_t<std::invoke_result_t<F&, double>>> {
    using V = std::decay_t<std::invoke_result_t<F&, double>>;
    using P = quad_detail::Panel<V>;
    spec.validate();
    if (breaks.size() < 2) {
        throw InvalidArgument("integrate_1d needs at least two breakpoints");
    }
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (!(breaks[i] > breaks[i - 1])) {
            throw InvalidArgument("integrate_1d needs strictly increasing limits (lo < hi)");
        }
    }
    const int initial = static_cast<int>(breaks.size()) - 1;
    if (initial > spec.maxPanels) {
        std::ostringstream msg;
        msg << "quadrature needs " << initial << " initial panels on [" << breaks.front() << ", " << breaks.back()
            << "] but maxPanels is " << spec.maxPanels;
        throw NonConvergence(msg.str(), std::numeric_limits<double>::infinity(), spec.relTol);
    }

    std::vector<P> panels;
    panels.reserve(static_cast<std::size_t>(std::min(spec.maxPanels, 4096)));
    auto by_error = [&panels](std::size_t a, std::size_t b) {
        // Ties break on position so the refinement order is reproducible.
        if (panels[a].error != panels[b].error) {
            return panels[a].error < panels[b].error;
        }
        return panels[a].lo > panels[b].lo;
    };
    std::priority_queue<std::size_t, std::vector<std::size_t>, decltype(by_error)> queue(by_error);

    V total{};
    double totalError = 0.0;
    double totalAbsolute = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        panels.push_back(quad_detail::gauss_kronrod_panel<V>(f, breaks[i], breaks[i + 1]));
        quad_detail::add_scaled(total, panels.back().value, 1.0);
        totalError += panels.back().error;
        totalAbsolute += panels.back().absolute;
        queue.push(panels.size() - 1);
    }

    // Below 100 eps times the integral of |f| the estimate is rounding noise.
    auto target = [&] {
        return std::max({spec.relTol * quad_detail::magnitude(total), spec.absTol, 100.0 * 2.220446049250313e-16 * totalAbsolute});
    };

    while (totalError > target() && !queue.empty()) {
        const std::size_t worst = queue.top();
        if (!panels[worst].splittable) {
            break;
        }
        if (static_cast<int>(panels.size()) + 1 > spec.maxPanels) {
            std::ostringstream msg;
            msg << "quadrature did not converge on [" << breaks.front() << ", " << breaks.back()
                << "] within " << spec.maxPanels << " panels (error estimate " << totalError
                << ", target " << target() << ")";
            throw NonConvergence(msg.str(), totalError, target());
        }
        queue.pop();
        const P parent = panels[worst];
        const double mid = 0.5 * (parent.lo + parent.hi);
        P left = quad_detail::gauss_kronrod_panel<V>(f, parent.lo, mid);
        P right = quad_detail::gauss_kronrod_panel<V>(f, mid, parent.hi);
        quad_detail::add_scaled(total, parent.value, -1.0);
        quad_detail::add_scaled(total, left.value, 1.0);
        quad_detail::add_scaled(total, right.value, 1.0);
        totalError += left.error + right.error - parent.error;
        totalAbsolute += left.absolute + right.absolute - parent.absolute;
        panels[worst] = left;
        panels.push_back(right);
        queue.push(worst);
        queue.push(panels.size() - 1);
    }

    std::sort(panels.begin(), panels.end(), [](const P& a, const P& b) { return a.lo < b.lo; });
    quad_detail::CompensatedSum<V> sum;
    double errorSum = 0.0;
    for (const auto& p : panels) {
        sum.add(p.value);
        errorSum += p.error;
    }
    IntegralResult<V> out;
    out.value = sum.result();
    out.errorEstimate = errorSum;
    out.panelsUsed = static_cast<int>(panels.size());
    return out;
}

template <class F>
auto integrate_1d(F&& f, double lo, double hi, const QuadratureSpec& spec) {
    const std::array<double, 2> breaks{lo, hi};
    return integrate_1d(std::forward<F>(f), std::span<const double>(breaks), spec);
}

/// n equal panels covering [lo, hi].
inline std::vector<double> uniform_breaks(double lo, double hi, int n) {
    n = std::max(n, 1);
    std::vector<double> b(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i) {
        b[static_cast<std::size_t>(i)] = lo + (hi - lo) * static_cast<double>(i) / n;
    }
    b.back() = hi;
    return b;
}

/// Nested adaptive integral: outer over x with breakpoints outerBreaks, inner
/// over y with breakpoints innerBreaks(x). Inner integrals get an absolute
/// floor derived from scale, the expected magnitude of the full integral.
template <class F, class InnerBreaks>
auto integrate_nested(F&& f, std::span<const double> outerBreaks, InnerBreaks&& innerBreaks,
                      const QuadratureSpec& spec, double scale)
    -> IntegralResult<std::decay_t<std::invoke_result_t<F&, double, double>>> {
    using V = std::decay_t<std::invoke_result_t<F&, double, double>>;
    spec.validate();
    const double width = outerBreaks.back() - outerBreaks.front();
    QuadratureSpec inner = spec;
    inner.relTol = 0.1 * spec.relTol;
    inner.absTol = std::max(spec.absTol, 0.1 * spec.relTol * std::abs(scale) / width);
    double worstInner = 0.0;
    auto outerIntegrand = [&](double x) -> V {
        const auto breaks = innerBreaks(x);
        auto slice = [&](double y) -> V { return f(x, y); };
        const auto r = integrate_1d(slice, std::span<const double>(breaks), inner);
        worstInner = std::max(worstInner, r.errorEstimate);
        return r.value;
    };
    auto outer = integrate_1d(outerIntegrand, outerBreaks, spec);
    outer.errorEstimate += width * worstInner;
    return outer;
}

/// Integral of f(x, y) over a rectangle, by nested adaptive quadrature.
template <class F>
auto integrate_2d(F&& f, const Rect& r, const QuadratureSpec& spec) {
    using V = std::decay_t<std::invoke_result_t<F&, double, double>>;
    if (!(r.xlo < r.xhi) || !(r.ylo < r.yhi)) {
        throw InvalidArgument("integrate_2d needs a nonempty rectangle");
    }
    // Coarse 15x15 Kronrod estimate of the integral of |f|, used only to set
    // the inner absolute error floor.
    double scale = 0.0;
    {
        const double cx = 0.5 * (r.xlo + r.xhi), hx = 0.5 * (r.xhi - r.xlo);
        const double cy = 0.5 * (r.ylo + r.yhi), hy = 0.5 * (r.yhi - r.ylo);
        for (int i = -7; i <= 7; ++i) {
            const double wx = quad_detail::kronrod_weights[static_cast<std::size_t>(7 - std::abs(i))];
            const double x = cx + (i < 0 ? -1 : 1) * hx * quad_detail::kronrod_nodes[static_cast<std::size_t>(7 - std::abs(i))];
            for (int j = -7; j <= 7; ++j) {
                const double wy = quad_detail::kronrod_weights[static_cast<std::size_t>(7 - std::abs(j))];
                const double y = cy + (j < 0 ? -1 : 1) * hy * quad_detail::kronrod_nodes[static_cast<std::size_t>(7 - std::abs(j))];
                scale += wx * wy * hx * hy * quad_detail::magnitude(V(f(x, y)));
            }
        }
    }
    const std::array<double, 2> outer{r.xlo, r.xhi};
    const std::array<double, 2> innerFixed{r.ylo, r.yhi};
    return integrate_nested(std::forward<F>(f), std::span<const double>(outer),
                            [&](double) { return innerFixed; }, spec, scale);
}

}

#endif
