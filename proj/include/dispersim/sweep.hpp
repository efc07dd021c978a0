#ifndef DISPERSIM_SWEEP_HPP
#define DISPERSIM_SWEEP_HPP

// Parameter sweeps of the mutual information: JSON run configuration,
// deterministic parallel evaluation, CSV output and the figure presets.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include <json.hpp>

#include "analytic.hpp"
#include "errors.hpp"
#include "fidelity.hpp"
#include "oracle.hpp"
#include "phase_core.hpp"
#include "quadrature.hpp"
#include "states.hpp"

namespace dispersim {

inline constexpr std::string_view version = "1.0.0";

/// Configuration error; the message starts with the offending key path.
class ConfigError : public InvalidArgument {
public:
    ConfigError(const std::string& key, const std::string& problem) : InvalidArgument(key + ": " + problem), key_(key) {}
    const std::string& key() const { return key_; }

private:
    std::string key_;
};

enum class SweepParam { AlphaL, BetaL, Sigma, LambdaRatio, B };

inline std::string_view to_string(SweepParam p) {
    switch (p) {
    case SweepParam::AlphaL:
        return "alphaL";
    case SweepParam::BetaL:
        return "betaL";
    case SweepParam::Sigma:
        return "sigma";
    case SweepParam::LambdaRatio:
        return "lambdaRatio";
    case SweepParam::B:
        return "b";
    }
    return "?";
}

inline std::optional<SweepParam> sweep_param_from_string(std::string_view s) {
    for (auto p : {SweepParam::AlphaL, SweepParam::BetaL, SweepParam::Sigma, SweepParam::LambdaRatio, SweepParam::B}) {
        if (to_string(p) == s) {
            return p;
        }
    }
    return std::nullopt;
}

struct SweepRange {
    double start = 0.0;
    double stop = 1.0;
    int count = 2;

    std::vector<double> values() const {
        std::vector<double> v(static_cast<std::size_t>(count));
        for (int i = 0; i < count; ++i) {
            v[static_cast<std::size_t>(i)] = start + (stop - start) * i / (count - 1);
        }
        v.back() = stop;
        return v;
    }
};

/// Crystal as given in a configuration. Sweeps of b or the ratio keep the
/// other one fixed.
struct CrystalSpec {
    std::optional<double> b;
    std::optional<double> lambda;
    std::optional<CrystalParams> physical;

    CrystalParams at(std::optional<double> bValue, std::optional<double> lambdaValue) const {
        if (physical) {
            CrystalParams c = *physical;
            if (bValue || lambdaValue) {
                const double ratio = lambdaValue ? *lambdaValue : c.lambda_ratio();
                if (bValue) {
                    c.lambdaP = *bValue / c.crystalLength;
                }
                c.lambdaBig = ratio * c.lambdaP;
            }
            return c;
        }
        return CrystalParams::from_b_lambda(bValue ? *bValue : b.value(), lambdaValue ? *lambdaValue : lambda.value());
    }
};

struct FixedParams {
    double alphaL = 0.0;
    double betaL = 0.0;
    double sigma = 1.0;
    std::optional<CrystalSpec> crystal;
};

struct SweepConfig {
    std::vector<CaseId> cases;
    SweepParam sweepParam = SweepParam::AlphaL;
    SweepRange range;
    FixedParams fixed;
    QuadratureSpec quad = QuadratureSpec::two_d();
    PhaseGrid grid;

    bool has_case(CaseId id) const { return std::find(cases.begin(), cases.end(), id) != cases.end(); }

    DispersionParams params_at(double value) const {
        DispersionParams p{fixed.alphaL, fixed.betaL, fixed.sigma, 0.0};
        if (sweepParam == SweepParam::AlphaL) {
            p.alphaL = value;
        } else if (sweepParam == SweepParam::BetaL) {
            p.betaL = value;
        } else if (sweepParam == SweepParam::Sigma) {
            p.sigma = value;
        }
        return p;
    }

    CrystalParams crystal_at(double value) const {
        std::optional<double> b, lambda;
        if (sweepParam == SweepParam::B) {
            b = value;
        } else if (sweepParam == SweepParam::LambdaRatio) {
            lambda = value;
        }
        return fixed.crystal.value().at(b, lambda);
    }
};

namespace sweep_detail {

using nlohmann::json;

inline const json& require(const json& obj, const std::string& name, const std::string& path) {
    const auto it = obj.find(name);
    if (it == obj.end()) {
        throw ConfigError(path, "missing required key");
    }
    return *it;
}

inline double number(const json& v, const std::string& path) {
    if (!v.is_number()) {
        throw ConfigError(path, "must be a number");
    }
    const double d = v.get<double>();
    if (!std::isfinite(d)) {
        throw ConfigError(path, "must be finite");
    }
    return d;
}

inline void reject_unknown(const json& obj, std::initializer_list<std::string_view> known, const std::string& path) {
    for (const auto& [key, value] : obj.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw ConfigError(path.empty() ? key : path + "." + key, "unknown key");
        }
    }
}

inline std::string valid_letters() {
    std::string s;
    for (auto id : all_cases) {
        if (!s.empty()) {
            s += ", ";
        }
        s += to_char(id);
    }
    return s;
}

inline CrystalSpec parse_crystal(const json& c, SweepParam swept) {
    const std::string path = "fixed.crystal";
    if (!c.is_object()) {
        throw ConfigError(path, "must be an object");
    }
    reject_unknown(c, {"b", "lambda", "lambdaP", "lambdaBig", "crystalLength"}, path);
    CrystalSpec spec;
    const bool physical = c.contains("lambdaP") || c.contains("lambdaBig") || c.contains("crystalLength");
    if (physical) {
        if (c.contains("b") || c.contains("lambda")) {
            throw ConfigError(path, "give either {b, lambda} or {lambdaP, lambdaBig, crystalLength}, not both");
        }
        CrystalParams p;
        p.lambdaP = number(require(c, "lambdaP", path + ".lambdaP"), path + ".lambdaP");
        p.lambdaBig = number(require(c, "lambdaBig", path + ".lambdaBig"), path + ".lambdaBig");
        p.crystalLength = number(require(c, "crystalLength", path + ".crystalLength"), path + ".crystalLength");
        if (!(p.crystalLength > 0.0)) {
            throw ConfigError(path + ".crystalLength", "must be > 0");
        }
        if ((swept == SweepParam::B || swept == SweepParam::LambdaRatio) && p.lambdaP == 0.0) {
            throw ConfigError(path + ".lambdaP", "must be nonzero when sweeping b or lambdaRatio");
        }
        spec.physical = p;
        return spec;
    }
    if (swept != SweepParam::B) {
        spec.b = number(require(c, "b", path + ".b"), path + ".b");
    }
    if (swept != SweepParam::LambdaRatio) {
        spec.lambda = number(require(c, "lambda", path + ".lambda"), path + ".lambda");
    }
    return spec;
}

inline QuadratureSpec parse_quadrature(const json& q) {
    const std::string path = "quadrature";
    if (!q.is_object()) {
        throw ConfigError(path, "must be an object");
    }
    reject_unknown(q, {"relTol", "maxPanels", "truncationWidth", "absTol"}, path);
    QuadratureSpec s = QuadratureSpec::two_d();
    if (q.contains("relTol")) {
        s.relTol = number(q["relTol"], path + ".relTol");
        if (!(s.relTol > 0.0)) {
            throw ConfigError(path + ".relTol", "must be > 0");
        }
    }
    if (q.contains("maxPanels")) {
        if (!q["maxPanels"].is_number_integer() || q["maxPanels"].get<long long>() < 4 ||
            q["maxPanels"].get<long long>() > (1LL << 30)) {
            throw ConfigError(path + ".maxPanels", "must be an integer >= 4");
        }
        s.maxPanels = q["maxPanels"].get<int>();
    }
    if (q.contains("truncationWidth")) {
        s.truncationWidth = number(q["truncationWidth"], path + ".truncationWidth");
        if (!(s.truncationWidth >= 4.0)) {
            throw ConfigError(path + ".truncationWidth", "must be >= 4");
        }
    }
    if (q.contains("absTol")) {
        s.absTol = number(q["absTol"], path + ".absTol");
        if (!(s.absTol >= 0.0)) {
            throw ConfigError(path + ".absTol", "must be >= 0");
        }
    }
    return s;
}

}

/// Parses and validates a JSON run configuration.
inline SweepConfig parse_config(std::string_view text) {
    using nlohmann::json;
    using namespace sweep_detail;
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("(document)", std::string("not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ConfigError("(document)", "must be a JSON object");
    }
    reject_unknown(doc, {"cases", "sweep", "range", "fixed", "quadrature", "phaseGrid"}, "");

    SweepConfig cfg;
    const json& cases = require(doc, "cases", "cases");
    if (!cases.is_array() || cases.empty()) {
        throw ConfigError("cases", "must be a nonempty array of case letters");
    }
    for (std::size_t i = 0; i < cases.size(); ++i) {
        const std::string path = "cases[" + std::to_string(i) + "]";
        if (!cases[i].is_string()) {
            throw ConfigError(path, "must be a string; valid letters are " + valid_letters());
        }
        const std::string letter = cases[i].get<std::string>();
        std::optional<CaseId> id;
        if (letter.size() == 1) {
            id = case_from_char(letter[0]);
        }
        if (!id) {
            throw ConfigError(path, "unknown case '" + letter + "'; valid letters are " + valid_letters());
        }
        if (!cfg.has_case(*id)) {
            cfg.cases.push_back(*id);
        }
    }
    std::sort(cfg.cases.begin(), cfg.cases.end());

    const json& sweep = require(doc, "sweep", "sweep");
    const auto param = sweep.is_string() ? sweep_param_from_string(sweep.get<std::string>()) : std::nullopt;
    if (!param) {
        throw ConfigError("sweep", "must be one of alphaL, betaL, sigma, lambdaRatio, b");
    }
    cfg.sweepParam = *param;
    const bool crystalSweep = cfg.sweepParam == SweepParam::B || cfg.sweepParam == SweepParam::LambdaRatio;
    if (crystalSweep && !cfg.has_case(CaseId::L)) {
        throw ConfigError("sweep", "sweeping " + std::string(to_string(cfg.sweepParam)) + " requires case L");
    }

    const json& range = require(doc, "range", "range");
    if (!range.is_array() || range.size() != 3) {
        throw ConfigError("range", "must be [start, stop, count]");
    }
    cfg.range.start = number(range[0], "range[0]");
    cfg.range.stop = number(range[1], "range[1]");
    if (!range[2].is_number_integer() || range[2].get<long long>() < 2 || range[2].get<long long>() > 1000000) {
        throw ConfigError("range[2]", "count must be an integer >= 2");
    }
    cfg.range.count = range[2].get<int>();
    if (!(cfg.range.start < cfg.range.stop)) {
        throw ConfigError("range", "start must be < stop");
    }

    const json& fixed = require(doc, "fixed", "fixed");
    if (!fixed.is_object()) {
        throw ConfigError("fixed", "must be an object");
    }
    reject_unknown(fixed, {"alphaL", "betaL", "sigma", "crystal"}, "fixed");
    auto fixedValue = [&](const char* name, SweepParam p, double& out) {
        const std::string path = std::string("fixed.") + name;
        if (cfg.sweepParam == p) {
            if (fixed.contains(name)) {
                throw ConfigError(path, "is the swept parameter and must not be fixed");
            }
            return;
        }
        out = number(require(fixed, name, path), path);
    };
    fixedValue("alphaL", SweepParam::AlphaL, cfg.fixed.alphaL);
    fixedValue("betaL", SweepParam::BetaL, cfg.fixed.betaL);
    fixedValue("sigma", SweepParam::Sigma, cfg.fixed.sigma);
    if (cfg.sweepParam != SweepParam::Sigma && !(cfg.fixed.sigma > 0.0)) {
        throw ConfigError("fixed.sigma", "must be > 0");
    }
    if (cfg.has_case(CaseId::L)) {
        if (!fixed.contains("crystal")) {
            throw ConfigError("fixed.crystal", "required when case L is present");
        }
        cfg.fixed.crystal = parse_crystal(fixed["crystal"], cfg.sweepParam);
    } else if (fixed.contains("crystal")) {
        parse_crystal(fixed["crystal"], cfg.sweepParam);
    }

    if (doc.contains("quadrature")) {
        cfg.quad = parse_quadrature(doc["quadrature"]);
    }
    if (doc.contains("phaseGrid")) {
        const json& g = doc["phaseGrid"];
        if (!g.is_object()) {
            throw ConfigError("phaseGrid", "must be an object");
        }
        reject_unknown(g, {"points"}, "phaseGrid");
        const json& pts = require(g, "points", "phaseGrid.points");
        if (!pts.is_number_integer() || pts.get<long long>() < 16 || pts.get<long long>() % 2 != 0 ||
            pts.get<long long>() > (1LL << 24)) {
            throw ConfigError("phaseGrid.points", "must be an even integer >= 16");
        }
        cfg.grid.points = pts.get<int>();
    }

    // Every sweep point must give valid parameters.
    for (double v : cfg.range.values()) {
        if (cfg.sweepParam == SweepParam::Sigma && !(v > 0.0)) {
            throw ConfigError("range", "sigma must be > 0 at every sweep point");
        }
        if (cfg.has_case(CaseId::L)) {
            try {
                validate(cfg.crystal_at(v));
            } catch (const InvalidArgument& e) {
                throw ConfigError(crystalSweep ? "range" : "fixed.crystal", e.what());
            }
        }
    }
    return cfg;
}

/// Canonical JSON form of a configuration, echoed into CSV metadata.
inline nlohmann::json to_json(const SweepConfig& cfg) {
    using nlohmann::json;
    json doc;
    json cases = json::array();
    for (auto id : cfg.cases) {
        cases.push_back(std::string(1, to_char(id)));
    }
    doc["cases"] = cases;
    doc["sweep"] = std::string(to_string(cfg.sweepParam));
    doc["range"] = json::array({cfg.range.start, cfg.range.stop, cfg.range.count});
    json fixed = json::object();
    if (cfg.sweepParam != SweepParam::AlphaL) {
        fixed["alphaL"] = cfg.fixed.alphaL;
    }
    if (cfg.sweepParam != SweepParam::BetaL) {
        fixed["betaL"] = cfg.fixed.betaL;
    }
    if (cfg.sweepParam != SweepParam::Sigma) {
        fixed["sigma"] = cfg.fixed.sigma;
    }
    if (cfg.fixed.crystal) {
        const auto& c = *cfg.fixed.crystal;
        json crystal = json::object();
        if (c.physical) {
            crystal["lambdaP"] = c.physical->lambdaP;
            crystal["lambdaBig"] = c.physical->lambdaBig;
            crystal["crystalLength"] = c.physical->crystalLength;
        } else {
            if (c.b) {
                crystal["b"] = *c.b;
            }
            if (c.lambda) {
                crystal["lambda"] = *c.lambda;
            }
        }
        fixed["crystal"] = crystal;
    }
    doc["fixed"] = fixed;
    doc["quadrature"] = {{"relTol", cfg.quad.relTol},
                         {"maxPanels", cfg.quad.maxPanels},
                         {"truncationWidth", cfg.quad.truncationWidth},
                         {"absTol", cfg.quad.absTol}};
    doc["phaseGrid"] = {{"points", cfg.grid.points}};
    return doc;
}

struct SweepRow {
    CaseId id = CaseId::A;
    double sweepValue = 0.0;
    double bits = std::numeric_limits<double>::quiet_NaN();
    double estimatedError = std::numeric_limits<double>::quiet_NaN();
    /// Set when the point could not be computed.
    std::optional<std::string> failure;
    bool nonConvergence = false;
};

struct SweepTable {
    SweepConfig config;
    /// Optional generation time, written as a metadata line when set.
    std::optional<std::string> timestamp;
    std::vector<SweepRow> rows;

    bool any_failed() const {
        return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.failure.has_value(); });
    }
};

/// Phase series of one case at one parameter point.
inline std::vector<PhaseFourierSeries> case_series(CaseId id, const DispersionParams& params,
                                                   const std::optional<CrystalParams>& crystal,
                                                   const QuadratureSpec& quad) {
    if (id == CaseId::L) {
        if (!crystal) {
            throw InvalidArgument("case L requires crystal parameters");
        }
        return fourier_decompose_spdc(params, *crystal, quad);
    }
    return phase_fourier(id, params);
}

inline unsigned default_thread_count() {
    if (const char* env = std::getenv("DISPERSIM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) {
            return static_cast<unsigned>(n);
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/// Evaluates every (case, sweep value) point. threads = 0 picks the default.
/// Rows are ordered by case letter, then sweep value, independent of threads.
inline SweepTable run_sweep(const SweepConfig& config, unsigned threads = 0) {
    SweepTable table;
    table.config = config;
    const auto values = config.range.values();
    for (auto id : config.cases) {
        for (double v : values) {
            SweepRow row;
            row.id = id;
            row.sweepValue = v;
            table.rows.push_back(row);
        }
    }

    auto evaluate = [&](SweepRow& row) {
        try {
            const auto params = config.params_at(row.sweepValue);
            std::optional<CrystalParams> crystal;
            if (row.id == CaseId::L) {
                crystal = config.crystal_at(row.sweepValue);
            }
            const auto mi = mutual_information(case_series(row.id, params, crystal, config.quad), config.grid);
            row.bits = mi.bits;
            row.estimatedError = mi.estimatedError;
        } catch (const NonConvergence& e) {
            row.failure = e.what();
            row.nonConvergence = true;
        } catch (const std::exception& e) {
            row.failure = e.what();
        }
    };

    if (threads == 0) {
        threads = default_thread_count();
    }
    threads = std::min<unsigned>(threads, static_cast<unsigned>(table.rows.size()));
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < table.rows.size(); i = next++) {
            evaluate(table.rows[i]);
        }
    };
    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back(worker);
        }
    }
    return table;
}

/// 12 significant digits, `nan` for missing values.
inline std::string format_number(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%#.12g", v);
    return buf;
}

inline std::string emit_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "# dispersim " << version << "\n";
    if (table.timestamp) {
        out << "# generated " << *table.timestamp << "\n";
    }
    out << "# config " << to_json(table.config).dump() << "\n";
    out << "# mutual_info_bits: bits per detection event; est_error: change from halving the phase grid\n";
    const auto param = to_string(table.config.sweepParam);
    for (const auto& row : table.rows) {
        if (row.failure) {
            std::string reason = *row.failure;
            std::replace(reason.begin(), reason.end(), '\n', ' ');
            out << "# failed case " << to_char(row.id) << " at " << param << "=" << format_number(row.sweepValue)
                << ": " << reason << "\n";
        }
    }
    out << "case,sweep_param,sweep_value,mutual_info_bits,est_error\n";
    for (const auto& row : table.rows) {
        out << to_char(row.id) << ',' << param << ',' << format_number(row.sweepValue) << ','
            << format_number(row.bits) << ',' << format_number(row.estimatedError) << '\n';
    }
    return out.str();
}

// ---------------------------------------------------------------------------
// Figure presets. Fixed values follow the published figure captions; ranges
// cover the plotted axes. Crystal values for the SPDC presets are b = 20,
// lambda = 5 unless swept.

inline constexpr std::array<std::string_view, 11> preset_names = {
    "fig-a1", "fig-b1", "fig-s1", "fig-a2", "fig-b2", "fig-s2",
    "fig-L-sigma", "fig-L-alpha", "fig-L-beta", "fig-L-lambda", "fig-L-b"};

inline SweepConfig figure_preset(std::string_view name) {
    using enum CaseId;
    const std::vector<CaseId> single{A, B, I};
    const CrystalSpec crystal{20.0, 5.0, std::nullopt};
    SweepConfig c;
    auto set = [&](std::vector<CaseId> cases, SweepParam p, SweepRange r, FixedParams f) {
        c.cases = std::move(cases);
        c.sweepParam = p;
        c.range = r;
        c.fixed = f;
    };
    if (name == "fig-a1") {
        set(single, SweepParam::AlphaL, {0.0, 3.0, 61}, {0.0, 0.0, 1.0, {}});
    } else if (name == "fig-b1") {
        set(single, SweepParam::BetaL, {0.0, 2.0, 41}, {0.5, 0.0, 1.0, {}});
    } else if (name == "fig-s1") {
        set(single, SweepParam::Sigma, {0.2, 5.0, 49}, {1.0, 0.1, 1.0, {}});
    } else if (name == "fig-a2") {
        set({C, D, E, F, G, H, J, K}, SweepParam::AlphaL, {0.0, 3.0, 61}, {0.0, 0.0, 1.0, {}});
    } else if (name == "fig-b2") {
        set({C, D, F, H, J, K}, SweepParam::BetaL, {0.0, 2.0, 41}, {0.5, 0.0, 1.0, {}});
    } else if (name == "fig-s2") {
        set({C, D, E, F, G, H, J, K}, SweepParam::Sigma, {0.2, 5.0, 49}, {1.0, 0.1, 1.0, {}});
    } else if (name == "fig-L-sigma") {
        set({L}, SweepParam::Sigma, {0.5, 3.0, 11}, {0.5, 0.1, 1.0, crystal});
    } else if (name == "fig-L-alpha") {
        set({L}, SweepParam::AlphaL, {0.0, 2.0, 11}, {0.0, 0.1, 1.0, crystal});
    } else if (name == "fig-L-beta") {
        set({L}, SweepParam::BetaL, {0.0, 1.0, 11}, {0.3, 0.0, 1.0, crystal});
    } else if (name == "fig-L-lambda") {
        set({L}, SweepParam::LambdaRatio, {1.0, 10.0, 10}, {0.5, 0.1, 1.0, CrystalSpec{20.0, std::nullopt, std::nullopt}});
    } else if (name == "fig-L-b") {
        set({L}, SweepParam::B, {1.0, 50.0, 8}, {0.5, 0.1, 1.0, CrystalSpec{std::nullopt, 5.0, std::nullopt}});
    } else {
        std::string list;
        for (auto n : preset_names) {
            list += list.empty() ? "" : ", ";
            list += n;
        }
        throw InvalidArgument("unknown figure preset '" + std::string(name) + "'; available: " + list);
    }
    return c;
}

}

#endif
