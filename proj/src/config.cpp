#include "wavelab/config.hpp"

#include "wavelab/error.hpp"
#include "wavelab/heat.hpp"
#include "wavelab/lattice.hpp"
#include "wavelab/limits.hpp"
#include "wavelab/qv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <set>

namespace wavelab {

using nlohmann::json;

namespace {

constexpr std::pair<ExperimentKind, const char*> kKindNames[] = {
    {ExperimentKind::Simulate, "simulate"}, {ExperimentKind::QvTime, "qv-time"},
    {ExperimentKind::QvSpace, "qv-space"},  {ExperimentKind::Clt, "clt"},
    {ExperimentKind::Lil, "lil"},           {ExperimentKind::Mart, "mart"},
    {ExperimentKind::Linearize, "linearize"}, {ExperimentKind::Holder, "holder"},
    {ExperimentKind::Moments, "moments"},
};

double number_from_text(const std::string& s, const std::string& key)
{
    auto plain = [&](const std::string& part) {
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
        if (ec != std::errc() || ptr != part.data() + part.size())
            throw ConfigError("config: '" + key + "': cannot parse '" + s + "'");
        return v;
    };
    if (const auto slash = s.find('/'); slash != std::string::npos) {
        const double den = plain(s.substr(slash + 1));
        if (den == 0.0)
            throw ConfigError("config: '" + key + "': zero denominator in '" + s + "'");
        return plain(s.substr(0, slash)) / den;
    }
    if (const auto caret = s.find('^'); caret != std::string::npos)
        return std::pow(plain(s.substr(0, caret)), plain(s.substr(caret + 1)));
    return plain(s);
}

std::vector<double> scalar_list(const json& j, const std::string& key)
{
    if (!j.is_array())
        throw ConfigError("config: '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : j)
        out.push_back(parse_scalar(e, key));
    return out;
}

template <class T>
T integer(const json& j, const std::string& key)
{
    if (!j.is_number_integer())
        throw ConfigError("config: '" + key + "' must be an integer");
    const auto v = j.get<long long>();
    if (v < static_cast<long long>(std::numeric_limits<T>::min()) ||
        static_cast<unsigned long long>(std::max(v, 0LL)) > static_cast<unsigned long long>(std::numeric_limits<T>::max()))
        throw ConfigError("config: '" + key + "' out of range");
    return static_cast<T>(v);
}

std::string text(const json& j, const std::string& key)
{
    if (!j.is_string())
        throw ConfigError("config: '" + key + "' must be a string");
    return j.get<std::string>();
}

json thresholds_json(const std::vector<Threshold>& ts)
{
    json out = json::array();
    for (const auto& th : ts) {
        json e = {{"metric", th.metric}};
        if (th.min)
            e["min"] = *th.min;
        if (th.max)
            e["max"] = *th.max;
        out.push_back(e);
    }
    return out;
}

std::vector<Threshold> parse_thresholds(const json& j)
{
    if (!j.is_array())
        throw ConfigError("config: 'thresholds' must be an array of {metric, min, max}");
    std::vector<Threshold> out;
    for (const auto& e : j) {
        if (!e.is_object() || !e.contains("metric"))
            throw ConfigError("config: each threshold needs a 'metric'");
        Threshold th;
        for (const auto& [k, v] : e.items()) {
            if (k == "metric")
                th.metric = text(v, "thresholds.metric");
            else if (k == "min")
                th.min = parse_scalar(v, "thresholds.min");
            else if (k == "max")
                th.max = parse_scalar(v, "thresholds.max");
            else
                throw ConfigError("config: unknown threshold key '" + k + "'");
        }
        if (!th.min && !th.max)
            throw ConfigError("config: threshold '" + th.metric + "' declares neither min nor max");
        out.push_back(th);
    }
    return out;
}

void set_key(ExperimentConfig& c, const std::string& k, const json& v)
{
    if (k == "name")
        c.name = text(v, k);
    else if (k == "experiment")
        c.kind = parse_kind(text(v, k));
    else if (k == "equation") {
        const auto e = text(v, k);
        if (e == "wave")
            c.equation = Equation::Wave;
        else if (e == "heat")
            c.equation = Equation::Heat;
        else
            throw ConfigError("config: equation must be 'wave' or 'heat', got '" + e + "'");
    } else if (k == "sigma")
        c.sigma = SigmaSpec::parse(text(v, k));
    else if (k == "h")
        c.h = parse_scalar(v, k);
    else if (k == "t")
        c.t = parse_scalar(v, k);
    else if (k == "x")
        c.x = parse_scalar(v, k);
    else if (k == "x_lo")
        c.x_lo = parse_scalar(v, k);
    else if (k == "x_hi")
        c.x_hi = parse_scalar(v, k);
    else if (k == "dx")
        c.dx = parse_scalar(v, k);
    else if (k == "dt")
        c.dt = parse_scalar(v, k);
    else if (k == "circumference")
        c.circumference = parse_scalar(v, k);
    else if (k == "partitions") {
        if (!v.is_array())
            throw ConfigError("config: 'partitions' must be an array");
        c.partitions.clear();
        for (const auto& e : v)
            c.partitions.push_back(integer<int>(e, k));
    } else if (k == "p")
        c.p_values = scalar_list(v, k);
    else if (k == "ladder") {
        if (!v.is_boolean())
            throw ConfigError("config: 'ladder' must be a boolean");
        c.ladder = v.get<bool>();
    } else if (k == "eps")
        c.eps = scalar_list(v, k);
    else if (k == "standardization") {
        const auto s = text(v, k);
        if (s == "conditional")
            c.exact_standardization = false;
        else if (s == "exact")
            c.exact_standardization = true;
        else
            throw ConfigError("config: standardization must be 'conditional' or 'exact'");
    } else if (k == "eps_grid")
        c.eps_grid = scalar_list(v, k);
    else if (k == "h_grid")
        c.h_grid = scalar_list(v, k);
    else if (k == "lags")
        c.lags = scalar_list(v, k);
    else if (k == "scales")
        c.scales = scalar_list(v, k);
    else if (k == "replicates")
        c.replicates = integer<std::size_t>(v, k);
    else if (k == "control_replicates")
        c.control_replicates = integer<std::size_t>(v, k);
    else if (k == "seed")
        c.seed = integer<std::uint64_t>(v, k);
    else if (k == "workers")
        c.workers = integer<int>(v, k);
    else if (k == "out_dir")
        c.out_dir = text(v, k);
    else if (k == "snapshots") {
        if (!v.is_boolean())
            throw ConfigError("config: 'snapshots' must be a boolean");
        c.snapshots = v.get<bool>();
    } else if (k == "thresholds")
        c.thresholds = parse_thresholds(v);
    else
        throw ConfigError("config: unknown key '" + k + "'");
}

} // namespace

std::string to_string(ExperimentKind kind)
{
    for (const auto& [k, name] : kKindNames)
        if (k == kind)
            return name;
    return "unknown";
}

ExperimentKind parse_kind(const std::string& s)
{
    for (const auto& [k, name] : kKindNames)
        if (s == name)
            return k;
    throw ConfigError("config: unknown experiment '" + s +
                      "' (expected simulate, qv-time, qv-space, clt, lil, mart, linearize, holder, moments)");
}

double parse_scalar(const json& j, const std::string& key)
{
    double v = 0.0;
    if (j.is_number())
        v = j.get<double>();
    else if (j.is_string())
        v = number_from_text(j.get<std::string>(), key);
    else
        throw ConfigError("config: '" + key + "' must be a number");
    if (!std::isfinite(v))
        throw ConfigError("config: '" + key + "' is not finite");
    return v;
}

nlohmann::ordered_json ExperimentConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["name"] = name;
    j["experiment"] = to_string(kind);
    j["equation"] = equation == Equation::Wave ? "wave" : "heat";
    j["sigma"] = sigma.describe();
    j["h"] = h;
    j["t"] = t;
    j["x"] = x;
    j["x_lo"] = x_lo;
    j["x_hi"] = x_hi;
    j["dx"] = dx;
    j["dt"] = dt;
    j["circumference"] = circumference;
    j["partitions"] = partitions;
    j["p"] = p_values;
    j["ladder"] = ladder;
    j["eps"] = eps;
    j["standardization"] = exact_standardization ? "exact" : "conditional";
    j["eps_grid"] = eps_grid;
    j["h_grid"] = h_grid;
    j["lags"] = lags;
    j["scales"] = scales;
    j["replicates"] = replicates;
    j["control_replicates"] = control_replicates;
    j["seed"] = seed;
    j["workers"] = workers;
    j["out_dir"] = out_dir;
    j["snapshots"] = snapshots;
    j["thresholds"] = thresholds_json(thresholds);
    return j;
}

ExperimentConfig ExperimentConfig::from_json(const json& j)
{
    if (!j.is_object())
        throw ConfigError("config: top level must be an object");
    ExperimentConfig c;
    for (const auto& [k, v] : j.items())
        set_key(c, k, v);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open " + path.string());
    json j;
    try {
        j = json::parse(in, nullptr, true, true);
    } catch (const json::parse_error& e) {
        throw ConfigError("config: " + path.string() + ": " + e.what());
    }
    try {
        return ExperimentConfig::from_json(j);
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void apply_override(ExperimentConfig& config, const std::string& assignment)
{
    const auto eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("override '" + assignment + "' must have the form key=value");
    const std::string key = assignment.substr(0, eq);
    const std::string raw = assignment.substr(eq + 1);
    json v;
    try {
        v = json::parse(raw);
    } catch (const json::parse_error&) {
        v = raw;
    }
    set_key(config, key, v);
}

namespace {

void check(ValidationResult& r, const std::string& rule, const std::function<void()>& fn,
           const std::string& suggestion = "")
{
    try {
        fn();
    } catch (const Error& e) {
        r.issues.push_back({rule, e.what(), suggestion});
    }
}

void even_multiples(ValidationResult& r, const std::string& rule, const std::vector<double>& values, double h,
                    const std::string& what)
{
    for (double v : values)
        check(r, rule, [&] {
            const int k = lattice_index(v, h, what.c_str());
            if (k <= 0 || (k & 1) != 0)
                throw AlignmentError(what + " = " + std::to_string(v) + " is not a positive even multiple of h");
        }, "use dyadic values that are even multiples of h");
}

void ladder_length(ValidationResult& r, std::size_t n, const std::string& what)
{
    if (n < 4)
        r.issues.push_back({"ladder-length", what + " has " + std::to_string(n) + " points; fitted slopes need at least 4",
                            "extend the ladder by dyadic refinement"});
}

} // namespace

ValidationResult validate(const ExperimentConfig& c)
{
    ValidationResult r;
    if (c.replicates == 0)
        r.issues.push_back({"replicates-positive", "replicates must be positive", "replicates >= 100"});
    if (c.workers < 0)
        r.issues.push_back({"workers", "workers must be >= 0", "0 selects the OpenMP default"});
    if (c.seed > std::numeric_limits<std::uint64_t>::max() - c.replicates)
        r.issues.push_back({"seed-range", "base seed + replicate index overflows", "use a smaller base seed"});
    if (!(c.h > 0) || !(c.t > 0))
        r.issues.push_back({"positive-steps", "h and t must be positive", ""});
    if (!r.ok())
        return r;

    const bool wave = c.kind != ExperimentKind::Linearize && c.kind != ExperimentKind::Simulate
                          ? true
                          : c.equation == Equation::Wave;
    if (wave) {
        check(r, "alignment-t", [&] { lattice_index(c.t, c.h, "t"); });
        check(r, "alignment-x", [&] { lattice_index(c.x, c.h, "x"); });
    }
    switch (c.kind) {
    case ExperimentKind::Simulate:
        if (c.equation == Equation::Wave)
            check(r, "domain", [&] { LatticeSpec::create(c.h, c.t, c.x_lo, c.x_hi); });
        else
            check(r, "heat-grid", [&] { HeatGridSpec::create(c.dx, c.circumference, c.t, c.dt); },
                  "dt <= dx^2/2 and L >= 16 sqrt(t)");
        break;
    case ExperimentKind::QvTime:
        r.admissible_partitions = admissible_temporal_n(c.h, c.t, c.x);
        for (int n : c.partitions)
            check(r, "partition-alignment", [&] { TemporalPartition::align(c.h, c.t, c.x, n); });
        if (c.ladder || c.partitions.size() > 1)
            ladder_length(r, c.partitions.size(), "partition ladder");
        break;
    case ExperimentKind::QvSpace:
        check(r, "alignment-x", [&] {
            lattice_index(c.x_lo, c.h, "x_lo");
            lattice_index(c.x_hi, c.h, "x_hi");
        });
        if (!r.ok())
            break;
        r.admissible_partitions = admissible_spatial_n(c.h, c.t, c.x_lo, c.x_hi);
        for (int n : c.partitions)
            check(r, "partition-alignment", [&] { SpatialPartition::align(c.h, c.t, c.x_lo, c.x_hi, n); });
        if (c.ladder || c.partitions.size() > 1)
            ladder_length(r, c.partitions.size(), "partition ladder");
        break;
    case ExperimentKind::Clt:
        even_multiples(r, "eps-alignment", c.eps, c.h, "eps");
        if (c.sigma.is_constant() && c.sigma(0.0) == 0.0)
            r.issues.push_back({"sigma-degenerate", "sigma vanishes identically; V-hat = 0", "use a nonzero sigma"});
        if (c.exact_standardization && !c.sigma.is_constant())
            r.issues.push_back({"standardization", "exact shell-area standardization needs constant sigma",
                                "standardization = conditional"});
        break;
    case ExperimentKind::Lil:
        check(r, "lil-grid", [&] { check_lil_grid(c.h, c.eps_grid); }, "2h <= eps < 1/e");
        even_multiples(r, "eps-alignment", c.eps_grid, c.h, "eps");
        if (c.control_replicates == 0)
            r.issues.push_back({"replicates-positive", "control_replicates must be positive", ""});
        if (c.sigma.is_constant() && c.sigma(0.0) == 0.0)
            r.issues.push_back({"sigma-degenerate", "sigma vanishes identically", "use a nonzero sigma"});
        break;
    case ExperimentKind::Mart:
        even_multiples(r, "h-grid-alignment", c.h_grid, c.h, "h_grid");
        ladder_length(r, c.h_grid.size(), "h grid");
        break;
    case ExperimentKind::Holder:
        even_multiples(r, "lag-alignment", c.lags, c.h, "lag");
        for (double lag : c.lags)
            if (lag > c.t)
                r.issues.push_back({"lag-range", "lag exceeds t", "lags <= t"});
        ladder_length(r, c.lags.size(), "lag ladder");
        break;
    case ExperimentKind::Linearize:
        ladder_length(r, c.scales.size(), "scale ladder");
        if (c.equation == Equation::Wave)
            even_multiples(r, "scale-alignment", c.scales, c.h, "scale");
        else {
            check(r, "heat-grid", [&] { HeatGridSpec::create(c.dx, c.circumference, c.t, c.dt); },
                  "dt <= dx^2/2 and L >= 16 sqrt(t)");
            for (double s : c.scales)
                check(r, "scale-alignment", [&] {
                    if (lattice_index(s, c.dx, "scale") <= 0 || s >= c.circumference / 2)
                        throw ConfigError("heat scale " + std::to_string(s) + " must lie in (0, L/2)");
                });
        }
        break;
    case ExperimentKind::Moments:
        break;
    }
    std::set<std::string> seen;
    for (const auto& th : c.thresholds)
        if (!seen.insert(th.metric).second)
            r.issues.push_back({"thresholds", "metric '" + th.metric + "' declared twice", ""});
    return r;
}

} // namespace wavelab
