#include "bdp/config_json.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

#include "bdp/errors.hpp"

namespace bdp {

using nlohmann::json;

namespace {

void reject_unknown_keys(const json& j, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (const auto& [key, value] : j.items()) {
        bool ok = false;
        for (const char* a : allowed) ok = ok || key == a;
        if (!ok) throw ConfigError(where + ": unknown key '" + key + "'");
    }
}

double number(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError(where + ": key '" + key + "' must be a number");
    return v.get<double>();
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
    if (!j.contains(key)) throw ConfigError(where + ": missing key '" + key + "'");
    const json& v = j.at(key);
    if (!v.is_array()) throw ConfigError(where + ": key '" + key + "' must be an array");
    std::vector<double> out;
    for (const auto& e : v) {
        if (!e.is_number()) throw ConfigError(where + ": key '" + key + "' must hold numbers");
        out.push_back(e.get<double>());
    }
    return out;
}

template <class F>
auto validated(F&& make, const std::string& where) {
    try {
        return make();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(where + ": " + e.what());
    }
}

}  // namespace

RateSpec rate_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": rate must be an object");
    if (!j.contains("kind") || !j.at("kind").is_string()) {
        throw ConfigError(where + ": missing string key 'kind'");
    }
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "constant") {
        reject_unknown_keys(j, {"kind", "value"}, where);
        const double v = number(j, "value", where);
        return validated([&] { return RateSpec::constant(v); }, where);
    }
    if (kind == "piecewise_constant") {
        reject_unknown_keys(j, {"kind", "breakpoints", "values"}, where);
        auto bp = numbers(j, "breakpoints", where);
        auto vals = numbers(j, "values", where);
        return validated([&] { return RateSpec::piecewise_constant(bp, vals); }, where);
    }
    if (kind == "sinusoid") {
        reject_unknown_keys(j, {"kind", "base", "amp", "omega", "phase"}, where);
        const double base = number(j, "base", where);
        const double amp = number(j, "amp", where);
        const double omega = number(j, "omega", where);
        const double phase = j.contains("phase") ? number(j, "phase", where) : 0.0;
        return validated([&] { return RateSpec::sinusoid(base, amp, omega, phase); }, where);
    }
    if (kind == "exp_decay") {
        reject_unknown_keys(j, {"kind", "a", "c", "offset"}, where);
        const double a = number(j, "a", where);
        const double c = number(j, "c", where);
        const double d = j.contains("offset") ? number(j, "offset", where) : 0.0;
        return validated([&] { return RateSpec::exp_decay(a, c, d); }, where);
    }
    throw ConfigError(where + ": unknown kind '" + kind + "'");
}

json rate_to_json(const RateSpec& spec) {
    switch (spec.kind()) {
        case RateKind::constant:
            return {{"kind", "constant"}, {"value", spec.value()}};
        case RateKind::piecewise_constant:
            return {{"kind", "piecewise_constant"},
                    {"breakpoints", spec.breakpoints()},
                    {"values", spec.values()}};
        case RateKind::sinusoid:
            return {{"kind", "sinusoid"},
                    {"base", spec.base()},
                    {"amp", spec.amplitude()},
                    {"omega", spec.omega()},
                    {"phase", spec.phase()}};
        case RateKind::exp_decay:
            return {{"kind", "exp_decay"},
                    {"a", spec.decay_amplitude()},
                    {"c", spec.decay_rate()},
                    {"offset", spec.offset()}};
    }
    return {};
}

RateProfile profile_from_json(const json& j, const std::string& where) {
    if (!j.is_object()) throw ConfigError(where + ": profile must be an object");
    reject_unknown_keys(j, {"lambda", "mu", "horizon"}, where);
    if (!j.contains("lambda")) throw ConfigError(where + ": missing key 'lambda'");
    if (!j.contains("mu")) throw ConfigError(where + ": missing key 'mu'");
    RateSpec lambda = rate_from_json(j.at("lambda"), where + ".lambda");
    RateSpec mu = rate_from_json(j.at("mu"), where + ".mu");
    const double horizon = number(j, "horizon", where);
    return validated([&] { return RateProfile(lambda, mu, horizon); }, where + ".horizon");
}

json profile_to_json(const RateProfile& profile) {
    return {{"lambda", rate_to_json(profile.lambda())},
            {"mu", rate_to_json(profile.mu())},
            {"horizon", profile.horizon()}};
}

std::vector<RateProfile> profiles_from_json(const json& j) {
    std::vector<RateProfile> out;
    if (j.is_object() && j.contains("profiles")) {
        reject_unknown_keys(j, {"profiles"}, "config");
        const json& arr = j.at("profiles");
        if (!arr.is_array() || arr.empty()) {
            throw ConfigError("config: key 'profiles' must be a nonempty array");
        }
        for (std::size_t i = 0; i < arr.size(); ++i) {
            out.push_back(profile_from_json(arr[i], "profiles[" + std::to_string(i) + "]"));
        }
        return out;
    }
    out.push_back(profile_from_json(j));
    return out;
}

json load_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in '" + path + "': " + e.what());
    }
}

}  // namespace bdp
