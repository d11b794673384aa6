#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <CLI11.hpp>
#include <json.hpp>

#include "bdp/charlier.hpp"
#include "bdp/config_json.hpp"
#include "bdp/errors.hpp"
#include "bdp/oracle.hpp"
#include "bdp/transition.hpp"
#include "bdp/weinorman.hpp"

namespace bdp::cli {

using nlohmann::ordered_json;

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

namespace {

// nlohmann's own float output is shortest-round-trip; we want the fixed
// 17-digit format everywhere, so floats are printed here.
void write_json(std::ostream& os, const ordered_json& j, int indent = 0) {
    const std::string pad(indent + 2, ' ');
    switch (j.type()) {
        case ordered_json::value_t::object: {
            os << "{\n";
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) os << ",\n";
                first = false;
                os << pad << ordered_json(key).dump() << ": ";
                write_json(os, value, indent + 2);
            }
            os << "\n" << std::string(indent, ' ') << "}";
            break;
        }
        case ordered_json::value_t::array: {
            os << "[";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i) os << ", ";
                write_json(os, j[i], indent + 2);
            }
            os << "]";
            break;
        }
        case ordered_json::value_t::number_float:
            os << format_double(j.get<double>());
            break;
        default:
            os << j.dump();
    }
}

ordered_json g_json(const GFunctions& g) {
    return {{"t", g.t}, {"g1", g.g1}, {"g2", g.g2}, {"g3", g.g3}, {"g4", g.g4}};
}

TruncationPolicy default_truncation() {
    TruncationPolicy p;
    if (const char* env = std::getenv("BD_DEFAULT_TOL")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end == env || *end != '\0' || !(v > 0.0)) {
            throw ConfigError("BD_DEFAULT_TOL must be a positive number, got '" + std::string(env) + "'");
        }
        p.abs_tol = v;
    }
    return p;
}

RateProfile load_profile(const std::string& path) {
    return profile_from_json(load_json_file(path));
}

std::vector<double> parse_grid(const std::string& spec) {
    double start = 0, stop = 0, step = 0;
    char tail = 0;
    if (std::sscanf(spec.c_str(), "%lf:%lf:%lf%c", &start, &stop, &step, &tail) != 3 ||
        !(step > 0.0) || stop < start || start < 0.0) {
        throw ConfigError("--t-grid must be start:stop:step with 0 <= start <= stop, step > 0");
    }
    const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    std::vector<double> grid(count);
    for (std::size_t i = 0; i < count; ++i) grid[i] = std::min(stop, start + i * step);
    return grid;
}

// Shared option values; each subcommand binds the ones it needs.
struct Options {
    std::string config;
    unsigned n = 0;
    unsigned m = 0;
    double t = 0.0;
    std::string method = "best";
    unsigned m_max = 30;
    std::optional<double> trunc_tol;
    std::string t_grid;
    std::string solver = "closed";
    double alpha = 1.0;
    unsigned n_max = 5;
    unsigned x_max = 5;
    unsigned n0 = 0;
    std::optional<std::size_t> cap;
    double master_tol = 1e-12;
    std::uint64_t n_traj = 100000;
    std::uint64_t seed = 0x5eed;
    std::uint64_t batch = 4096;
    unsigned workers = 0;
    unsigned validate_n_max = 15;
    unsigned validate_m_max = 15;
    std::vector<double> times;
    std::optional<double> validate_tol;
};

TruncationPolicy truncation(const Options& o) {
    TruncationPolicy p = default_truncation();
    if (o.trunc_tol) {
        if (!(*o.trunc_tol > 0.0)) throw ConfigError("--tol must be positive");
        p.abs_tol = *o.trunc_tol;
    }
    return p;
}

Method method_option(const Options& o) {
    try {
        return parse_method(o.method);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("--method: ") + e.what());
    }
}

void cmd_transition(const Options& o, std::ostream& out) {
    const RateProfile profile = load_profile(o.config);
    const Method method = method_option(o);
    const TruncationPolicy trunc = truncation(o);
    const TransitionResult r = transition_probability({o.n, o.m, o.t, profile}, method, trunc);

    ordered_json diag = {{"abs_tol", trunc.abs_tol}};
    diag["x_max"] = r.x_max ? ordered_json(*r.x_max) : ordered_json(nullptr);
    diag["remainder_estimate"] =
        r.remainder_estimate ? ordered_json(*r.remainder_estimate) : ordered_json(nullptr);

    ordered_json j;
    j["probability"] = r.probability;
    j["method"] = std::string(to_string(r.method));
    j["n"] = o.n;
    j["m"] = o.m;
    j["g_functions"] = g_json(r.g);
    j["alpha_spectral"] = r.alpha_spectral ? ordered_json(*r.alpha_spectral) : ordered_json(nullptr);
    j["truncation_diagnostics"] = diag;
    write_json(out, j);
    out << "\n";
}

void cmd_matrix(const Options& o, std::ostream& out) {
    const RateProfile profile = load_profile(o.config);
    const Distribution row =
        transition_row(o.n, o.t, profile, method_option(o), o.m_max, truncation(o));
    out << "m,probability\n";
    for (std::size_t m = 0; m < row.probs.size(); ++m) {
        out << m << "," << format_double(row.probs[m]) << "\n";
    }
}

void cmd_gfuncs(const Options& o, std::ostream& out) {
    const RateProfile profile = load_profile(o.config);
    SolverConfig cfg;
    if (o.solver == "closed") {
        cfg.method = SolverMethod::closed_form;
    } else if (o.solver == "ode") {
        cfg.method = SolverMethod::ode;
    } else {
        throw ConfigError("--solver must be 'closed' or 'ode'");
    }
    const auto grid = parse_grid(o.t_grid);
    for (double t : grid) profile.check_time(t);
    out << "t,g1,g2,g3,g4,p,nu,alpha\n";
    for (double t : grid) {
        const GFunctions g = solve(profile, t, cfg);
        const double alpha = g.g3 != 0.0 ? spectral_alpha(g) : std::nan("");
        out << format_double(t) << "," << format_double(g.g1) << "," << format_double(g.g2) << ","
            << format_double(g.g3) << "," << format_double(g.g4) << ","
            << format_double(std::exp(g.g4)) << "," << format_double(g.g2) << ","
            << format_double(alpha) << "\n";
    }
}

void cmd_charlier(const Options& o, std::ostream& out) {
    if (o.alpha == 0.0) throw ConfigError("--alpha must be nonzero");
    out << "n,x,value\n";
    for (unsigned n = 0; n <= o.n_max; ++n) {
        for (unsigned x = 0; x <= o.x_max; ++x) {
            out << n << "," << x << "," << format_double(charlier_eval(n, x, o.alpha)) << "\n";
        }
    }
}

void cmd_oracle(const Options& o, std::ostream& out) {
    const RateProfile profile = load_profile(o.config);
    if (!(o.master_tol > 0.0)) throw ConfigError("--tol must be positive");
    const Distribution d = master_integrate(profile, o.n0, o.t, o.cap, o.master_tol);
    out << "state,probability\n";
    for (std::size_t k = 0; k < d.probs.size(); ++k) {
        out << k << "," << format_double(d.probs[k]) << "\n";
    }
}

void cmd_simulate(const Options& o, std::ostream& out) {
    const RateProfile profile = load_profile(o.config);
    if (o.n_traj == 0) throw ConfigError("--n-traj must be at least 1");
    const SimResult r = mc_simulate(profile, o.n0, o.t, {o.n_traj, o.seed, o.batch, o.workers});
    out << "state,prob,stderr\n";
    for (std::size_t k = 0; k < r.dist.probs.size(); ++k) {
        out << k << "," << format_double(r.dist.probs[k]) << "," << format_double(r.stderrs[k])
            << "\n";
    }
}

// Largest |a - b| over a row pair, padding the shorter row with zeros.
double row_gap(const std::vector<double>& a, const std::vector<double>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
        const double x = i < a.size() ? a[i] : 0.0;
        const double y = i < b.size() ? b[i] : 0.0;
        worst = std::max(worst, std::abs(x - y));
    }
    return worst;
}

bool cmd_validate(const Options& o, std::ostream& out) {
    const auto profiles = profiles_from_json(load_json_file(o.config));
    const TruncationPolicy trunc = truncation(o);
    if (o.validate_tol && !(*o.validate_tol >= 0.0)) throw ConfigError("--tol must be >= 0");

    struct Pair {
        const char* name;
        Method a, b;
        double tol;
    };
    const Pair pairs[] = {{"expr1-expr2", Method::expr1, Method::expr2, 1e-9},
                          {"expr1-oracle", Method::expr1, Method::oracle, 1e-8},
                          {"expr2-km", Method::expr2, Method::km, 1e-10}};

    bool all_ok = true;
    out << "profile,pair,max_abs_diff,tolerance,status\n";
    for (std::size_t pi = 0; pi < profiles.size(); ++pi) {
        const RateProfile& profile = profiles[pi];
        std::vector<double> times = o.times;
        if (times.empty()) times = {std::min(0.5, profile.horizon()), std::min(1.5, profile.horizon())};
        for (double t : times) profile.check_time(t);

        for (const Pair& pair : pairs) {
            const double tol = o.validate_tol.value_or(pair.tol);
            const bool wants_km = pair.b == Method::km;
            if (wants_km && !(profile.is_homogeneous() && profile.lambda().value() > 0.0 &&
                              profile.mu().value() > 0.0)) {
                continue;
            }
            double worst = 0.0;
            std::string status = "pass";
            try {
                for (double t : times) {
                    if (t == 0.0 && pair.b != Method::oracle) continue;
                    for (unsigned n = 0; n <= o.validate_n_max; ++n) {
                        const auto ra = transition_row(n, t, profile, pair.a, o.validate_m_max, trunc);
                        const auto rb = transition_row(n, t, profile, pair.b, o.validate_m_max, trunc);
                        worst = std::max(worst, row_gap(ra.probs, rb.probs));
                    }
                }
                if (!(worst <= tol)) status = "fail";
            } catch (const std::exception& e) {
                std::string msg = e.what();
                std::replace(msg.begin(), msg.end(), ',', ';');
                status = "error: " + msg;
            }
            if (status != "pass") all_ok = false;
            out << pi << "," << pair.name << "," << format_double(worst) << ","
                << format_double(tol) << "," << status << "\n";
        }
    }
    return all_ok;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Transition probabilities of the time-inhomogeneous immigration-death process"};
    app.require_subcommand(1);
    Options o;

    auto add_config = [&](CLI::App* sub) {
        sub->add_option("--config", o.config, "JSON rate profile")->required();
    };

    auto* transition = app.add_subcommand("transition", "single transition probability as JSON");
    add_config(transition);
    transition->add_option("--n", o.n, "initial state")->required();
    transition->add_option("--m", o.m, "target state")->required();
    transition->add_option("--t", o.t, "time")->required();
    transition->add_option("--method", o.method, "expr1|expr2|km|oracle|best");
    transition->add_option("--tol", o.trunc_tol, "truncation tolerance of lattice sums");

    auto* matrix = app.add_subcommand("matrix", "row P(n -> m), m = 0..m-max, as CSV");
    add_config(matrix);
    matrix->add_option("--n", o.n, "initial state")->required();
    matrix->add_option("--t", o.t, "time")->required();
    matrix->add_option("--m-max", o.m_max, "last target state");
    matrix->add_option("--method", o.method, "expr1|expr2|km|oracle|best");
    matrix->add_option("--tol", o.trunc_tol, "truncation tolerance of lattice sums");

    auto* gfuncs = app.add_subcommand("gfuncs", "g-functions on a time grid as CSV");
    add_config(gfuncs);
    gfuncs->add_option("--t-grid", o.t_grid, "start:stop:step")->required();
    gfuncs->add_option("--solver", o.solver, "closed|ode");

    auto* charlier = app.add_subcommand("charlier", "Charlier polynomial table as CSV");
    charlier->add_option("--alpha", o.alpha, "family parameter")->required();
    charlier->add_option("--n-max", o.n_max, "largest degree");
    charlier->add_option("--x-max", o.x_max, "largest lattice point");

    auto* oracle = app.add_subcommand("oracle", "master-equation distribution as CSV");
    add_config(oracle);
    oracle->add_option("--n0", o.n0, "initial state")->required();
    oracle->add_option("--t", o.t, "time")->required();
    oracle->add_option("--cap", o.cap, "truncation cap (default: automatic)");
    oracle->add_option("--tol", o.master_tol, "integrator tolerance");

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo distribution as CSV");
    add_config(simulate);
    simulate->add_option("--n0", o.n0, "initial state")->required();
    simulate->add_option("--t", o.t, "time")->required();
    simulate->add_option("--n-traj", o.n_traj, "number of trajectories");
    simulate->add_option("--seed", o.seed, "random seed");
    simulate->add_option("--batch", o.batch, "trajectories per work unit");
    simulate->add_option("--workers", o.workers, "worker threads (0: all cores)");

    auto* validate = app.add_subcommand("validate", "cross-method agreement report as CSV");
    add_config(validate);
    validate->add_option("--n-max", o.validate_n_max, "largest initial state");
    validate->add_option("--m-max", o.validate_m_max, "largest target state");
    validate->add_option("--times", o.times, "evaluation times")->delimiter(',');
    validate->add_option("--tol", o.validate_tol, "override every pair tolerance");
    validate->add_option("--trunc-tol", o.trunc_tol, "truncation tolerance of lattice sums");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kConfigError;
    }

    std::ostringstream buffer;
    try {
        if (transition->parsed()) {
            cmd_transition(o, buffer);
        } else if (matrix->parsed()) {
            cmd_matrix(o, buffer);
        } else if (gfuncs->parsed()) {
            cmd_gfuncs(o, buffer);
        } else if (charlier->parsed()) {
            cmd_charlier(o, buffer);
        } else if (oracle->parsed()) {
            cmd_oracle(o, buffer);
        } else if (simulate->parsed()) {
            cmd_simulate(o, buffer);
        } else if (validate->parsed()) {
            const bool ok = cmd_validate(o, buffer);
            out << buffer.str();
            return ok ? kOk : kNumericalFailure;
        }
    } catch (const DegenerateSpectral& e) {
        err << "error: " << e.what() << "\n"
            << "hint: the spectral parameter is undefined here; rerun with --method expr1\n";
        return kDegenerate;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const NumericalError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const ResourceError& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    } catch (const std::invalid_argument& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::domain_error& e) {
        err << "config error: " << e.what() << "\n";
        return kConfigError;
    } catch (const std::exception& e) {
        err << "numerical failure: " << e.what() << "\n";
        return kNumericalFailure;
    }
    out << buffer.str();
    return kOk;
}

}  // namespace bdp::cli
