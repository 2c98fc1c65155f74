#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "loopalg/loopalg.hpp"

namespace loopalg::cli {

enum ExitCode : int {
    ok = 0,
    failure = 1,
    validation_failed = 2,
    theorem_violation = 3,
    usage = 64,
    file_error = 66,
};

struct RunConfig {
    std::string command;
    std::string algebra_path;
    std::string builtin;
    std::string field;  // empty: the file's field, or q for builtins
    int min_degree = 0;
    bool min_degree_given = false;
    int max_degree = 8;
    int degree_cap = 16;
    bool no_degree_cap = false;
    std::string coefficients = "self";
    std::string format = "table";
    std::string output;
    bool timing = false;
    std::size_t max_product_classes = 400;
    std::size_t max_listed = 64;
};

/// Report text goes to `output`; `error` carries messages meant for stderr.
struct CommandResult {
    int exit_code = ok;
    std::string output;
    std::string error;
};

namespace detail {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct FileError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline FieldSpec parse_field_flag(const std::string& s) {
    if (s == "q" || s == "Q") return FieldSpec::rationals();
    std::string digits = (!s.empty() && (s[0] == 'f' || s[0] == 'F')) ? s.substr(1) : s;
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 10)
        throw UsageError("--field must be q or fP with P prime, got '" + s + "'");
    auto p = std::stoull(digits);
    try {
        return FieldSpec::prime(p);
    } catch (const ParseError& e) {
        throw UsageError(std::string("--field: ") + e.what());
    }
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FileError("cannot read '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw FileError("error reading '" + path + "'");
    return ss.str();
}

inline FDGA load_algebra(const RunConfig& cfg) {
    if (!cfg.builtin.empty()) {
        FieldSpec f = cfg.field.empty() ? FieldSpec::rationals() : parse_field_flag(cfg.field);
        try {
            return builtin_example(cfg.builtin, f);
        } catch (const ConstructionError& e) {
            throw UsageError(e.what());
        }
    }
    auto text = read_file(cfg.algebra_path);
    if (cfg.field.empty()) return parse_algebra_file(text);
    FieldSpec f = parse_field_flag(cfg.field);
    // Reinterpret the file's coefficients over the requested field.
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(ParseError::Kind::malformed_json, e.what());
    }
    if (j.is_object()) j["field"] = field_to_json(f);
    return parse_algebra_file(j.dump());
}

class Timer {
public:
    explicit Timer(bool enabled) : enabled_(enabled) {}
    template <class Fn>
    auto phase(const std::string& name, Fn&& fn) {
        auto start = std::chrono::steady_clock::now();
        auto finish = [&] {
            if (!enabled_) return;
            std::chrono::duration<double> dt = std::chrono::steady_clock::now() - start;
            std::ostringstream os;
            os << std::fixed << std::setprecision(3) << dt.count();
            phases_.push_back({name, os.str()});
        };
        if constexpr (std::is_void_v<decltype(fn())>) {
            fn();
            finish();
        } else {
            auto r = fn();
            finish();
            return r;
        }
    }
    json to_json() const {
        json j = json::array();
        for (const auto& [n, s] : phases_) j.push_back({{"phase", n}, {"seconds", s}});
        return j;
    }
    std::string to_table() const {
        std::string out = "\ntiming (seconds):\n";
        for (const auto& [n, s] : phases_) out += "  " + n + ": " + s + "\n";
        return out;
    }
    bool enabled() const { return enabled_; }

private:
    bool enabled_;
    std::vector<std::pair<std::string, std::string>> phases_;
};

inline json config_to_json(const RunConfig& cfg, const FDGA* a) {
    json c;
    c["command"] = cfg.command;
    if (cfg.command == "examples") return c;
    c["source"] = cfg.builtin.empty() ? "file" : "builtin";
    c["algebra"] = cfg.builtin.empty() ? cfg.algebra_path : cfg.builtin;
    if (a) c["field"] = a->field.to_string();
    c["min_degree"] = cfg.min_degree;
    c["max_degree"] = cfg.max_degree;
    if (cfg.command == "hochschild") c["coefficients"] = cfg.coefficients;
    c["degree_cap"] = cfg.no_degree_cap ? json(nullptr) : json(cfg.degree_cap);
    c["max_product_classes"] = cfg.max_product_classes;
    c["max_listed"] = cfg.max_listed;
    return c;
}

inline json algebra_summary(const FDGA& a) {
    json j;
    j["name"] = a.name;
    j["field"] = a.field.to_string();
    j["formal_dimension"] = a.formal_dimension;
    j["generators"] = json::array();
    for (std::size_t i = 0; i < a.dim(); ++i) j["generators"].push_back({{"name", a.basis.label(i)}, {"degree", a.upper(i)}});
    return j;
}

inline bool characteristic_caveat(const FDGA& a) {
    return !a.field.is_rational() && a.field.characteristic() <= static_cast<std::uint64_t>(std::max(a.formal_dimension, 0));
}

inline std::string caveat_text(const FDGA& a) {
    return "characteristic " + std::to_string(a.field.characteristic()) + " <= formal dimension " +
           std::to_string(a.formal_dimension) + ": the model results assume characteristic > d";
}

inline std::string validation_table(const ValidationReport& v) {
    std::ostringstream os;
    os << "valid: " << (v.valid() ? "yes" : "no") << "\n";
    os << "graded commutative: " << (v.commutative ? "yes" : "no") << "\n";
    os << "Poincare duality: " << (v.poincare ? "yes" : "no") << "\n";
    for (const auto& x : v.violations) os << "  [" << x.kind << "] " << x.message << "\n";
    return os.str();
}

}  // namespace detail

inline RunConfig default_config() { return {}; }

/// Parses argv (without the program name) and runs one command.
inline CommandResult run_command(const std::vector<std::string>& args) {
    CommandResult res;
    RunConfig cfg;
    CLI::App app{"Exact computations of loop homology, H(Omega M), the intersection morphism and Hochschild cohomology",
                 "loopalg"};
    app.require_subcommand(1, 1);
    app.set_help_all_flag("--help-all", "Show help for every command");

    auto add_common = [&](CLI::App* sub, bool needs_algebra) {
        sub->add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"table", "json"}));
        sub->add_option("--output", cfg.output, "Write the report to this file instead of standard output");
        if (!needs_algebra) return;
        auto* alg = sub->add_option("--algebra", cfg.algebra_path, "Algebra description (JSON file)");
        auto* bi = sub->add_option("--builtin", cfg.builtin, "Builtin algebra, e.g. sphere:2, cp:2, connected-sum-s3x3");
        alg->excludes(bi);
        bi->excludes(alg);
        sub->add_option("--field", cfg.field, "Coefficient field: q or fP (P prime)");
        sub->add_flag("--timing", cfg.timing, "Include per-phase timing in the report");
    };
    auto add_window = [&](CLI::App* sub) {
        sub->add_option("--min-degree", cfg.min_degree, "Lowest reported degree (default: minus the formal dimension)");
        sub->add_option("--max-degree", cfg.max_degree, "Reported degrees are below this bound (default 8)");
        sub->add_option("--degree-cap", cfg.degree_cap, "Hard cap on --max-degree (default 16)");
        sub->add_flag("--no-degree-cap", cfg.no_degree_cap, "Allow --max-degree above the cap");
        sub->add_option("--max-product-classes", cfg.max_product_classes,
                        "Skip structure constants above this many classes (default 400)");
        sub->add_option("--max-listed", cfg.max_listed,
                        "Per-degree cap on listed classes and kernel/image vectors (default 64)");
    };

    struct Cmd {
        const char* name;
        const char* help;
        bool window;
    };
    const std::vector<Cmd> cmds = {
        {"validate", "Check an algebra: grading, associativity, d^2 = 0, Leibniz, commutativity, Poincare duality", false},
        {"loop-homology", "Loop homology ring HH_*(LM) over a degree window", true},
        {"omega-homology", "Homology of the based loop space H_*(Omega M) from the cobar construction", true},
        {"intersection", "The intersection morphism I : HH_*(LM) -> H_*(Omega M) with its checks", true},
        {"hochschild", "Hochschild cohomology HH*(A; N) with N = A, the field, or the dual of A", true},
        {"e2", "Loop homology of H(A), the E2 page", true},
        {"examples", "List the builtin algebras", false},
    };
    for (const auto& c : cmds) {
        auto* sub = app.add_subcommand(c.name, c.help);
        add_common(sub, std::string(c.name) != "examples");
        if (c.window) add_window(sub);
        if (std::string(c.name) == "hochschild")
            sub->add_option("--coefficients", cfg.coefficients, "Coefficient bimodule")
                ->check(CLI::IsMember({"self", "trivial", "dual"}));
        sub->callback([&cfg, name = std::string(c.name)] { cfg.command = name; });
    }

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        res.output = app.help();
        return res;
    } catch (const CLI::CallForAllHelp&) {
        res.output = app.help("", CLI::AppFormatMode::All);
        return res;
    } catch (const CLI::ParseError& e) {
        res.exit_code = usage;
        res.error = std::string("error: ") + e.what() + "\n\n" + app.help();
        return res;
    }
    for (auto* sub : app.get_subcommands())
        if (auto* o = sub->get_option_no_throw("--min-degree"); o && o->count()) cfg.min_degree_given = true;
    const bool json_out = cfg.format == "json";

    json report;
    report["schema"] = report_schema;
    std::ostringstream table;
    detail::Timer timer(cfg.timing);
    try {
        if (cfg.command == "examples") {
            report["config"] = detail::config_to_json(cfg, nullptr);
            report["builtins"] = json::array();
            table << "builtin algebras (use with --builtin):\n";
            const std::vector<std::pair<std::string, std::string>> list = {
                {"sphere:N", "H*(S^N): one generator in degree N, N >= 2"},
                {"cp:N", "H*(CP^N) = k[x]/(x^{N+1}), |x| = 2"},
                {"product(X,Y,...)", "graded tensor product of builtins, a model of X x Y x ..."},
                {"connected-sum-s3x3", "H*((S^3 x S^3 x S^3) # (S^3 x S^3 x S^3)), formal dimension 9"},
            };
            for (const auto& [n, d] : list) {
                report["builtins"].push_back({{"name", n}, {"description", d}});
                table << "  " << loopalg::detail::pad(n, 20) << d << "\n";
            }
            res.output = json_out ? report.dump(2) + "\n" : table.str();
            return res;
        }
        if (cfg.algebra_path.empty() && cfg.builtin.empty())
            throw detail::UsageError("one of --algebra or --builtin is required");

        FDGA a = timer.phase("load", [&] { return detail::load_algebra(cfg); });
        const bool omega = cfg.command == "omega-homology";
        if (!cfg.min_degree_given) cfg.min_degree = omega ? 0 : -a.formal_dimension;
        if (cfg.command != "validate") {
            if (cfg.max_degree < cfg.min_degree)
                throw detail::UsageError("--max-degree must be >= --min-degree");
            if (!cfg.no_degree_cap && cfg.max_degree > cfg.degree_cap)
                throw detail::UsageError("--max-degree " + std::to_string(cfg.max_degree) + " exceeds the cap " +
                                         std::to_string(cfg.degree_cap) + "; pass --no-degree-cap to override");
        }

        report["config"] = detail::config_to_json(cfg, &a);
        report["algebra"] = detail::algebra_summary(a);
        auto validation = timer.phase("validate", [&] { return validate_fdga(a); });
        report["validation"] = validation_to_json(validation);
        json diag;
        diag["characteristic_caveat"] = detail::characteristic_caveat(a);
        if (detail::characteristic_caveat(a)) diag["caveat"] = detail::caveat_text(a);

        table << "algebra " << a.name << " over " << a.field.to_string() << ", formal dimension " << a.formal_dimension
              << "\n";
        if (detail::characteristic_caveat(a)) table << "caveat: " << detail::caveat_text(a) << "\n";

        auto finish = [&](int code, const std::string& status) {
            report["diagnostics"] = diag;
            report["status"] = status;
            if (timer.enabled()) {
                report["timing"] = timer.to_json();
                table << timer.to_table();
            }
            res.exit_code = code;
            res.output = json_out ? report.dump(2) + "\n" : table.str();
            return res;
        };

        if (cfg.command == "validate" || !validation.valid()) {
            table << detail::validation_table(validation);
            if (!validation.valid()) {
                std::string msg = "validation failed";
                for (const auto& v : validation.violations) msg += "\n  [" + v.kind + "] " + v.message;
                res.error = msg + "\n";
                return finish(validation_failed, "validation_failed");
            }
            return finish(ok, "ok");
        }
        if (!validation.poincare) {
            diag["poincare_caveat"] = "the algebra does not satisfy Poincare duality; loop-space interpretations do not apply";
            table << "caveat: no Poincare duality\n";
        }

        RingOptions ropts;
        ropts.max_classes_for_products = cfg.max_product_classes;
        ListingOptions lopts;
        lopts.max_listed = cfg.max_listed;
        bool violation = false;
        auto record_ring = [&](const char* key, const HomologyRing& r, bool commutative, const std::string& title) {
            report[key] = ring_to_json(r, lopts);
            table << "\n" << ring_to_table(r, title, lopts);
            json d;
            d["partial_degrees"] = r.partial_degrees;
            d["unobserved_products"] = r.unobserved_products;
            if (r.products_computed) {
                auto ax = timer.phase(std::string(key) + " ring checks", [&] { return check_ring_axioms(r, commutative); });
                d["ring_axioms"] = ring_axioms_to_json(ax);
                table << "ring checks: " << ax.associativity_checked << " associativity, " << ax.commutativity_checked
                      << " commutativity, " << ax.failures.size() << " failures\n";
                for (const auto& f : ax.failures) table << "  " << f << "\n";
                if (!ax.ok()) violation = true;
            }
            diag[key] = d;
        };
        const std::string shift_title = "HH_*(LM) for " + a.name;

        if (cfg.command == "loop-homology") {
            auto r = timer.phase("loop homology", [&] { return loop_homology(a, cfg.min_degree, cfg.max_degree, ropts); });
            record_ring("loop_homology", r, true, "loop homology " + shift_title);
        } else if (cfg.command == "omega-homology") {
            auto c = timer.phase("cobar", [&] { return build_cobar(a); });
            auto r = timer.phase("omega homology", [&] { return omega_homology(c, cfg.max_degree, ropts); });
            record_ring("omega_homology", r, false, "H_*(Omega M) for " + a.name);
        } else if (cfg.command == "e2") {
            auto r = timer.phase("e2 page", [&] { return e2_page(a, cfg.min_degree, cfg.max_degree, ropts); });
            record_ring("e2", r, true, "E2 page: loop homology of H(A) for " + a.name);
        } else if (cfg.command == "hochschild") {
            Coefficients k = cfg.coefficients == "trivial" ? Coefficients::trivial
                             : cfg.coefficients == "dual"  ? Coefficients::dual
                                                           : Coefficients::self;
            auto r = timer.phase("hochschild", [&] { return hochschild_homology(a, k, cfg.min_degree, cfg.max_degree); });
            report["hochschild"] = ring_to_json(r, lopts);
            diag["hochschild"] = {{"partial_degrees", r.partial_degrees}};
            table << "\n"
                  << ring_to_table(r, "Hochschild cohomology HH^n(A; N), N = " + cfg.coefficients +
                                          ", listed by lower degree n",
                                          lopts);
        } else if (cfg.command == "intersection") {
            IntersectionOptions iopts;
            iopts.ring = ropts;
            auto ir = timer.phase("intersection", [&] { return intersection(a, cfg.min_degree, cfg.max_degree, iopts); });
            record_ring("loop_homology", ir.loop, true, "loop homology " + shift_title);
            record_ring("omega_homology", ir.omega, false, "H_*(Omega M) for " + a.name);
            report["intersection"] = intersection_to_json(ir, lopts);
            table << "\n" << intersection_to_table(ir);
            if (ir.report.theorem_violation()) violation = true;
        }
        if (violation) {
            res.error = "theorem-violation diagnostics reported\n";
            return finish(theorem_violation, "theorem_violation");
        }
        return finish(ok, "ok");
    } catch (const detail::UsageError& e) {
        res.exit_code = usage;
        res.error = std::string("error: ") + e.what() + "\n";
    } catch (const detail::FileError& e) {
        res.exit_code = file_error;
        res.error = std::string("error: ") + e.what() + "\n";
    } catch (const ParseError& e) {
        res.exit_code = validation_failed;
        res.error = std::string("invalid algebra file: ") + e.what() + "\n";
    } catch (const BimoduleError& e) {
        res.exit_code = validation_failed;
        res.error = std::string("error: ") + e.what() + "\n";
    } catch (const WindowExceeded& e) {
        res.exit_code = usage;
        res.error = std::string("error: ") + e.what() + "\n";
    } catch (const Error& e) {
        res.exit_code = failure;
        res.error = std::string("error: ") + e.what() + "\n";
    }
    res.output.clear();
    return res;
}

}  // namespace loopalg::cli
