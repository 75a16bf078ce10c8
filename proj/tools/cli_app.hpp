#pragma once

// Command-line front end. Kept in a header so the tests can drive it
// in-process with captured streams.

#include <harmonorm/harmonorm.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cstdio>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace harmonorm::cli {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
public:
    using Error::Error;
    const char* kind() const noexcept override { return "UsageError"; }
};

// -- parsing -----------------------------------------------------------------

inline std::optional<double> parse_real(std::string_view s)
{
    if (!s.empty() && s.front() == '+') {
        s.remove_prefix(1);
    }
    double v = 0.0;
    const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc{} || end != s.data() + s.size()) {
        return std::nullopt;
    }
    return v;
}

/// Parses "a", "a+bi", "a-bi", "bi", "i", "-i". Whitespace is ignored.
inline cplx parse_complex(const std::string& text)
{
    std::string s;
    for (char c : text) {
        if (c != ' ') {
            s += c;
        }
    }
    const auto fail = [&]() -> cplx { throw UsageError("cannot parse complex literal '" + text + "'"); };
    if (s.empty()) {
        return fail();
    }
    if (s.back() != 'i') {
        const auto re = parse_real(s);
        return re ? cplx{*re} : fail();
    }
    s.pop_back();
    // Split before the last sign that is not an exponent sign.
    std::size_t split = 0;
    for (std::size_t k = s.size(); k-- > 1;) {
        if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
            split = k;
            break;
        }
    }
    const std::string re_part = s.substr(0, split);
    std::string im_part = s.substr(split);
    if (im_part.empty() || im_part == "+" || im_part == "-") {
        im_part += "1";
    }
    const auto im = parse_real(im_part);
    const auto re = re_part.empty() ? std::optional<double>(0.0) : parse_real(re_part);
    return re && im ? cplx{*re, *im} : fail();
}

inline ParamSet parse_params(const std::vector<std::string>& items)
{
    ParamSet p;
    for (const auto& item : items) {
        const auto eq = item.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw UsageError("expected key=value, got '" + item + "'");
        }
        p[item.substr(0, eq)] = parse_complex(item.substr(eq + 1));
    }
    return p;
}

// -- output ------------------------------------------------------------------

inline std::string format_number(double v, int digits)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

namespace detail {

inline void write_json(const Json& j, std::string& out, int level)
{
    const std::string pad(2 * (level + 1), ' ');
    const std::string close(2 * level, ' ');
    switch (j.type()) {
    case Json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (const auto& [key, value] : j.items()) {
            out += first ? "" : ",\n";
            first = false;
            out += pad + Json(key).dump() + ": ";
            write_json(value, out, level + 1);
        }
        out += "\n" + close + "}";
        return;
    }
    case Json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t k = 0; k < j.size(); ++k) {
            out += k ? ",\n" : "";
            out += pad;
            write_json(j[k], out, level + 1);
        }
        out += "\n" + close + "]";
        return;
    }
    case Json::value_t::number_float: {
        const double v = j.get<double>();
        out += std::isfinite(v) ? format_number(v, 17) : "null";
        return;
    }
    default:
        out += j.dump();
    }
}

} // namespace detail

/// Pretty JSON with every float written with 17 significant digits.
inline std::string dump_json(const Json& j)
{
    std::string out;
    detail::write_json(j, out, 0);
    return out + "\n";
}

inline Json complex_json(cplx z) { return Json{{"re", z.real()}, {"im", z.imag()}}; }

inline Json params_json(const FamilySpec& fam, const ParamSet& resolved)
{
    Json j = Json::object();
    for (const auto& spec : fam.params) {
        const cplx v = resolved.at(spec.name);
        j[spec.name] = spec.is_complex ? complex_json(v) : Json(v.real());
    }
    return j;
}

inline std::string csv_field(double v) { return std::isfinite(v) ? format_number(v, 12) : ""; }

inline Json error_json(const std::string& kind, const std::string& message, std::optional<cplx> point = std::nullopt)
{
    Json e{{"kind", kind}, {"message", message}};
    if (point) {
        e["point"] = complex_json(*point);
    }
    return Json{{"error", e}};
}

// -- commands ----------------------------------------------------------------

struct Options {
    bool json = false;
    unsigned seed = 42;
    GridConfig grid;
};

inline double canonical_angle(cplx z)
{
    const double a = std::arg(z);
    return a < 0.0 ? a + 2.0 * std::numbers::pi : a;
}

inline Flavor parse_flavor(const std::string& s)
{
    if (s == "analytic") {
        return Flavor::analytic;
    }
    if (s == "hm") {
        return Flavor::hm;
    }
    if (s == "cdo") {
        return Flavor::cdo;
    }
    throw UsageError("unknown flavor '" + s + "'");
}

/// Closed-form value a norm sweep is compared against, when the family has one.
inline std::optional<double> norm_reference(const std::string& family_name, const std::string& which,
                                            const std::string& flavor, const ParamSet& params)
{
    std::string key;
    if (family_name == "thm42-extremal" && which == "pre" && flavor == "hm") {
        key = "M";
    } else if (family_name == "thm43-extremal" && which == "schwarzian" && flavor == "hm") {
        key = "S0";
    } else if (family_name == "cubic-cdo" && which == "pre" && flavor == "cdo") {
        key = "gap";
    } else if (family_name == "bloch-bounded" && which == "bloch") {
        key = "bloch";
    } else {
        return std::nullopt;
    }
    return reference(family_name, key, params);
}

inline NormEstimate estimate(const HarmonicMap& f, const std::string& which, Flavor flavor, const GridConfig& grid)
{
    if (which == "pre") {
        return norm_pre_schwarzian(f, flavor, grid);
    }
    if (which == "schwarzian") {
        return norm_schwarzian(f, flavor, grid);
    }
    if (which == "bloch") {
        return bloch_constant(f, grid);
    }
    throw UsageError("unknown functional '" + which + "'");
}

inline int cmd_analyze(const std::string& name, const ParamSet& given, cplx point, std::ostream& out)
{
    const FamilySpec& fam = family(name);
    const ParamSet p = resolve_params(fam, given);
    const DerivativeBundle b = derivative_bundle(fam.builder(p), point);
    Json j{{"family", name}, {"params", params_json(fam, p)}, {"point", complex_json(point)},
           {"omega", complex_json(b.omega_value)}, {"jacobian", b.jacobian},
           {"p_analytic", complex_json(b.p_analytic)}, {"s_analytic", complex_json(b.s_analytic)},
           {"p_hm", complex_json(b.p_hm)}, {"s_hm", complex_json(b.s_hm)}};
    if (b.p_cdo) {
        j["p_cdo"] = complex_json(*b.p_cdo);
        j["s_cdo"] = complex_json(*b.s_cdo);
    }
    j["q_functional"] = complex_json(b.q_functional);
    out << dump_json(j);
    return 0;
}

inline int cmd_norm(const std::string& name, const ParamSet& given, const std::string& which,
                    const std::string& flavor, const Options& opt, std::ostream& out)
{
    const FamilySpec& fam = family(name);
    const ParamSet p = resolve_params(fam, given);
    const NormEstimate e = estimate(fam.builder(p), which, parse_flavor(flavor), opt.grid);
    Json j{{"family", name}, {"params", params_json(fam, p)}, {"which", which},
           {"flavor", which == "bloch" ? "analytic" : flavor}, {"value", e.value},
           {"argmax", complex_json(e.argmax)}, {"argmax_r", std::abs(e.argmax)},
           {"argmax_theta", canonical_angle(e.argmax)}, {"boundary_limit", e.boundary_limit},
           {"evaluations", e.evaluations}};
    if (const auto ref = norm_reference(name, which, flavor, p)) {
        j["reference_value"] = *ref;
    }
    out << dump_json(j);
    return 0;
}

inline int cmd_sweep(const std::string& name, const std::string& param, double from, double to, int steps,
                     const ParamSet& given, const std::string& which, const std::string& flavor, const Options& opt,
                     std::ostream& out)
{
    const FamilySpec& fam = family(name);
    const Flavor fl = parse_flavor(flavor);
    if (steps < 1) {
        throw UsageError("sweep needs at least one step");
    }
    const auto spec = std::find_if(fam.params.begin(), fam.params.end(), [&](const ParamSpec& s) { return s.name == param; });
    if (spec == fam.params.end() || spec->is_complex) {
        throw UsageError("family '" + name + "' has no real parameter '" + param + "'");
    }
    Json rows = Json::array();
    std::ostringstream csv;
    csv << "param,reference_value,sampled_norm,argmax_r,argmax_theta,boundary_limit\n";
    for (int k = 0; k < steps; ++k) {
        const double v = steps == 1 ? from : from + (to - from) * k / (steps - 1);
        ParamSet p = given;
        p[param] = v;
        p = resolve_params(fam, p);
        const NormEstimate e = estimate(fam.builder(p), which, fl, opt.grid);
        const auto ref = norm_reference(name, which, flavor, p);
        csv << csv_field(v) << ',' << (ref ? csv_field(*ref) : "") << ',' << csv_field(e.value) << ','
            << csv_field(std::abs(e.argmax)) << ',' << csv_field(canonical_angle(e.argmax)) << ','
            << (e.boundary_limit ? "true" : "false") << '\n';
        Json row{{"param", v}, {"reference_value", ref ? Json(*ref) : Json(nullptr)}, {"sampled_norm", e.value},
                 {"argmax_r", std::abs(e.argmax)}, {"argmax_theta", canonical_angle(e.argmax)},
                 {"boundary_limit", e.boundary_limit}};
        rows.push_back(row);
    }
    if (opt.json) {
        out << dump_json(Json{{"family", name}, {"param", param}, {"which", which}, {"flavor", flavor}, {"rows", rows}});
    } else {
        out << csv.str();
    }
    return 0;
}

inline int cmd_coeffs(const std::string& name, const ParamSet& given, int n_max, const Options& opt, std::ostream& out)
{
    const FamilySpec& fam = family(name);
    const ParamSet p = resolve_params(fam, given);
    const HarmonicMap f = fam.builder(p);
    const std::vector<cplx> b = g_coefficients(f, n_max);
    const CoefficientReport report = coefficient_bound_check(f, n_max);
    const bool has_ref = fam.references.count("b_n") > 0;

    Json rows = Json::array();
    std::ostringstream csv;
    csv << "n,re,im,abs,reference\n";
    for (int n = 1; n <= n_max; ++n) {
        const cplx c = b[n - 1];
        std::optional<double> ref;
        if (has_ref) {
            ParamSet q = p;
            q["n"] = double(n);
            ref = reference(name, "b_n", q);
        }
        csv << n << ',' << csv_field(c.real()) << ',' << csv_field(c.imag()) << ',' << csv_field(std::abs(c)) << ','
            << (ref ? csv_field(*ref) : "") << '\n';
        Json row{{"n", n}, {"b", complex_json(c)}, {"abs", std::abs(c)}};
        if (ref) {
            row["reference"] = *ref;
        }
        rows.push_back(row);
    }
    if (opt.json) {
        out << dump_json(Json{{"family", name},
                              {"params", params_json(fam, p)},
                              {"coefficients", rows},
                              {"max_modulus", report.max_modulus},
                              {"bound_respected", report.passed}});
    } else {
        out << csv.str();
    }
    return 0;
}

inline int cmd_verify(const std::vector<std::string>& requested, const Options& opt, std::ostream& out)
{
    std::vector<std::string> suites = requested;
    if (suites.empty() || (suites.size() == 1 && suites.front() == "all")) {
        suites = verify_suite_names();
    }
    for (const auto& s : suites) {
        if (std::find(verify_suite_names().begin(), verify_suite_names().end(), s) == verify_suite_names().end()) {
            throw UsageError("unknown verify suite '" + s + "'");
        }
    }
    VerifyOptions vo;
    vo.seed = opt.seed;
    vo.grid = opt.grid;

    bool all_passed = true;
    Json reports = Json::array();
    std::ostringstream table;
    for (const auto& s : suites) {
        const SuiteReport r = run_verify_suite(s, vo);
        all_passed = all_passed && r.passed();
        Json checks = Json::array();
        table << r.suite << ": " << (r.passed() ? "PASS" : "FAIL") << '\n';
        for (const auto& c : r.checks) {
            char line[96];
            std::snprintf(line, sizeof line, "  %-4s  %-22s %-2s %-22s  ", c.passed ? "ok" : "FAIL",
                          format_number(c.measured, 12).c_str(), c.relation.c_str(), format_number(c.bound, 12).c_str());
            table << line << c.name << '\n';
            checks.push_back(Json{{"name", c.name}, {"measured", c.measured}, {"relation", c.relation},
                                  {"bound", c.bound}, {"passed", c.passed}});
        }
        reports.push_back(Json{{"suite", r.suite}, {"passed", r.passed()}, {"checks", checks}});
    }
    if (opt.json) {
        out << dump_json(Json{{"passed", all_passed}, {"suites", reports}});
    } else {
        out << table.str() << (all_passed ? "all suites passed" : "verification FAILED") << '\n';
    }
    return all_passed ? 0 : 1;
}

// -- entry point -------------------------------------------------------------

/// Runs the CLI on `args` (without the program name). Returns the exit code.
inline int run(const std::vector<std::string>& args, std::ostream& out)
{
    CLI::App app{"Derivative operators and sampled norms for harmonic maps of the unit disk", "harmonorm"};
    app.require_subcommand(1);
    app.fallthrough();

    Options opt;
    double r_max = opt.grid.r_max;
    bool no_refine = false;
    app.add_flag("--json", opt.json, "Emit JSON instead of CSV / tables");
    app.add_option("--seed", opt.seed, "Seed for random sample points")->capture_default_str();
    app.add_option("--r-max", r_max, "Largest sampled radius")->capture_default_str();
    app.add_option("--n-theta", opt.grid.n_theta, "Angles per circle")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--n-radii", opt.grid.n_radii, "Radial steps")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_flag("--no-refine", no_refine, "Skip local refinement of the grid maximum");

    std::string fam_name;
    std::vector<std::string> param_items;
    std::string point_text = "0";
    std::string which = "pre";
    std::string flavor = "hm";
    const auto add_family = [&](CLI::App* sub) {
        sub->add_option("family", fam_name, "Registry family name")->required();
    };
    const auto add_params = [&](CLI::App* sub) {
        sub->add_option("params", param_items, "Family parameters as key=value (complex as a+bi)");
    };
    const auto add_functional = [&](CLI::App* sub) {
        sub->add_option("--which", which, "Functional")->check(CLI::IsMember({"pre", "schwarzian", "bloch"}))->capture_default_str();
        sub->add_option("--flavor", flavor, "Operator flavor")->check(CLI::IsMember({"analytic", "hm", "cdo"}))->capture_default_str();
    };

    CLI::App* analyze = app.add_subcommand("analyze", "Derivative bundle of a family member at a point");
    add_family(analyze);
    add_params(analyze);
    analyze->add_option("--point", point_text, "Evaluation point a+bi")->capture_default_str();

    CLI::App* norm = app.add_subcommand("norm", "Sampled norm of a family member");
    add_family(norm);
    add_params(norm);
    add_functional(norm);

    std::string sweep_param;
    double from = 0.0;
    double to = 0.0;
    int steps = 0;
    CLI::App* sweep = app.add_subcommand("sweep", "Norm over a range of one real parameter (CSV)");
    add_family(sweep);
    sweep->add_option("param", sweep_param, "Parameter to vary")->required();
    sweep->add_option("from", from)->required();
    sweep->add_option("to", to)->required();
    sweep->add_option("steps", steps)->required();
    add_params(sweep);
    add_functional(sweep);

    int n_max = 20;
    CLI::App* coeffs = app.add_subcommand("coeffs", "Taylor coefficients b_n of the co-analytic part (CSV)");
    add_family(coeffs);
    add_params(coeffs);
    coeffs->add_option("--n-max", n_max, "Largest n")->capture_default_str()->check(CLI::PositiveNumber);

    std::vector<std::string> suites;
    CLI::App* verify = app.add_subcommand("verify", "Run verification suites (exit 1 on failure)");
    verify->add_option("suites", suites, "Suite names, or all")->check(CLI::IsMember([] {
        auto names = verify_suite_names();
        names.push_back("all");
        return names;
    }()));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        out << dump_json(error_json("UsageError", e.what()));
        return 2;
    }
    for (CLI::App* sub : app.get_subcommands()) {
        if (sub->get_help_ptr() && sub->get_help_ptr()->count() > 0) {
            out << sub->help();
            return 0;
        }
    }

    try {
        opt.grid.r_max = r_max;
        opt.grid.refine = !no_refine;
        opt.grid.radii();  // validates the grid flags
        const ParamSet params = parse_params(param_items);
        if (analyze->parsed()) {
            return cmd_analyze(fam_name, params, parse_complex(point_text), out);
        }
        if (norm->parsed()) {
            return cmd_norm(fam_name, params, which, flavor, opt, out);
        }
        if (sweep->parsed()) {
            return cmd_sweep(fam_name, sweep_param, from, to, steps, params, which, flavor, opt, out);
        }
        if (coeffs->parsed()) {
            return cmd_coeffs(fam_name, params, n_max, opt, out);
        }
        return cmd_verify(suites, opt, out);
    } catch (const Error& e) {
        out << dump_json(error_json(e.kind(), e.what(), e.point()));
        return 2;
    }
}

} // namespace harmonorm::cli
