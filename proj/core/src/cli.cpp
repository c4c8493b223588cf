#include "polya/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "polya/conditional.hpp"
#include "polya/density.hpp"
#include "polya/pf_checks.hpp"
#include "polya/phi.hpp"
#include "polya/pmf.hpp"
#include "polya/report_json.hpp"
#include "polya/theorems.hpp"
#include "report_json_internal.hpp"

namespace polya::cli {

namespace {

struct Options {
    std::string command;
    std::string density;
    std::string fx;
    std::string fy;
    std::string phi;
    std::string fns;
    int n = 2;
    std::size_t tuples = 1000;
    unsigned long long seed = 1;
    std::string grid;
    std::string domain;
    double atol = 1e-8;
    double rtol = 1e-10;
    double mass_floor = 1e-12;
    double det_tol = 1e-9;
    double min_gap = 0.0;
    double a = 0.0;
    std::string alpha = "unit";
    std::string case_name = "power_sum";
    double lo = 0.0;
    double hi = 1.0;
    int probes = 41;
    double tol = 0.0;
    std::string out;
    std::string format = "json";
    bool no_timestamp = false;
    bool override_hypotheses = false;
};

// Spec arguments accept either a file path or inline JSON.
std::string read_spec(const std::string& arg, const char* what) {
    if (!arg.empty() && arg.front() == '{') return arg;
    std::ifstream in(arg);
    if (!in) {
        throw std::invalid_argument(std::string("cannot read ") + what + " spec file '" +
                                    arg + "'");
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

std::string sniff_kind(const std::string& text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("spec is not valid JSON: ") + e.what());
    }
    if (!j.is_object() || !j.contains("kind")) {
        throw std::invalid_argument("spec needs a \"kind\" field (continuous or discrete)");
    }
    return j["kind"].get<std::string>();
}

struct GridSpec {
    double lo = 0.0;
    double hi = 0.0;
    int count = 0;
};

GridSpec parse_grid(const std::string& text) {
    GridSpec g;
    const auto c1 = text.find(':');
    const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos) {
        throw std::invalid_argument("grid must be lo:hi:count, got '" + text + "'");
    }
    try {
        g.lo = std::stod(text.substr(0, c1));
        g.hi = std::stod(text.substr(c1 + 1, c2 - c1 - 1));
        g.count = std::stoi(text.substr(c2 + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("grid must be lo:hi:count, got '" + text + "'");
    }
    if (!(g.lo < g.hi) || g.count < 2) {
        throw std::invalid_argument("grid needs lo < hi and count >= 2");
    }
    return g;
}

Interval parse_domain(const std::string& text) {
    const auto c = text.find(':');
    if (c == std::string::npos) {
        throw std::invalid_argument("domain must be lo:hi, got '" + text + "'");
    }
    Interval iv;
    try {
        iv.lo = std::stod(text.substr(0, c));
        iv.hi = std::stod(text.substr(c + 1));
    } catch (const std::exception&) {
        throw std::invalid_argument("domain must be lo:hi, got '" + text + "'");
    }
    if (!(iv.lo < iv.hi)) throw std::invalid_argument("domain needs lo < hi");
    return iv;
}

Density load_continuous(const std::string& arg, const char* what) {
    const std::string text = read_spec(arg, what);
    if (sniff_kind(text) != "continuous") {
        throw std::invalid_argument(std::string(what) + " spec must have kind \"continuous\"");
    }
    return parse_density_json(text);
}

std::string iso8601_now() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[80];
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02dT%02d:%02d:%02dZ",
                  tm.tm_year + 1900, tm.tm_mon + 1, tm.tm_mday, tm.tm_hour,
                  tm.tm_min, tm.tm_sec);
    return buf;
}

nlohmann::json opt_str(const std::string& s) {
    if (s.empty()) return nullptr;
    return s;
}

// Every report carries the full effective configuration, defaults included,
// so a run is reproducible from its own output.
nlohmann::json config_json(const Options& o) {
    nlohmann::json c;
    c["command"] = o.command;
    c["density"] = opt_str(o.density);
    c["fx"] = opt_str(o.fx);
    c["fy"] = opt_str(o.fy);
    c["phi"] = opt_str(o.phi);
    c["fns"] = opt_str(o.fns);
    c["n"] = o.n;
    c["tuples"] = o.tuples;
    c["seed"] = o.seed;
    c["grid"] = opt_str(o.grid);
    c["domain"] = opt_str(o.domain);
    c["atol"] = o.atol;
    c["rtol"] = o.rtol;
    c["mass_floor"] = o.mass_floor;
    c["det_tol"] = o.det_tol;
    c["min_gap"] = o.min_gap;
    c["a"] = o.a;
    c["alpha"] = o.alpha;
    c["case"] = o.case_name;
    c["interval"] = {{"lo", o.lo}, {"hi", o.hi}};
    c["probes"] = o.probes;
    c["tol"] = o.tol;
    c["format"] = o.format;
    c["out"] = opt_str(o.out);
    c["override_hypotheses"] = o.override_hypotheses;
    return c;
}

void write_output(const Options& o, const std::string& text) {
    const char* tail = (!text.empty() && text.back() == '\n') ? "" : "\n";
    if (o.out.empty()) {
        std::cout << text << tail;
        return;
    }
    std::ofstream f(o.out);
    if (!f) throw std::invalid_argument("cannot write output file '" + o.out + "'");
    f << text << tail;
}

int emit(const Options& o, nlohmann::json doc, bool passed) {
    doc["config"] = config_json(o);
    if (!o.no_timestamp) doc["timestamp"] = iso8601_now();
    write_output(o, doc.dump(2));
    return passed ? 0 : 1;
}

Tols make_tols(const Options& o) {
    Tols t;
    t.atol = o.atol;
    t.rtol = o.rtol;
    t.quad.mass_floor = o.mass_floor;
    return t;
}

VerifyOptions make_verify_options(const Options& o) {
    VerifyOptions v;
    v.override_hypotheses = o.override_hypotheses;
    v.probe_points = o.probes;
    return v;
}

void require_json_format(const Options& o) {
    if (o.format != "json") {
        throw std::invalid_argument("csv format is only available for the curve subcommand");
    }
}

FunctionTuple resolve_functions(const Options& o, int& n) {
    if (o.fns.empty()) return vandermonde_gm(n);
    FunctionTuple ft;
    std::stringstream ss(o.fns);
    std::string name;
    while (std::getline(ss, name, ',')) {
        Phi1d u = phi::unary(name);
        ft.names.push_back(u.name);
        ft.fns.push_back(std::move(u.eval));
    }
    if (ft.n() < 2) throw std::invalid_argument("--fns needs at least 2 names");
    n = static_cast<int>(ft.n());
    return ft;
}

int run_check_pf(const Options& o) {
    require_json_format(o);
    const Density d = load_continuous(o.density, "density");
    SamplingPlan plan{o.tuples, o.seed, std::nullopt, o.min_gap};
    if (!o.domain.empty()) plan.domain = parse_domain(o.domain);
    const DetCheckReport rep = check_pf_n(d, o.n, plan, o.det_tol);
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_check_logconcave(const Options& o) {
    require_json_format(o);
    const std::string text = read_spec(o.density, "density");
    ConcavityReport rep;
    if (sniff_kind(text) == "discrete") {
        rep = check_log_concave_discrete(parse_pmf_json(text), o.tol);
    } else {
        const Density d = parse_density_json(text);
        std::vector<double> grid;
        if (o.grid.empty()) {
            grid = linspace(d.sampling_window().lo, d.sampling_window().hi, o.probes);
        } else {
            const GridSpec g = parse_grid(o.grid);
            grid = linspace(g.lo, g.hi, g.count);
        }
        rep = check_log_concave_continuous(d, grid, o.tol);
    }
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_check_gm(const Options& o) {
    require_json_format(o);
    int n = o.n;
    const FunctionTuple ft = resolve_functions(o, n);
    const Interval dom = o.domain.empty() ? Interval{-3.0, 3.0} : parse_domain(o.domain);
    const double gap = o.min_gap > 0.0 ? o.min_gap : dom.width() * 1e-3;
    const auto tuples = sample_ordered_tuples(n, dom, o.tuples, o.seed, gap);
    const DetCheckReport rep = check_gm_n(ft, tuples, o.det_tol, o.seed);
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

std::vector<double> required_grid(const Options& o) {
    if (o.grid.empty()) {
        throw std::invalid_argument("this subcommand requires --grid lo:hi:count");
    }
    const GridSpec g = parse_grid(o.grid);
    return linspace(g.lo, g.hi, g.count);
}

int run_efron(const Options& o) {
    require_json_format(o);
    const Density fx = load_continuous(o.fx, "fx");
    const Density fy = load_continuous(o.fy, "fy");
    const PhiSpec phi = parse_phi_json(read_spec(o.phi, "phi"));
    const MonotonicityReport rep = verify_strong_efron(
        phi, fx, fy, required_grid(o), make_tols(o), make_verify_options(o));
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_gm_preserve(const Options& o) {
    require_json_format(o);
    const Density fx = load_continuous(o.fx, "fx");
    const Density fy = load_continuous(o.fy, "fy");
    int n = o.n;
    const FunctionTuple ft = resolve_functions(o, n);
    Interval dom;
    if (o.domain.empty()) {
        // Middle half of the sum window keeps every Phi entry well above
        // the mass floor.
        const Interval sx = fx.sampling_window();
        const Interval sy = fy.sampling_window();
        const double lo = sx.lo + sy.lo;
        const double hi = sx.hi + sy.hi;
        const double mid = 0.5 * (lo + hi);
        const double quarter = 0.25 * (hi - lo);
        dom = {mid - quarter, mid + quarter};
    } else {
        dom = parse_domain(o.domain);
    }
    const double gap = o.min_gap > 0.0 ? o.min_gap : dom.width() * 1e-3;
    const auto s_tuples = sample_ordered_tuples(n, dom, o.tuples, o.seed, gap);
    const DetCheckReport rep = verify_gm_preservation(ft, fx, fy, s_tuples,
                                                      make_tols(o),
                                                      make_verify_options(o));
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

std::pair<long, long> integer_range(const Options& o) {
    const GridSpec g = parse_grid(o.grid);
    const long lo = static_cast<long>(std::ceil(g.lo));
    const long hi = static_cast<long>(std::floor(g.hi));
    if (hi < lo) throw std::invalid_argument("grid contains no integers");
    return {lo, hi};
}

int run_tilt(const Options& o) {
    require_json_format(o);
    const std::string tx = read_spec(o.fx, "fx");
    const std::string ty = read_spec(o.fy, "fy");
    const PhiSpec phi = parse_phi_json(read_spec(o.phi, "phi"));
    const std::string kx = sniff_kind(tx);
    const std::string ky = sniff_kind(ty);
    if (kx != ky) {
        throw std::invalid_argument("tilt requires both inputs continuous or both discrete");
    }
    MonotonicityReport rep;
    if (kx == "discrete") {
        const auto [lo, hi] = integer_range(o);
        rep = verify_exp_tilt_discrete(phi, o.a, parse_pmf_json(tx), parse_pmf_json(ty),
                                       lo, hi, make_tols(o), make_verify_options(o));
    } else {
        rep = verify_exp_tilt(phi, o.a, parse_density_json(tx), parse_density_json(ty),
                              required_grid(o), make_tols(o), make_verify_options(o));
    }
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

AlphaTransform resolve_alpha(const Options& o) {
    if (o.alpha == "unit") return alpha::unit();
    if (o.alpha == "reciprocal") return alpha::reciprocal();
    if (o.alpha == "exp_tilt") return alpha::exp_tilt(o.a);
    throw std::invalid_argument("unknown alpha '" + o.alpha +
                                "'; valid names: unit reciprocal exp_tilt");
}

int run_alpha(const Options& o) {
    require_json_format(o);
    const Density fx = load_continuous(o.fx, "fx");
    const Density fy = load_continuous(o.fy, "fy");
    const PhiSpec phi = parse_phi_json(read_spec(o.phi, "phi"));
    const MonotonicityReport rep = verify_alpha_monotone(
        phi, resolve_alpha(o), fx, fy, required_grid(o), make_tols(o),
        make_verify_options(o));
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_product_over_s(const Options& o) {
    require_json_format(o);
    const Density fx = load_continuous(o.fx, "fx");
    const Density fy = load_continuous(o.fy, "fy");
    const MonotonicityReport rep = verify_product_over_s(
        fx, fy, required_grid(o), make_tols(o), make_verify_options(o));
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_conv_stability(const Options& o) {
    require_json_format(o);
    const Density fx = load_continuous(o.fx, "fx");
    const Density fy = load_continuous(o.fy, "fy");
    const SamplingPlan plan{o.tuples, o.seed, std::nullopt, o.min_gap};
    const ConvStabilityReport rep = verify_convolution_stability(
        fx, fy, o.n, plan, make_tols(o), make_verify_options(o));
    nlohmann::json doc;
    doc["report"] = detail::to_json(rep);
    return emit(o, doc, rep.passed);
}

int run_andreief(const Options& o) {
    require_json_format(o);
    std::vector<std::vector<std::function<double(double)>>> m(
        static_cast<std::size_t>(o.n));
    for (int i = 0; i < o.n; ++i) {
        for (int j = 0; j < o.n; ++j) {
            int e = 0;
            if (o.case_name == "power_sum") {
                e = (i + 1) + (j + 1);
            } else if (o.case_name == "power_prod") {
                e = (i + 1) * (j + 1);
            } else {
                throw std::invalid_argument("unknown case '" + o.case_name +
                                            "'; valid names: power_sum power_prod");
            }
            m[static_cast<std::size_t>(i)].push_back(
                [e](double x) { return std::pow(x, e); });
        }
    }
    const AndreiefResult res = andreief_check(m, {o.lo, o.hi});
    const double tol = o.n == 2 ? 1e-10 : 1e-6;
    const bool passed =
        res.rel_err <= tol && res.lhs_converged && res.rhs_converged;
    nlohmann::json doc;
    doc["report"] = detail::to_json(res);
    doc["report"]["passed"] = passed;
    doc["report"]["rel_tol"] = tol;
    return emit(o, doc, passed);
}

int run_curve(const Options& o) {
    const std::string tx = read_spec(o.fx, "fx");
    const std::string ty = read_spec(o.fy, "fy");
    const PhiSpec phi = parse_phi_json(read_spec(o.phi, "phi"));
    const std::string kx = sniff_kind(tx);
    const std::string ky = sniff_kind(ty);
    if (kx != ky) {
        throw std::invalid_argument("curve requires both inputs continuous or both discrete");
    }
    std::vector<CurveSample> samples;
    if (kx == "discrete") {
        const Pmf px = parse_pmf_json(tx);
        const Pmf py = parse_pmf_json(ty);
        const auto [lo, hi] = integer_range(o);
        bool any_live = false;
        for (long s = lo; s <= hi; ++s) {
            samples.push_back(discrete_conditional(phi, px, py, s));
            any_live = any_live || !samples.back().skipped;
        }
        if (!any_live) throw std::runtime_error("empty curve");
    } else {
        CurveTols quad;
        quad.mass_floor = o.mass_floor;
        samples = conditional_curve(phi, parse_density_json(tx),
                                    parse_density_json(ty), required_grid(o), quad);
    }
    if (o.format == "csv") {
        write_output(o, curve_csv(samples));
        return 0;
    }
    if (o.format != "json") {
        throw std::invalid_argument("format must be json or csv");
    }
    nlohmann::json doc;
    doc["samples"] = detail::to_json(samples);
    return emit(o, doc, true);
}

void add_common(CLI::App* cmd, Options& o) {
    cmd->add_option("--out", o.out, "Write the report to this file instead of stdout");
    cmd->add_option("--format", o.format, "Output format: json or csv (curve only)");
    cmd->add_flag("--no-timestamp", o.no_timestamp,
                  "Omit the timestamp for byte-stable output");
}

} // namespace

int run(int argc, const char* const* argv) {
    Options o;
    CLI::App app{"Sampled verification of Polya frequency and conditional-"
                 "expectation monotonicity properties"};
    app.require_subcommand(1);

    auto* pf = app.add_subcommand("check-pf", "Sampled PF_n determinant check");
    pf->add_option("--density", o.density, "Density spec (path or inline JSON)")->required();
    pf->add_option("--n", o.n, "Matrix order");
    pf->add_option("--tuples", o.tuples, "Tuple pairs to sample");
    pf->add_option("--seed", o.seed, "RNG seed");
    pf->add_option("--det-tol", o.det_tol, "Normalized determinant tolerance");
    pf->add_option("--min-gap", o.min_gap, "Minimum tuple spacing (0 = auto)");
    pf->add_option("--domain", o.domain, "Sampling domain lo:hi (default: density window)");
    add_common(pf, o);

    auto* lc = app.add_subcommand("check-logconcave", "Log-concavity scan");
    lc->add_option("--density", o.density, "Density or pmf spec")->required();
    lc->add_option("--grid", o.grid, "Probe grid lo:hi:count (continuous only)");
    lc->add_option("--probes", o.probes, "Probe count for the default grid");
    lc->add_option("--tol", o.tol, "Concavity margin tolerance");
    add_common(lc, o);

    auto* gm = app.add_subcommand("check-gm", "Sampled GM_n determinant check");
    gm->add_option("--n", o.n, "Tuple size (monomial witness)");
    gm->add_option("--fns", o.fns, "Comma-separated unary names instead of monomials");
    gm->add_option("--tuples", o.tuples, "Tuples to sample");
    gm->add_option("--seed", o.seed, "RNG seed");
    gm->add_option("--det-tol", o.det_tol, "Normalized determinant tolerance");
    gm->add_option("--min-gap", o.min_gap, "Minimum tuple spacing (0 = auto)");
    gm->add_option("--domain", o.domain, "Sampling domain lo:hi (default -3:3)");
    add_common(gm, o);

    auto* ef = app.add_subcommand("efron", "Strong Efron monotonicity report");
    ef->add_option("--fx", o.fx, "Density of X")->required();
    ef->add_option("--fy", o.fy, "Density of Y")->required();
    ef->add_option("--phi", o.phi, "Bivariate phi spec")->required();
    ef->add_option("--grid", o.grid, "s grid lo:hi:count")->required();
    ef->add_option("--atol", o.atol, "Absolute monotonicity tolerance");
    ef->add_option("--rtol", o.rtol, "Relative monotonicity tolerance");
    ef->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    ef->add_option("--probes", o.probes, "Hypothesis probe resolution");
    ef->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(ef, o);

    auto* gp = app.add_subcommand("gm-preserve", "GM_n preservation under conditioning");
    gp->add_option("--fx", o.fx, "Density of X")->required();
    gp->add_option("--fy", o.fy, "Density of Y")->required();
    gp->add_option("--n", o.n, "Tuple size (monomial witness)");
    gp->add_option("--fns", o.fns, "Comma-separated unary names instead of monomials");
    gp->add_option("--tuples", o.tuples, "s-tuples to sample");
    gp->add_option("--seed", o.seed, "RNG seed");
    gp->add_option("--min-gap", o.min_gap, "Minimum tuple spacing (0 = auto)");
    gp->add_option("--domain", o.domain, "s-tuple domain lo:hi (default: central sum window)");
    gp->add_option("--atol", o.atol, "Absolute tolerance");
    gp->add_option("--rtol", o.rtol, "Relative tolerance");
    gp->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    gp->add_option("--probes", o.probes, "Hypothesis probe resolution");
    gp->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(gp, o);

    auto* ti = app.add_subcommand("tilt", "Exponential tilt monotonicity");
    ti->add_option("--fx", o.fx, "Density or pmf of X")->required();
    ti->add_option("--fy", o.fy, "Density or pmf of Y")->required();
    ti->add_option("--phi", o.phi, "Bivariate phi spec")->required();
    ti->add_option("--a", o.a, "Tilt parameter (a >= 0)");
    ti->add_option("--grid", o.grid, "s grid lo:hi:count (integers for pmfs)")->required();
    ti->add_option("--atol", o.atol, "Absolute monotonicity tolerance");
    ti->add_option("--rtol", o.rtol, "Relative monotonicity tolerance");
    ti->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    ti->add_option("--probes", o.probes, "Hypothesis probe resolution");
    ti->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(ti, o);

    auto* al = app.add_subcommand("alpha", "alpha(s) * Phi(s) monotonicity");
    al->add_option("--fx", o.fx, "Density of X")->required();
    al->add_option("--fy", o.fy, "Density of Y")->required();
    al->add_option("--phi", o.phi, "Bivariate phi spec")->required();
    al->add_option("--alpha", o.alpha, "Transform: unit, reciprocal, or exp_tilt");
    al->add_option("--a", o.a, "Parameter for alpha=exp_tilt");
    al->add_option("--grid", o.grid, "s grid lo:hi:count")->required();
    al->add_option("--atol", o.atol, "Absolute monotonicity tolerance");
    al->add_option("--rtol", o.rtol, "Relative monotonicity tolerance");
    al->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    al->add_option("--probes", o.probes, "Hypothesis probe resolution");
    al->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(al, o);

    auto* ps = app.add_subcommand("product-over-s", "Phi(s)/s monotonicity for phi = xy");
    ps->add_option("--fx", o.fx, "Density of X (positive support)")->required();
    ps->add_option("--fy", o.fy, "Density of Y (positive support)")->required();
    ps->add_option("--grid", o.grid, "s grid lo:hi:count, inside (0, inf)")->required();
    ps->add_option("--atol", o.atol, "Absolute monotonicity tolerance");
    ps->add_option("--rtol", o.rtol, "Relative monotonicity tolerance");
    ps->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    ps->add_option("--probes", o.probes, "Hypothesis probe resolution");
    ps->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(ps, o);

    auto* cs = app.add_subcommand("conv-stability", "PF_n stability of f * g");
    cs->add_option("--fx", o.fx, "Density of X")->required();
    cs->add_option("--fy", o.fy, "Density of Y")->required();
    cs->add_option("--n", o.n, "Matrix order");
    cs->add_option("--tuples", o.tuples, "Tuple pairs for the convolved check");
    cs->add_option("--seed", o.seed, "RNG seed");
    cs->add_option("--min-gap", o.min_gap, "Minimum tuple spacing (0 = auto)");
    cs->add_option("--probes", o.probes, "Hypothesis probe resolution");
    cs->add_flag("--override-hypotheses", o.override_hypotheses,
                 "Run even when a hypothesis check fails");
    add_common(cs, o);

    auto* an = app.add_subcommand("andreief", "Determinant-integral identity check");
    an->add_option("--case", o.case_name, "power_sum or power_prod");
    an->add_option("--n", o.n, "Order (2 or 3)");
    an->add_option("--lo", o.lo, "Interval lower endpoint");
    an->add_option("--hi", o.hi, "Interval upper endpoint");
    add_common(an, o);

    auto* cu = app.add_subcommand("curve", "Conditional expectation curve export");
    cu->add_option("--fx", o.fx, "Density or pmf of X")->required();
    cu->add_option("--fy", o.fy, "Density or pmf of Y")->required();
    cu->add_option("--phi", o.phi, "Bivariate phi spec")->required();
    cu->add_option("--grid", o.grid, "s grid lo:hi:count")->required();
    cu->add_option("--mass-floor", o.mass_floor, "Denominator mass floor");
    add_common(cu, o);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }

    try {
        if (pf->parsed()) {
            o.command = "check-pf";
            return run_check_pf(o);
        }
        if (lc->parsed()) {
            o.command = "check-logconcave";
            return run_check_logconcave(o);
        }
        if (gm->parsed()) {
            o.command = "check-gm";
            return run_check_gm(o);
        }
        if (ef->parsed()) {
            o.command = "efron";
            return run_efron(o);
        }
        if (gp->parsed()) {
            o.command = "gm-preserve";
            return run_gm_preserve(o);
        }
        if (ti->parsed()) {
            o.command = "tilt";
            return run_tilt(o);
        }
        if (al->parsed()) {
            o.command = "alpha";
            return run_alpha(o);
        }
        if (ps->parsed()) {
            o.command = "product-over-s";
            return run_product_over_s(o);
        }
        if (cs->parsed()) {
            o.command = "conv-stability";
            return run_conv_stability(o);
        }
        if (an->parsed()) {
            o.command = "andreief";
            return run_andreief(o);
        }
        if (cu->parsed()) {
            o.command = "curve";
            return run_curve(o);
        }
        std::cerr << "no subcommand selected\n";
        return 2;
    } catch (const HypothesisError& e) {
        // The theorem's hypotheses fail on these inputs; write a refusal
        // report instead of a verdict.
        nlohmann::json doc;
        doc["passed"] = false;
        doc["refusal"] = {{"hypothesis", e.hypothesis()},
                          {"witness", e.witness()},
                          {"margin", detail::finite_or_null(e.margin())}};
        try {
            emit(o, std::move(doc), false);
        } catch (const std::exception& io) {
            std::cerr << io.what() << "\n";
            return 2;
        }
        return 1;
    } catch (const QuadratureError& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

} // namespace polya::cli
