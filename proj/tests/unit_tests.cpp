#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>
#include <vector>

#include "polya/cli.hpp"
#include "polya/conditional.hpp"
#include "polya/density.hpp"
#include "polya/determinant.hpp"
#include "polya/pf_checks.hpp"
#include "polya/phi.hpp"
#include "polya/pmf.hpp"
#include "polya/quadrature.hpp"
#include "polya/report_json.hpp"
#include "polya/sampling.hpp"
#include "polya/theorems.hpp"
#include "support/fixtures.hpp"

using namespace polya;
using testsupport::make_cauchy_tabulated;

namespace {

int run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "polya-efron");
    std::vector<const char*> argv;
    argv.reserve(args.size());
    for (const auto& a : args) argv.push_back(a.c_str());
    return cli::run(static_cast<int>(argv.size()), argv.data());
}

const char* kGauss = R"({"kind":"continuous","family":"gaussian","params":{"mu":0.0,"sigma":1.0}})";
const char* kExp = R"({"kind":"continuous","family":"exponential","params":{"rate":1.0}})";
const char* kUnif01 = R"({"kind":"continuous","family":"uniform","params":{"lo":0.0,"hi":1.0}})";

} // namespace

// ---------------------------------------------------------------- quadrature

TEST_CASE("integrate is exact on low-degree polynomials") {
    const auto r = integrate([](double x) { return x * x * x * x * x; }, {0.0, 1.0});
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 1.0 / 6.0) <= 1e-14);

    const auto c = integrate([](double x) { return 3.0 * x * x; }, {-1.0, 2.0});
    CHECK(std::fabs(c.value - 9.0) <= 1e-12);
}

TEST_CASE("integrate captures a gamma(2) density to unit mass") {
    const Density d = Density::gamma(2.0, 1.0);
    const auto r = integrate([&](double x) { return d.pdf(x); }, {0.0, 40.0});
    CHECK(r.converged);
    CHECK(std::fabs(r.value - 1.0) <= 1e-10);
    CHECK(r.err_estimate <= 1e-8);
}

TEST_CASE("integrate handles a jump discontinuity") {
    const auto r = integrate([](double x) { return x >= 0.37 ? 1.0 : 0.0; }, {0.0, 1.0});
    CHECK(std::fabs(r.value - 0.63) <= 1e-9);
}

TEST_CASE("NaN integrands raise QuadratureError with the offending abscissa") {
    bool threw = false;
    try {
        integrate([](double x) { return std::sqrt(x - 0.5); }, {0.0, 1.0});
    } catch (const QuadratureError& e) {
        threw = true;
        CHECK(e.abscissa() >= 0.0);
        CHECK(e.abscissa() < 0.5);
    }
    CHECK(threw);
}

TEST_CASE("integrate_many agrees with separate single integrations") {
    const Interval iv{-8.0, 8.0};
    const auto both = integrate_many(
        2,
        [](double x, double* out) {
            out[0] = std::exp(-x * x);
            out[1] = x * x * std::exp(-x * x);
        },
        iv);
    const auto first = integrate([](double x) { return std::exp(-x * x); }, iv);
    const double root_pi = std::sqrt(std::numbers::pi);
    CHECK(both.converged);
    // The shared partition refines where any component demands it, so the
    // two runs agree to quadrature accuracy rather than bit-for-bit.
    CHECK(std::fabs(both.values[0] - first.value) <= 1e-10);
    CHECK(std::fabs(both.values[0] - root_pi) <= 1e-9);
    CHECK(std::fabs(both.values[1] - root_pi / 2.0) <= 1e-9);
}

TEST_CASE("gauss_legendre weights sum to the reference length") {
    for (int order : {12, 24, 48}) {
        const auto& rule = gauss_legendre(order);
        REQUIRE(rule.nodes.size() == static_cast<std::size_t>(order));
        double total = 0.0;
        for (double w : rule.weights) total += w;
        CHECK(std::fabs(total - 2.0) <= 1e-13);
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            CHECK(std::fabs(rule.nodes[i] + rule.nodes[rule.nodes.size() - 1 - i]) <= 1e-13);
        }
    }
}

TEST_CASE("tensor_integrate evaluates separable cube integrals") {
    const auto plane = tensor_integrate(
        2, [](std::span<const double> x) { return x[0] + x[1]; }, {0.0, 1.0});
    CHECK(plane.converged);
    CHECK(std::fabs(plane.value - 1.0) <= 1e-10);

    const auto cube = tensor_integrate(
        3, [](std::span<const double> x) { return x[0] * x[1] * x[2]; }, {0.0, 1.0});
    CHECK(std::fabs(cube.value - 0.125) <= 1e-10);
}

// --------------------------------------------------------------- determinant

TEST_CASE("det_plain on identity and a 2x2 closed form") {
    SquareMatrix eye(5);
    for (int i = 0; i < 5; ++i) eye.at(i, i) = 1.0;
    CHECK(det_plain(eye) == doctest::Approx(1.0).epsilon(1e-14));

    SquareMatrix m(2);
    m.at(0, 0) = 2.0;
    m.at(0, 1) = 3.0;
    m.at(1, 0) = 5.0;
    m.at(1, 1) = 7.0;
    CHECK(det_plain(m) == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("det_sign_scaled survives entries near the double range limit") {
    SquareMatrix m(2);
    m.at(0, 0) = 1e300;
    m.at(0, 1) = 2e300;
    m.at(1, 0) = 3.0;
    m.at(1, 1) = 8.0;
    const auto d = det_sign_scaled(m);
    CHECK(d.sign == 1);
    // det = 2e300; log_magnitude restores the unscaled value.
    CHECK(std::fabs(d.log_magnitude - (std::log(2.0) + 300.0 * std::log(10.0))) <= 1e-9);
    // Equilibrated matrix is [[1, 1], [0.75, 1]].
    CHECK(d.normalized_det == doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("det_sign_scaled flags zero rows and columns as exact zeros") {
    SquareMatrix row(2);
    row.at(1, 0) = 1.0;
    row.at(1, 1) = 2.0;
    const auto r = det_sign_scaled(row);
    CHECK(r.sign == 0);
    CHECK(r.normalized_det == 0.0);

    SquareMatrix col(2);
    col.at(0, 1) = 1.0;
    col.at(1, 1) = 2.0;
    CHECK(det_sign_scaled(col).sign == 0);
}

// ------------------------------------------------------------------ sampling

TEST_CASE("sample_ordered_tuples is a pure function of its arguments") {
    const auto a = sample_ordered_tuples(3, {0.0, 1.0}, 5, 42, 0.01);
    const auto b = sample_ordered_tuples(3, {0.0, 1.0}, 5, 42, 0.01);
    REQUIRE(a.size() == 5);
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a[i].values == b[i].values);
        for (int k = 0; k < 3; ++k) {
            CHECK(a[i].values[static_cast<std::size_t>(k)] >= 0.0);
            CHECK(a[i].values[static_cast<std::size_t>(k)] <= 1.0);
        }
        for (int k = 1; k < 3; ++k) {
            CHECK(a[i].values[static_cast<std::size_t>(k)] -
                      a[i].values[static_cast<std::size_t>(k - 1)] >=
                  0.01 - 1e-12);
        }
    }
}

TEST_CASE("infeasible min_gap is rejected") {
    CHECK_THROWS_AS(sample_ordered_tuples(3, {0.0, 1.0}, 1, 1, 0.6),
                    std::invalid_argument);
}

TEST_CASE("monotone_staircase is nondecreasing in each variable") {
    const auto st = monotone_staircase(5, 6);
    const auto grid = linspace(-3.5, 3.5, 29);
    for (double y : grid) {
        for (std::size_t i = 1; i < grid.size(); ++i) {
            CHECK(st(grid[i], y) >= st(grid[i - 1], y));
            CHECK(st(y, grid[i]) >= st(y, grid[i - 1]));
        }
    }
    const auto again = monotone_staircase(5, 6);
    CHECK(st(0.3, -1.2) == again(0.3, -1.2));
}

// ----------------------------------------------------------------- densities

TEST_CASE("analytic families integrate to unit mass on their windows") {
    const Density cases[] = {
        Density::gaussian(0.0, 1.0),   Density::gaussian(-2.0, 0.5),
        Density::exponential(1.0),     Density::exponential(2.5),
        Density::laplace(0.0, 1.0),    Density::uniform(-1.0, 4.0),
        Density::logistic(0.5, 1.2),   Density::gamma(2.0, 1.0),
        Density::gamma(3.5, 2.0),
    };
    for (const auto& d : cases) {
        const auto r = integrate([&](double x) { return d.pdf(x); }, d.quad_window());
        CHECK(std::fabs(r.value - 1.0) <= 1e-6);
    }
}

TEST_CASE("gaussian log density at the mode") {
    const Density g = Density::gaussian(0.0, 1.0);
    CHECK(g.log_pdf(0.0) == doctest::Approx(-0.9189385332046727).epsilon(1e-15));
}

TEST_CASE("uniform density vanishes outside its support") {
    const Density u = Density::uniform(0.0, 1.0);
    CHECK(u.log_pdf(-0.5) == -std::numeric_limits<double>::infinity());
    CHECK(u.log_pdf(1.5) == -std::numeric_limits<double>::infinity());
    CHECK(u.pdf(0.5) == doctest::Approx(1.0));
    CHECK(u.compact_support());
}

TEST_CASE("tabulated construction validates its inputs") {
    CHECK_THROWS_WITH_AS(Density::tabulated({0.0, 1.0, 2.0}, {0.0, 0.0, 0.0}),
                         "tabulated: grid too short (need at least 4 points)",
                         std::invalid_argument);
    // Four flat log values over [0, 3] integrate to 3, not 1.
    CHECK_THROWS_AS(Density::tabulated({0.0, 1.0, 2.0, 3.0}, {0.0, 0.0, 0.0, 0.0}),
                    std::invalid_argument);
    const Density ok = Density::tabulated({0.0, 1.0, 2.0, 3.0},
                                          {0.0, 0.0, 0.0, 0.0}, true);
    CHECK(std::fabs(log_linear_mass(ok.grid(), ok.log_values()) - 1.0) <= 1e-12);
}

TEST_CASE("midpoint concavity accepts gaussian strictly and laplace at the kink") {
    // Gaussian margins are (x-y)^2/8, far above rounding noise, so the
    // zero-tolerance scan passes outright.
    const auto strict =
        check_log_concave_continuous(Density::gaussian(0.0, 1.0), linspace(-2.0, 2.0, 41));
    CHECK(strict.passed);
    CHECK(strict.worst_margin > 1e-4);

    // The laplace kink makes the true margin exactly zero on symmetric
    // pairs; allow rounding-level slack there.
    const Density l = Density::laplace(0.0, 1.0);
    const auto rep = check_log_concave_continuous(l, linspace(-2.0, 2.0, 41), 1e-12);
    CHECK(rep.passed);
    CHECK(rep.worst_margin >= -1e-12);
}

TEST_CASE("cauchy-shaped tabulation fails log-concavity with a checkable witness") {
    const Density c = make_cauchy_tabulated();
    const auto rep = check_log_concave_continuous(c, linspace(-40.0, 40.0, 81));
    CHECK(!rep.passed);
    CHECK(rep.worst_margin < 0.0);
    const double mid = 0.5 * (rep.witness_lo + rep.witness_hi);
    const double margin = c.log_pdf(mid) -
                          0.5 * (c.log_pdf(rep.witness_lo) + c.log_pdf(rep.witness_hi));
    CHECK(std::fabs(margin - rep.worst_margin) <= 1e-12);
}

TEST_CASE("cauchy-shaped tabulation reproduces exact node values") {
    const Density c = make_cauchy_tabulated();
    const double pi = std::numbers::pi;
    for (double x : {0.0, 2.0, 4.0, -2.0, 17.5}) {
        CHECK(c.pdf(x) == doctest::Approx(1.0 / (pi * (1.0 + x * x))).epsilon(1e-13));
    }
    CHECK(c.exterior_mass() > 0.012);
    CHECK(c.exterior_mass() < 0.014);
}

TEST_CASE("density JSON parsing round-trips and rejects unknown families") {
    const Density g = parse_density_json(kGauss);
    CHECK(g.family() == "gaussian");
    CHECK(g.log_pdf(0.0) == doctest::Approx(-0.9189385332046727));

    CHECK_THROWS_AS(parse_density_json(R"({"kind":"continuous","family":"zeta","params":{}})"),
                    std::invalid_argument);
    try {
        parse_density_json(R"({"kind":"continuous","family":"zeta","params":{}})");
    } catch (const std::invalid_argument& e) {
        const std::string msg = e.what();
        CHECK(msg.find("zeta") != std::string::npos);
        CHECK(msg.find("gaussian") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_density_json("not json"), std::invalid_argument);
}

TEST_CASE("linspace covers both endpoints exactly") {
    const auto g = linspace(0.2, 6.0, 30);
    REQUIRE(g.size() == 30);
    CHECK(g.front() == 0.2);
    CHECK(g.back() == 6.0);
    CHECK_THROWS_AS(linspace(0.0, 1.0, 1), std::invalid_argument);
}

// ---------------------------------------------------------------------- pmfs

TEST_CASE("poisson weights match the closed form") {
    const Pmf p = make_poisson(3.0);
    CHECK(p.k_min == 0);
    double factorial = 1.0;
    for (long k = 0; k <= 10; ++k) {
        if (k > 0) factorial *= static_cast<double>(k);
        const double want = std::exp(-3.0) * std::pow(3.0, k) / factorial;
        CHECK(p.at(k) == doctest::Approx(want).epsilon(1e-12));
    }
    // P(2) = P(3) for lambda = 3; mode() reports the smaller index.
    CHECK(p.at(2) == p.at(3));
    CHECK(p.mode() == 2);
    CHECK(p.at(3) == doctest::Approx(0.22404180765538775).epsilon(1e-14));
    CHECK(std::fabs(p.mass() + p.truncated_mass - 1.0) <= 1e-12);
}

TEST_CASE("binomial(4, 1/2) is exact in sixteenths") {
    const Pmf b = make_binomial(4, 0.5);
    REQUIRE(b.weights.size() == 5);
    const double w[] = {1.0, 4.0, 6.0, 4.0, 1.0};
    for (long k = 0; k <= 4; ++k) CHECK(b.at(k) == w[k] / 16.0);
    CHECK(b.truncated_mass == 0.0);
}

TEST_CASE("geometric(1/2) sits exactly on the log-concavity boundary") {
    const Pmf g = make_geometric(0.5);
    const auto rep = check_log_concave_discrete(g);
    CHECK(rep.passed);
    // f(k)^2 = f(k-1) f(k+1) holds exactly for dyadic weights.
    CHECK(rep.worst_margin == 0.0);
    CHECK(g.truncated_mass >= 0.0);
}

TEST_CASE("table pmf normalizes and rejects bad weights") {
    const Pmf t = make_table({2.0, 6.0, 2.0});
    CHECK(t.at(0) == doctest::Approx(0.2));
    CHECK(t.at(1) == doctest::Approx(0.6));
    CHECK(std::fabs(t.mass() - 1.0) <= 1e-15);

    CHECK_THROWS_WITH_AS(make_table({1.0, -0.5}), "table: negative weight",
                         std::invalid_argument);
}

TEST_CASE("bimodal table fails discrete log-concavity at the dip") {
    const Pmf t = make_table({1.0, 0.1, 1.0});
    const auto rep = check_log_concave_discrete(t);
    CHECK(!rep.passed);
    CHECK(rep.witness_lo == 1.0);
    CHECK(rep.worst_margin == doctest::Approx(-0.99).epsilon(1e-12));
}

TEST_CASE("pmf JSON parsing accepts poisson and rejects unknown families") {
    const Pmf p = parse_pmf_json(R"({"kind":"discrete","family":"poisson","params":{"lambda":3.0}})");
    CHECK(p.family == "poisson");
    CHECK(p.mode() == 2);
    try {
        parse_pmf_json(R"({"kind":"discrete","family":"zipf","params":{}})");
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("poisson") != std::string::npos);
    }
}

// ----------------------------------------------------------------------- phi

TEST_CASE("phi catalog evaluations") {
    CHECK(phi::identity_x()(7.0, -2.0) == 7.0);
    CHECK(phi::product()(2.0, 3.0) == 6.0);
    CHECK(phi::sum()(2.0, 3.0) == 5.0);
    CHECK(phi::exp_tilt(0.7)(1.0, 2.0) == doctest::Approx(std::exp(2.1)).epsilon(1e-15));
    const double cubic_want = std::exp(0.5 * (0.25 + 1.0) + 0.25 * (0.0625 + 2.0));
    CHECK(phi::cubic(1.0, 2.0)(0.5, 0.25) == doctest::Approx(cubic_want).epsilon(1e-15));
    CHECK(phi::cubic(1.0, 2.0).requires_compact_support);
    CHECK(phi::separated("square", "one")(2.0, 5.0) == 4.0);
}

TEST_CASE("tilted staircase is the exponential times the plain staircase") {
    const auto plain = phi::staircase(7, 5);
    const auto tilted = phi::tilted_staircase(0.3, 7, 5);
    for (double x : {-2.0, -0.5, 0.1, 1.7}) {
        for (double y : {-1.1, 0.4, 2.2}) {
            CHECK(tilted(x, y) ==
                  doctest::Approx(std::exp(0.3 * (x + y)) * plain(x, y)).epsilon(1e-14));
        }
    }
}

TEST_CASE("tabulated phi interpolates bilinearly and clamps at the edges") {
    const auto t = phi::tabulated({0.0, 1.0}, {0.0, 1.0}, {0.0, 1.0, 2.0, 3.0});
    CHECK(t(0.0, 0.0) == 0.0);
    CHECK(t(0.0, 1.0) == 1.0);
    CHECK(t(1.0, 0.0) == 2.0);
    CHECK(t(0.5, 0.5) == doctest::Approx(1.5));
    CHECK(t(-4.0, -4.0) == 0.0);
    CHECK(t(9.0, 9.0) == 3.0);
    CHECK_THROWS_AS(phi::tabulated({0.0, 1.0}, {0.0, 1.0}, {1.0}), std::invalid_argument);
}

TEST_CASE("phi JSON parsing lists valid names on error") {
    const PhiSpec p = parse_phi_json(R"({"name":"exp_tilt","a":0.7})");
    CHECK(p.name == "exp_tilt");
    CHECK(p(1.0, 1.0) == doctest::Approx(std::exp(1.4)));
    try {
        parse_phi_json(R"({"name":"mystery"})");
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("staircase") != std::string::npos);
    }
    CHECK_THROWS_AS(phi::unary("bogus"), std::invalid_argument);
    CHECK(phi::unary("identity")(3.5) == 3.5);
}

// ----------------------------------------------------------------- pf checks

TEST_CASE("laplace kernel determinant closed form") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto m = build_kernel_matrix(l, {0.0, 1.0}, {0.0, 1.0});
    const double want = 0.25 * (1.0 - std::exp(-2.0));
    CHECK(det_plain(m) == doctest::Approx(want).epsilon(1e-14));
}

TEST_CASE("PF_2 and PF_3 hold for laplace, PF_4 for gaussian") {
    SamplingPlan plan;
    const auto l2 = check_pf_n(Density::laplace(0.0, 1.0), 2, plan);
    CHECK(l2.passed);
    CHECK(l2.min_normalized_det >= -1e-9);
    CHECK(l2.tuples_checked == 1000);

    SamplingPlan small{200, 1, std::nullopt, 0.0};
    CHECK(check_pf_n(Density::laplace(0.0, 1.0), 3, small).passed);
    CHECK(check_pf_n(Density::gaussian(0.0, 1.0), 4, small).passed);
}

TEST_CASE("check_pf_n is deterministic in the plan seed") {
    SamplingPlan plan{300, 9, std::nullopt, 0.0};
    const Density g = Density::gaussian(0.0, 1.0);
    const auto a = check_pf_n(g, 3, plan);
    const auto b = check_pf_n(g, 3, plan);
    CHECK(a.min_normalized_det == b.min_normalized_det);
    CHECK(a.degenerate == b.degenerate);
}

TEST_CASE("cauchy-shaped tabulation fails PF_2 with a re-checkable counterexample") {
    const Density c = make_cauchy_tabulated();
    SamplingPlan plan; // 1000 tuples, seed 1
    const auto rep = check_pf_n(c, 2, plan);
    CHECK(!rep.passed);
    REQUIRE(rep.counterexample.has_value());
    const auto& ce = *rep.counterexample;
    CHECK(ce.normalized_det < -1e-9);
    const auto again = det_sign_scaled(build_kernel_matrix(c, ce.a, ce.b));
    CHECK(again.normalized_det == ce.normalized_det);
}

TEST_CASE("fixed cauchy tuple reproduces the closed-form determinant") {
    const Density c = make_cauchy_tabulated();
    const auto m = build_kernel_matrix(c, {0.0, 2.0}, {-2.0, 0.0});
    const double pi = std::numbers::pi;
    const double want = (1.0 / (pi * pi)) * (1.0 / 25.0 - 1.0 / 17.0);
    CHECK(det_plain(m) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("Vandermonde tuples give the product-form determinants") {
    const auto ft3 = vandermonde_gm(3);
    SquareMatrix m3(3);
    const double x3[] = {0.0, 1.0, 2.0};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m3.at(i, j) = ft3.fns[static_cast<std::size_t>(i)](x3[j]);
    CHECK(det_plain(m3) == doctest::Approx(2.0).epsilon(1e-13));

    const auto ft4 = vandermonde_gm(4);
    SquareMatrix m4(4);
    const double x4[] = {0.0, 1.0, 2.0, 3.0};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) m4.at(i, j) = ft4.fns[static_cast<std::size_t>(i)](x4[j]);
    CHECK(det_plain(m4) == doctest::Approx(12.0).epsilon(1e-13));

    const auto tuples = sample_ordered_tuples(3, {-3.0, 3.0}, 200, 11, 6e-3);
    const auto rep = check_gm_n(ft3, tuples);
    CHECK(rep.passed);
    CHECK(rep.min_normalized_det > 0.0);
}

TEST_CASE("reversed function order flips the GM determinant sign") {
    FunctionTuple reversed;
    reversed.names = {"x", "1"};
    reversed.fns = {[](double x) { return x; }, [](double) { return 1.0; }};
    const auto tuples = sample_ordered_tuples(2, {0.0, 3.0}, 50, 3, 3e-3);
    const auto rep = check_gm_n(reversed, tuples);
    CHECK(!rep.passed);
    REQUIRE(rep.counterexample.has_value());
    CHECK(rep.counterexample->normalized_det < 0.0);
}

TEST_CASE("andreief identity for the power-sum and power-product cases") {
    auto power_matrix = [](int n, bool product) {
        std::vector<std::vector<std::function<double(double)>>> m(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                const int e = product ? (i + 1) * (j + 1) : (i + 1) + (j + 1);
                m[static_cast<std::size_t>(i)].push_back(
                    [e](double x) { return std::pow(x, e); });
            }
        return m;
    };

    const auto s2 = andreief_check(power_matrix(2, false), {0.0, 1.0});
    CHECK(s2.lhs == doctest::Approx(1.0 / 240.0).epsilon(1e-12));
    CHECK(s2.rhs == doctest::Approx(1.0 / 240.0).epsilon(1e-10));
    CHECK(s2.rel_err <= 1e-10);

    const auto s3 = andreief_check(power_matrix(3, false), {0.0, 1.0});
    CHECK(s3.lhs == doctest::Approx(1.0 / 378000.0).epsilon(1e-9));
    CHECK(s3.rel_err <= 1e-6);

    const auto p3 = andreief_check(power_matrix(3, true), {0.0, 1.0});
    CHECK(p3.lhs == doctest::Approx(-1.0 / 176400.0).epsilon(1e-8));
    CHECK(p3.rel_err <= 1e-6);

    CHECK_THROWS_AS(andreief_check(power_matrix(4, false), {0.0, 1.0}),
                    std::invalid_argument);
}

TEST_CASE("andreief with equal columns is exactly zero on both sides") {
    std::vector<std::vector<std::function<double(double)>>> m(2);
    for (int i = 0; i < 2; ++i) {
        const int e = i + 2;
        auto f = [e](double x) { return std::pow(x, e); };
        m[static_cast<std::size_t>(i)] = {f, f};
    }
    const auto res = andreief_check(m, {0.0, 1.0});
    CHECK(res.lhs == 0.0);
    CHECK(std::fabs(res.rhs) <= 1e-15);
    CHECK(res.rel_err <= 1e-9);
}

// --------------------------------------------------------------- conditional

TEST_CASE("iid exponential fibers give linear and quadratic moments") {
    const Density e = Density::exponential(1.0);
    for (double s : {0.2, 1.0, 3.7, 6.0}) {
        const auto lin = conditional_expectation_2d(phi::identity_x(), e, e, s);
        REQUIRE(!lin.skipped);
        CHECK(std::fabs(lin.phi_value - s / 2.0) <= 1e-9);
        const auto prod = conditional_expectation_2d(phi::product(), e, e, s);
        CHECK(std::fabs(prod.phi_value - s * s / 6.0) <= 1e-9 * (1.0 + s * s));
    }
}

TEST_CASE("iid gaussian conditional moments match the closed forms") {
    const Density g = Density::gaussian(0.0, 1.0);
    const auto sq = phi::separated("square", "one");
    for (double s : {-4.0, -1.0, 0.0, 2.5}) {
        const auto first = conditional_expectation_2d(phi::identity_x(), g, g, s);
        CHECK(std::fabs(first.phi_value - s / 2.0) <= 1e-8);
        const auto second = conditional_expectation_2d(sq, g, g, s);
        CHECK(std::fabs(second.phi_value - (s * s / 4.0 + 0.5)) <= 1e-6);
        const auto cross = conditional_expectation_2d(phi::product(), g, g, s);
        CHECK(std::fabs(cross.phi_value - (s * s / 4.0 - 0.5)) <= 1e-6);
    }
}

TEST_CASE("functions of x+y are constant on each fiber") {
    const Density l = Density::laplace(0.0, 1.0);
    for (double s : {-2.0, 0.3, 1.9}) {
        const auto sum = conditional_expectation_2d(phi::sum(), l, l, s);
        CHECK(std::fabs(sum.phi_value - s) <= 1e-9 * (1.0 + std::fabs(s)));
    }
    const Density u = Density::uniform(0.0, 1.0);
    const auto tilt = conditional_expectation_2d(phi::exp_tilt(0.7), u, u, 1.3);
    CHECK(std::fabs(tilt.phi_value - std::exp(0.7 * 1.3)) <= 1e-9 * std::exp(0.91));
}

TEST_CASE("conditional expectation is linear in phi") {
    const Density g = Density::gaussian(0.0, 1.0);
    const double s = 1.3;
    const auto a = conditional_expectation_2d(phi::identity_x(), g, g, s);
    const auto b = conditional_expectation_2d(phi::product(), g, g, s);
    const auto both = conditional_expectation_2d(
        phi::custom("id_plus_prod", [](double x, double y) { return x + x * y; }), g, g, s);
    CHECK(std::fabs(both.phi_value - (a.phi_value + b.phi_value)) <= 2e-9);
}

TEST_CASE("uniform convolution density is the unit triangle") {
    const Density u = Density::uniform(0.0, 1.0);
    CHECK(std::fabs(conv_density_at(u, u, 1.0).value - 1.0) <= 1e-9);
    CHECK(std::fabs(conv_density_at(u, u, 0.5).value - 0.5) <= 1e-9);
    CHECK(std::fabs(conv_density_at(u, u, 1.5).value - 0.5) <= 1e-9);
    const auto outside = conv_density_at(u, u, 5.0);
    CHECK(outside.value == 0.0);
    CHECK(outside.empty_window);
}

TEST_CASE("a curve with no feasible fiber reports an empty curve") {
    const Density u = Density::uniform(0.0, 1.0);
    CHECK_THROWS_WITH_AS(conditional_curve(phi::identity_x(), u, u, {5.0, 6.0}),
                         "empty curve", std::runtime_error);
    auto partial = conditional_curve(phi::identity_x(), u, u, {1.0, 6.0});
    REQUIRE(partial.size() == 2);
    CHECK(!partial[0].skipped);
    CHECK(partial[1].skipped);
    CHECK(std::isnan(partial[1].phi_value));
}

TEST_CASE("cubic phi refuses unbounded densities") {
    const Density g = Density::gaussian(0.0, 1.0);
    CHECK_THROWS_AS(conditional_expectation_2d(phi::cubic(1.0, 2.0), g, g, 0.5),
                    std::invalid_argument);
    const Density u = Density::uniform(0.0, 1.0);
    CHECK(!conditional_expectation_2d(phi::cubic(1.0, 2.0), u, u, 0.5).skipped);
}

TEST_CASE("iid restricted curves for X and Y are bit-identical") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto pr = verify_restricted_efron(phi::unary("identity"), l, l,
                                            linspace(-2.0, 2.0, 9));
    CHECK(verdict_json(pr.first) == verdict_json(pr.second));
}

TEST_CASE("discrete conditionals are exact finite sums") {
    const Pmf p = make_poisson(3.0);
    const auto half = discrete_conditional(phi::identity_x(), p, p, 7);
    CHECK(half.phi_value == doctest::Approx(3.5).epsilon(1e-14));
    CHECK(half.err_estimate == 0.0);

    const Pmf b = make_binomial(4, 0.5);
    CHECK(discrete_conditional(phi::identity_x(), b, b, 9).skipped);
    CHECK(discrete_conditional(phi::identity_x(), b, b, -1).skipped);
    // E[X | X+Y=4] for iid binomial(4,1/2) is 2 by symmetry.
    CHECK(discrete_conditional(phi::identity_x(), b, b, 4).phi_value ==
          doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("discrete convolution matches the poisson additivity law") {
    const Pmf p3 = make_poisson(3.0);
    const Pmf sum = convolve_discrete(p3, p3);
    const Pmf p6 = make_poisson(6.0);
    for (long k = 0; k <= 20; ++k) {
        CHECK(sum.at(k) == doctest::Approx(p6.at(k)).epsilon(1e-10));
    }
    CHECK(sum.family == "convolution");
}

TEST_CASE("continuous convolution tabulates the gamma(2) density") {
    const Density e = Density::exponential(1.0);
    const Density r = convolve(e, e, linspace(0.0, 20.0, 4001));
    for (double s : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        CHECK(std::fabs(r.pdf(s) - s * std::exp(-s)) <= 1e-6);
    }
    CHECK(r.exterior_mass() < 1e-4);
    CHECK(r.family() == "tabulated");
}

// ------------------------------------------------------------------ theorems

TEST_CASE("strong efron verdict is monotone for iid laplace and a staircase") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto grid = linspace(-4.0, 4.0, 21);
    const auto rep = verify_strong_efron(phi::staircase(3, 5), l, l, grid);
    CHECK(rep.passed);
    CHECK(rep.max_violation <= 1e-8);
    CHECK(rep.theorem == "thm1_strong_efron");
    CHECK(rep.hypotheses.at("logconcave_f"));
    CHECK(rep.hypotheses.at("phi_monotone"));
    REQUIRE(!rep.segments.empty());
}

TEST_CASE("exp tilt at a=0 and alpha=unit delegate to the strong verdict") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto grid = linspace(-3.0, 3.0, 15);
    const auto spec = phi::staircase(3, 5);
    const std::string base = verdict_json(verify_strong_efron(spec, l, l, grid));
    CHECK(verdict_json(verify_exp_tilt(spec, 0.0, l, l, grid)) == base);
    CHECK(verdict_json(verify_alpha_monotone(spec, alpha::unit(), l, l, grid)) == base);
}

TEST_CASE("restricted efron holds on the poisson lattice") {
    const Pmf p = make_poisson(3.0);
    const auto pr = verify_restricted_efron(phi::unary("identity"), p, p, 0, 30);
    CHECK(pr.first.passed);
    CHECK(pr.first.max_violation <= 1e-12);
    CHECK(pr.second.passed);
}

TEST_CASE("tilt conditions separate a <= gamma from a > gamma on the cubic") {
    const auto ok = check_tilt_conditions(phi::cubic(1.0, 2.0), 1.0, {0.0, 1.0});
    CHECK(ok.condition1_ok);
    CHECK(ok.condition2_ok);

    const auto bad = check_tilt_conditions(phi::cubic(1.0, 2.0), 1.5, {0.0, 1.0});
    CHECK(!bad.condition1_ok);
    REQUIRE(bad.worst_pair.has_value());
    const auto& w = *bad.worst_pair;
    CHECK(w.condition == 1);
    // Witness re-check: the tilted difference at the quoted pair equals the
    // quoted margin.
    const auto cub = phi::cubic(1.0, 2.0);
    const double lhs = std::exp(-1.5 * w.moving_hi) * cub(w.moving_hi, w.fixed);
    const double rhs = std::exp(-1.5 * w.moving_lo) * cub(w.moving_lo, w.fixed);
    CHECK(std::fabs((lhs - rhs) - w.margin) <= 1e-12);
}

TEST_CASE("discrete tilt conditions hold for the tilted staircase") {
    const auto spec = phi::tilted_staircase(0.3, 42, 8);
    const auto rep = check_tilt_conditions_discrete(spec, 0.3, 0, 40, 0, 40);
    CHECK(rep.condition1_ok);
    CHECK(rep.condition2_ok);
    CHECK(rep.mode == "discrete");

    // Tilting faster than the construction rate must fail.
    const auto bad = check_tilt_conditions_discrete(spec, 0.5, 0, 10, 0, 10);
    CHECK(!bad.condition1_ok);
}

TEST_CASE("product-over-s refuses densities with mass below zero") {
    const Density g = Density::gaussian(0.0, 1.0);
    const auto grid = linspace(0.5, 4.0, 9);
    try {
        verify_product_over_s(g, g, grid);
        CHECK(false);
    } catch (const HypothesisError& e) {
        CHECK(e.hypothesis() == "positive_support_f");
        CHECK(!e.witness().empty());
    }
}

TEST_CASE("product-over-s verdict matches s/6 for iid exponential") {
    const Density e = Density::exponential(1.0);
    const auto rep = verify_product_over_s(e, e, linspace(0.2, 6.0, 20));
    CHECK(rep.passed);
    CHECK(rep.theorem == "prop7_product_over_s");
    for (const auto& smp : rep.samples) {
        if (smp.skipped) continue;
        CHECK(std::fabs(smp.phi_value - smp.s / 6.0) <= 1e-6 * (1.0 + smp.s));
    }
}

TEST_CASE("gm phi matrix entries are conditional expectations") {
    const Density g = Density::gaussian(0.0, 1.0);
    FunctionTuple ft;
    ft.names = {"1", "x"};
    ft.fns = {[](double) { return 1.0; }, [](double x) { return x; }};
    const auto m = gm_phi_matrix(ft, g, g, OrderedTuple{{-1.0, 2.0}, 0.0});
    REQUIRE(m.has_value());
    // Row 0 is the constant 1; row 1 holds E[X|s] = s/2.
    CHECK(std::fabs(m->at(0, 0) - 1.0) <= 1e-10);
    CHECK(std::fabs(m->at(1, 0) - (-0.5)) <= 1e-8);
    CHECK(std::fabs(m->at(1, 1) - 1.0) <= 1e-8);
    CHECK(std::fabs(det_plain(*m) - 1.5) <= 1e-7);
}

TEST_CASE("hypothesis refusals carry machine-checkable witnesses") {
    const Density c = make_cauchy_tabulated();
    const auto grid = linspace(-2.0, 2.0, 9);
    try {
        verify_strong_efron(phi::identity_x(), c, c, grid);
        CHECK(false);
    } catch (const HypothesisError& e) {
        CHECK(e.hypothesis() == "logconcave_f");
        REQUIRE(e.witness().size() == 2);
        const double lo = e.witness()[0];
        const double hi = e.witness()[1];
        const double margin =
            c.log_pdf(0.5 * (lo + hi)) - 0.5 * (c.log_pdf(lo) + c.log_pdf(hi));
        CHECK(std::fabs(margin - e.margin()) <= 1e-12);
        CHECK(margin < 0.0);
    }
}

TEST_CASE("override_hypotheses records the failure instead of refusing") {
    const Density c = make_cauchy_tabulated();
    VerifyOptions opt;
    opt.override_hypotheses = true;
    const auto rep =
        verify_strong_efron(phi::identity_x(), c, c, linspace(-2.0, 2.0, 9), {}, opt);
    CHECK(!rep.hypotheses.at("logconcave_f"));
    CHECK(!rep.samples.empty());
}

TEST_CASE("verdicts are stable under a loosened tolerance") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto grid = linspace(-3.0, 3.0, 11);
    const auto tight = verify_strong_efron(phi::staircase(12, 4), l, l, grid, {1e-8});
    Tols loose;
    loose.atol = 1e-4;
    const auto relaxed = verify_strong_efron(phi::staircase(12, 4), l, l, grid, loose);
    CHECK(tight.passed);
    CHECK(relaxed.passed);
    CHECK(tight.max_violation == relaxed.max_violation);
}

TEST_CASE("corollary derivative bound holds on the cubic example") {
    const Density u = Density::uniform(0.0, 1.0);
    const auto rep = corollary_derivative_check(phi::cubic(1.0, 2.0), 1.0, u, u,
                                                linspace(0.1, 1.9, 13));
    CHECK(rep.passed);
    CHECK(rep.theorem == "cor1_derivative");
    CHECK(rep.min_margin >= -1e-6);
    CHECK(rep.fd_step == 1e-3);
}

TEST_CASE("convolution stability report carries the interpolation slack") {
    const Density e = Density::exponential(1.0);
    SamplingPlan plan{300, 1, std::nullopt, 0.0};
    const auto rep = verify_convolution_stability(e, e, 2, plan);
    CHECK(rep.passed);
    CHECK(rep.pf.passed);
    CHECK(rep.crosscheck_ok);
    CHECK(rep.crosscheck_max_rel_err <= 1e-6);
    CHECK(rep.tabulation_slack > 0.0);
    CHECK(rep.pf.tolerance >= 1e-9);
    CHECK(rep.hypotheses.at("pf_f"));
    CHECK(rep.hypotheses.at("f_positive"));
}

// ------------------------------------------------------------------- reports

TEST_CASE("verdict JSON is byte-stable across repeated runs") {
    const Density l = Density::laplace(0.0, 1.0);
    const auto grid = linspace(-2.0, 2.0, 7);
    const auto a = verify_strong_efron(phi::staircase(5, 4), l, l, grid);
    const auto b = verify_strong_efron(phi::staircase(5, 4), l, l, grid);
    CHECK(verdict_json(a) == verdict_json(b));
    CHECK(verdict_json(a).find("\"theorem\"") != std::string::npos);
}

TEST_CASE("curve CSV renders skipped samples as nan rows") {
    std::vector<CurveSample> samples(2);
    samples[0] = {1.0, 0.5, 0.25, 1e-12, false};
    samples[1] = {2.0, std::numeric_limits<double>::quiet_NaN(), 0.0,
                  std::numeric_limits<double>::infinity(), true};
    const std::string csv = curve_csv(samples);
    CHECK(csv.rfind("s,phi,mass,err,skipped\n", 0) == 0);
    CHECK(csv.find("1,0.5,0.25,1e-12,false") != std::string::npos);
    CHECK(csv.find("2,nan,0,inf,true") != std::string::npos);
}

// ----------------------------------------------------------------------- cli

TEST_CASE("cli reruns are byte-identical without timestamps") {
    // The config echo includes every flag, so byte identity requires the
    // exact same invocation, output path included.
    const std::string out = testsupport::temp_path("cli_rerun");
    const std::vector<std::string> args = {
        "efron",          "--fx",  kExp,  "--fy", kExp, "--phi",
        R"({"name":"identity_x"})", "--grid", "0.2:6:8", "--no-timestamp",
        "--out", out};
    CHECK(run_cli(args) == 0);
    const std::string body = testsupport::slurp(out);
    CHECK(run_cli(args) == 0);
    CHECK(body == testsupport::slurp(out));
    CHECK(!body.empty());
    CHECK(body.find("\"config\"") != std::string::npos);
    CHECK(body.find("\"command\"") != std::string::npos);
    CHECK(body.find("\"seed\"") != std::string::npos);
    CHECK(body.find("\"timestamp\"") == std::string::npos);
}

TEST_CASE("cli exit codes distinguish pass, violation, and configuration errors") {
    const std::string out = testsupport::temp_path("cli_codes");
    CHECK(run_cli({"check-gm", "--fns", "one,identity", "--tuples", "50",
                   "--no-timestamp", "--out", out}) == 0);
    CHECK(run_cli({"check-gm", "--fns", "identity,one", "--tuples", "50",
                   "--no-timestamp", "--out", out}) == 1);
    CHECK(run_cli({"check-pf", "--density",
                   R"({"kind":"continuous","family":"zeta","params":{}})",
                   "--no-timestamp", "--out", out}) == 2);
    CHECK(run_cli({"efron", "--fx", kExp, "--fy", kExp, "--phi",
                   R"({"name":"identity_x"})", "--grid", "6:1:5",
                   "--no-timestamp", "--out", out}) == 2);
    CHECK(run_cli({"no-such-command"}) == 2);
}

TEST_CASE("cli writes a refusal document when hypotheses fail") {
    const std::string out = testsupport::temp_path("cli_refusal");
    const int code =
        run_cli({"tilt", "--fx", kUnif01, "--fy", kUnif01, "--phi",
                 R"({"name":"cubic","alpha":1.0,"beta":2.0})", "--a", "1.5",
                 "--grid", "0.1:1.9:9", "--no-timestamp", "--out", out});
    CHECK(code == 1);
    const std::string body = testsupport::slurp(out);
    CHECK(body.find("\"refusal\"") != std::string::npos);
    CHECK(body.find("tilt_cond1") != std::string::npos);
    CHECK(body.find("\"witness\"") != std::string::npos);
}

TEST_CASE("cli curve subcommand emits CSV with the fixed header") {
    const std::string out = testsupport::temp_path("cli_curve");
    const int code = run_cli({"curve", "--fx", kGauss, "--fy", kGauss, "--phi",
                              R"({"name":"identity_x"})", "--grid", "-2:2:5",
                              "--format", "csv", "--no-timestamp", "--out", out});
    CHECK(code == 0);
    const std::string body = testsupport::slurp(out);
    CHECK(body.rfind("s,phi,mass,err,skipped\n", 0) == 0);
    // Five data rows after the header, four commas each.
    int rows = 0;
    int commas = 0;
    for (char ch : body) {
        if (ch == '\n') ++rows;
        if (ch == ',') ++commas;
    }
    CHECK(rows == 6);
    CHECK(commas == 24);
    CHECK(body.find(",false\n") != std::string::npos);
}

TEST_CASE("cli rejects csv for report subcommands") {
    const std::string out = testsupport::temp_path("cli_badfmt");
    CHECK(run_cli({"check-gm", "--fns", "one,identity", "--tuples", "5",
                   "--format", "csv", "--no-timestamp", "--out", out}) == 2);
}

TEST_CASE("cli andreief reports both sides of the identity") {
    const std::string out = testsupport::temp_path("cli_andreief");
    CHECK(run_cli({"andreief", "--case", "power_sum", "--n", "2", "--lo", "0",
                   "--hi", "1", "--no-timestamp", "--out", out}) == 0);
    const std::string body = testsupport::slurp(out);
    CHECK(body.find("\"lhs\"") != std::string::npos);
    CHECK(body.find("\"rel_err\"") != std::string::npos);
    CHECK(run_cli({"andreief", "--case", "bogus", "--n", "2", "--lo", "0",
                   "--hi", "1", "--no-timestamp", "--out", out}) == 2);
}
