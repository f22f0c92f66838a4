#include <catch_amalgamated.hpp>

#include <cmath>

#include "gupw/oracle.hpp"

using namespace gupw;
using Catch::Approx;

namespace {

void require_pass(const OracleReport& r)
{
    INFO(r.suite << " min_slack=" << r.min_slack);
    for (const auto& f : r.failures) UNSCOPED_INFO("seed " << f.seed << " slack " << f.slack << " " << f.parameters);
    REQUIRE(r.passed());
}

}  // namespace

TEST_CASE("recorder counts failures below the tolerance", "[oracle]")
{
    detail::SuiteRecorder rec("t", 1e-9);
    rec.check(0.5, 1, "ok");
    rec.check(-1e-10, 2, "inside tolerance");
    rec.check(-1e-3, 3, "bad");
    rec.check(std::nan(""), 4, "nan counts as failure");
    rec.sample();
    const OracleReport r = rec.finish();
    CHECK_FALSE(r.passed());
    REQUIRE(r.failures.size() == 2);
    CHECK(r.failures[0].seed == 3);
    CHECK(r.failures[0].slack == -1e-3);
    CHECK(r.failures[1].seed == 4);
    CHECK(std::isinf(r.min_slack));
    CHECK(r.n_samples == 1);
}

TEST_CASE("seed derivation", "[oracle]")
{
    SuiteOptions opt;
    opt.seed = 5;
    const auto a = detail::sample_seeds(opt, 10);
    CHECK(a == detail::sample_seeds(opt, 10));
    CHECK(std::set<std::uint64_t>(a.begin(), a.end()).size() == 10);
    opt.replay = a[7];
    CHECK(detail::sample_seeds(opt, 10) == std::vector<std::uint64_t>{a[7]});
    CHECK(mix_seed(1, 0) != mix_seed(2, 0));
}

TEST_CASE("loglog slope", "[oracle]")
{
    const std::vector<double> x = {1e-4, 3e-4, 1e-3};
    std::vector<double> y;
    for (double v : x) y.push_back(7.0 * v * v);
    CHECK(detail::loglog_slope(x, y) == Approx(2.0).epsilon(1e-12));
}

TEST_CASE("separable sweep is sound, deterministic and replayable", "[oracle]")
{
    SeparableSweepParams p;
    p.n_samples = 25;
    p.cutoff = 14;
    SuiteOptions opt;
    opt.seed = 77;
    const OracleReport a = separable_bound_sweep(Criterion::duan, p, GupConfig(1e-3), opt);
    require_pass(a);
    CHECK(a.suite == "duan_separable");
    CHECK(a.n_samples == 25);
    CHECK(a.min_slack >= -1e-9);
    CHECK(a.details.count("min_slack_gup"));

    const OracleReport b = separable_bound_sweep(Criterion::duan, p, GupConfig(1e-3), opt);
    CHECK(b.min_slack == a.min_slack);
    CHECK(b.details == a.details);

    opt.replay = detail::sample_seeds(opt, 25)[3];
    const OracleReport one = separable_bound_sweep(Criterion::duan, p, GupConfig(1e-3), opt);
    CHECK(one.n_samples == 1);
    require_pass(one);

    CHECK_THROWS_AS(separable_bound_sweep(Criterion::rigolin_pairwise, p, GupConfig(0.0)), InvalidArgument);
}

TEST_CASE("tripartite separable sweep", "[oracle]")
{
    SeparableSweepParams p;
    p.n_samples = 6;
    p.cutoff = 8;
    const OracleReport r = separable_bound_sweep(Criterion::vanloock, p, GupConfig(0.0));
    require_pass(r);
    CHECK(r.suite == "vanloock_separable");
}

TEST_CASE("exhaustive small product grid", "[oracle]")
{
    const OracleReport r = duan_exhaustive_small({0.5, 1.0, 2.0}, 4);
    require_pass(r);
    CHECK(r.n_samples == 16 * 16);
    // The vacuum-vacuum point saturates the a = 1 bound.
    CHECK(r.min_slack == Approx(0.0).margin(1e-9));
}

TEST_CASE("violation search", "[oracle]")
{
    const OracleReport t =
        violation_search(Family::tmsv, {0.0, 0.25, 0.5}, EprCoefficients::bipartite(1.0), GupConfig(1e-3), 30);
    require_pass(t);
    CHECK(t.details.at("threshold_r") == 0.25);
    CHECK(t.details.at("lhs_strictly_decreasing") == 1.0);
    CHECK(t.details.at("lhs[2]") == Approx(2.0 * std::exp(-1.0)).margin(1e-4));

    const OracleReport g = violation_search(Family::cv_ghz, {0.0, 0.4, 0.8},
                                            EprCoefficients::tripartite({1, -1, 0}, {1, 1, 1}), GupConfig(0.0));
    require_pass(g);
    CHECK(g.details.at("lhs[0]") == Approx(2.5).margin(1e-6));
    CHECK(g.details.at("lhs_strictly_decreasing") == 1.0);
    CHECK(g.details.at("threshold_r") > 0.0);
    CHECK(g.details.at("threshold_r") <= 0.8);

    CHECK_THROWS_AS(violation_search(Family::cv_ghz, {0.1}, EprCoefficients::bipartite(1.0), GupConfig(0.0)),
                    InvalidArgument);
}

TEST_CASE("GUP bound growth on TMSV", "[oracle]")
{
    const OracleReport r = gup_bound_growth(0.5, {0.0, 1e-4, 1e-3, 1e-2}, 30);
    require_pass(r);
    CHECK(r.details.at("delta_gup[3]") == Approx(1e-2 * std::cosh(1.0)).epsilon(1e-6));
}

TEST_CASE("Rigolin universal relations", "[oracle]")
{
    SuiteOptions opt;
    opt.seed = 3;
    const OracleReport r = rigolin_universal(30, 6, opt);
    require_pass(r);
    CHECK(r.details.at("vacuum_pairwise_lhs") == Approx(1.0).margin(1e-8));
    CHECK(r.details.at("vacuum_collective_lhs") == Approx(1.0).margin(1e-8));
    CHECK(r.details.at("vacuum3_collective_lhs") == Approx(2.25).margin(1e-8));
}

TEST_CASE("symmetric case with GUP momenta", "[oracle]")
{
    SuiteOptions opt;
    opt.seed = 9;
    const OracleReport r = symmetric_case(12, 1e-3, opt, 24);
    require_pass(r);
    CHECK(r.n_samples == 12);
}

TEST_CASE("first-order consistency of the kempf representation", "[oracle]")
{
    const OracleReport r = first_order_consistency(12, 5, {1e-4, 3e-4, 1e-3});
    require_pass(r);
    CHECK(r.details.at("vacuum_slope") == Approx(2.0).margin(0.2));
    CHECK(r.details.at("c_fit_max") <= 10.0);
    CHECK_THROWS_AS(first_order_consistency(3, 5, {1e-4}, Convention::paper), InvalidArgument);
    CHECK_THROWS_AS(first_order_consistency(3, 5, {0.05}), InvalidArgument);
}

TEST_CASE("paper convention gap is first order", "[oracle]")
{
    const OracleReport r = paper_convention_gap();
    require_pass(r);
    // residual / beta -> 2 <p^2> = 1 on the vacuum.
    CHECK(r.details.at("residual_over_beta[0]") == Approx(1.0).epsilon(1e-3));
    CHECK(r.details.at("slope") == Approx(1.0).margin(0.05));
}

TEST_CASE("Hamiltonian diagonal against the closed form", "[oracle]")
{
    const OracleReport r = hamiltonian_check();
    require_pass(r);
    CHECK(r.n_samples == 6);
    CHECK(r.details.at("shift[0]") == Approx(7.5e-4).margin(1e-6));
    CHECK(r.details.at("energy[0]") == Approx(0.5 + 7.5e-4).margin(1e-6));
}
