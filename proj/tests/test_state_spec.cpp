#include <catch_amalgamated.hpp>

#include <cmath>

#include "gupw/state_spec.hpp"
#include "gupw/witnesses.hpp"

using namespace gupw;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

const std::string samples = GUPW_SAMPLES_DIR;
const std::string data = GUPW_TEST_DATA;

StateSpec parse(const char* text) { return parse_state_spec_json(nlohmann::json::parse(text)); }

std::string spec_error(const char* text)
{
    try {
        build_state(parse(text));
    } catch (const SpecError& e) {
        return e.path() + " | " + e.what();
    }
    return "no error";
}

}  // namespace

TEST_CASE("sample files", "[state_spec]")
{
    SECTION("tmsv at the default cutoff")
    {
        const QuantumState st = parse_state_spec(samples + "/tmsv_r05.json");
        CHECK(st.space().cutoffs() == std::vector<std::size_t>{40, 40});
        CHECK(st.tail_mass() <= 1e-6);
        CHECK(duan_witness(st, EprCoefficients::bipartite(1.0), GupConfig(0.0)).lhs ==
              Approx(2.0 * std::exp(-1.0)).margin(1e-4));
    }
    SECTION("vacuum pair is |0,0>")
    {
        const QuantumState st = parse_state_spec(samples + "/vacuum2.json");
        REQUIRE(st.is_pure());
        CHECK(st.vector()(0) == cplx(1.0));
        CHECK(st.vector().cwiseAbs().sum() == 1.0);
    }
    SECTION("mixture keeps its ensemble")
    {
        const QuantumState st = parse_state_spec(samples + "/coherent_mixture.json");
        REQUIRE(st.ensemble());
        CHECK(st.ensemble()->weights.size() == 4);
        CHECK(st.space().cutoffs() == std::vector<std::size_t>{24, 24});
        CHECK(duan_witness(st, EprCoefficients::bipartite(1.0), GupConfig(0.0)).verdict == Verdict::not_detected);
    }
    SECTION("per-mode cutoffs")
    {
        const QuantumState st = parse_state_spec(samples + "/squeezed_thermal.json");
        CHECK(st.space().cutoffs() == std::vector<std::size_t>{40, 30});
        CHECK_FALSE(st.is_pure());
    }
    SECTION("cv_ghz")
    {
        const StateSpec s = load_state_spec(samples + "/cv_ghz_r08.json");
        CHECK(s.type == StateSpec::Type::cv_ghz);
        CHECK(s.n_modes() == 3);
        CHECK(s.r == 0.8);
        CHECK(s.cutoff == std::optional<std::size_t>(22));
    }
}

TEST_CASE("cutoff precedence", "[state_spec]")
{
    const StateSpec s = parse(R"({"cutoff": 12, "product": [{"kind": "vacuum", "cutoff": 6}, {"kind": "vacuum"}]})");
    CHECK(build_state(s).space().cutoffs() == std::vector<std::size_t>{6, 12});
    BuildOptions opt;
    opt.cutoff = 9;
    CHECK(build_state(s, opt).space().cutoffs() == std::vector<std::size_t>{9, 9});
    CHECK(build_state(parse(R"({"product": [{"kind": "vacuum"}]})")).space().cutoff(0) == kDefaultCutoff);
    CHECK(build_state(parse(R"({"tmsv": {"r": 0.2, "cutoff": 20}, "cutoff": 30})")).space().cutoff(0) == 20);

    BuildOptions r;
    r.r = 0.0;
    const QuantumState vac = build_state(parse(R"({"tmsv": {"r": 0.7}})"), r);
    CHECK(std::abs(vac.vector()(0)) == Approx(1.0));
}

TEST_CASE("mode kinds", "[state_spec]")
{
    const StateSpec s = parse(R"({"product": [
        {"kind": "fock", "n": 2},
        {"kind": "coherent", "alpha": [0.3, -0.4]},
        {"kind": "squeezed", "r": 0.2},
        {"kind": "thermal", "nbar": 0.1}]})");
    REQUIRE(s.terms.size() == 1);
    const auto& m = s.terms[0].modes;
    CHECK(m[0].spec == SingleModeSpec::fock_state(2));
    CHECK(m[1].spec == SingleModeSpec::coherent({0.3, -0.4}));
    CHECK(m[2].spec == SingleModeSpec::squeezed(0.2, 0.0));
    CHECK(m[3].spec == SingleModeSpec::thermal(0.1));
    CHECK(parse(R"({"product": [{"kind": "coherent", "alpha": 1.5}]})").terms[0].modes[0].spec ==
          SingleModeSpec::coherent({1.5, 0.0}));
}

TEST_CASE("schema errors name the field", "[state_spec]")
{
    CHECK_THAT(spec_error(R"({"product": [{"kind": "vacuum", "colour": 1}]})"), ContainsSubstring("/product/0/colour"));
    CHECK_THAT(spec_error(R"({"product": [{"kind": "laser"}]})"), ContainsSubstring("/product/0/kind"));
    CHECK_THAT(spec_error(R"({"product": [{"kind": "fock"}]})"), ContainsSubstring("/product/0/n"));
    CHECK_THAT(spec_error(R"({"product": [{"kind": "thermal", "nbar": -1}]})"), ContainsSubstring("/product/0/nbar"));
    CHECK_THAT(spec_error(R"({"product": [{"kind": "coherent", "alpha": "big"}]})"), ContainsSubstring("alpha"));
    CHECK_THAT(spec_error(R"({"product": []})"), ContainsSubstring("/product"));
    CHECK_THAT(spec_error(R"({"tmsv": {"r": 0.5, "phase": 1}})"), ContainsSubstring("/tmsv/phase"));
    CHECK_THAT(spec_error(R"({"tmsv": {"r": 0.5}, "product": []})"), ContainsSubstring("exactly one"));
    CHECK_THAT(spec_error(R"({"cutoff": 1, "tmsv": {"r": 0.5}})"), ContainsSubstring("/cutoff"));
    CHECK_THAT(spec_error(R"({"mixture": [{"weight": 1.0, "product": [{"kind": "vacuum"}]},
                                          {"weight": 0.0, "product": [{"kind": "vacuum"}, {"kind": "vacuum"}]}]})"),
               ContainsSubstring("mode count"));
    CHECK_THAT(spec_error("[1, 2]"), ContainsSubstring("expected an object"));
}

TEST_CASE("mixture weights must sum to one", "[state_spec]")
{
    try {
        load_state_spec(data + "/bad_weights.json");
        FAIL("expected SpecError");
    } catch (const SpecError& e) {
        CHECK(e.path() == "/mixture");
        CHECK_THAT(e.what(), ContainsSubstring("1.1"));
    }
}

TEST_CASE("file-level errors", "[state_spec]")
{
    CHECK_THROWS_AS(load_state_spec(data + "/missing.json"), InvalidArgument);
    CHECK_THROWS_AS(load_state_spec(data + "/broken.json"), InvalidArgument);
    CHECK_THROWS_AS(load_state_spec(data + "/unknown_field.json"), SpecError);
    try {
        parse_state_spec(data + "/heavy_tail.json");
        FAIL("expected TruncationError");
    } catch (const TruncationError& e) {
        CHECK_THAT(e.what(), ContainsSubstring("larger cutoff"));
    }
}
