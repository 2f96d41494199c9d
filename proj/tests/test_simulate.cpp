#include <doctest.h>

#include <cstring>
#include <gmpxx.h>
#include <memory>

#include "core/canonical.hpp"
#include "core/error.hpp"
#include "core/simulate.hpp"
#include "test_util.hpp"

using namespace lbex;

namespace {

std::shared_ptr<const PolynomialModel> load(const std::string& rel) {
    return std::make_shared<const PolynomialModel>(parse_model_file(repo_path(rel)));
}

bool bit_identical(const std::vector<double>& a, const std::vector<double>& b) {
    return a.size() == b.size() &&
           (a.empty() || std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0);
}

}  // namespace

TEST_CASE("identity model holds its seed forever") {
    auto identity = load("models/identity.model");
    EvaluationPlan plan = canonical_plan(identity);
    PseudoOrbit orbit = simulate(*identity, plan, {{0.5}, InputSignal::none()}, 10);
    REQUIRE(orbit.values.size() == 11);
    for (double v : orbit.values) CHECK(v == 0.5);
    CHECK(!orbit.overflow);
}

TEST_CASE("chua first computed value is the left-to-right double sum of coefficients") {
    auto chua = load("models/chua.model");
    EvaluationPlan plan = canonical_plan(chua, "G");
    PseudoOrbit orbit = simulate(*chua, plan, {{1.0, 1.0, 1.0, 1.0}, InputSignal::none()}, 5);
    REQUIRE(orbit.values.size() == 9);

    // Independent oracle: with every regressor equal to 1, each term's tree
    // collapses to its coefficient exactly, so the first computed value is
    // the strict left-to-right binary64 sum of the 17 coefficients.
    double expected = chua->terms[0].coefficient.value;
    for (size_t i = 1; i < chua->terms.size(); ++i) {
        expected = expected + chua->terms[i].coefficient.value;
    }
    CHECK(orbit.values[4] == expected);

    // And that double sum sits within a short ulp chain of the exact
    // decimal sum (17 additions => at most 16 roundings).
    mpq_class exact = 0;
    for (const Term& t : chua->terms) exact += t.coefficient.exact();
    CHECK(exact == decimal_to_rational("1.0318"));
    CHECK(std::fabs(expected - mpq_get_d(exact.get_mpq_t())) <= 16 * std::ldexp(1.0, -52));
}

TEST_CASE("zero input and zero seed give the zero orbit") {
    auto duffing = load("models/duffing_ueda.model");
    EvaluationPlan plan = canonical_plan(duffing);
    InitialConditions init{{0.0, 0.0, 0.0},
                           InputSignal::cosine(Decimal::parse("0"), AngleStep{{}, 60})};
    PseudoOrbit orbit = simulate(*duffing, plan, init, 50);
    for (double v : orbit.values) CHECK(v == 0.0);
}

TEST_CASE("simulate is deterministic and prefix-stable") {
    auto duffing = load("models/duffing_ueda.model");
    EvaluationPlan plan = canonical_plan(duffing, "F");
    InitialConditions init{{0.1, 0.1, 0.1}, duffing->input};

    PseudoOrbit short_run = simulate(*duffing, plan, init, 50);
    PseudoOrbit long_run = simulate(*duffing, plan, init, 100);
    PseudoOrbit long_again = simulate(*duffing, plan, init, 100);

    CHECK(bit_identical(long_run.values, long_again.values));
    REQUIRE(short_run.values.size() == 53);
    CHECK(std::memcmp(short_run.values.data(), long_run.values.data(),
                      short_run.values.size() * sizeof(double)) == 0);
}

TEST_CASE("the F/G pair shares a bit-identical prefix and then splits") {
    auto duffing = load("models/duffing_ueda.model");
    EvaluationPlan f = canonical_plan(duffing, "F");
    EvaluationPlan g = rewrite_grouping(f, 5, "(c*(y0*y0))*y0");
    InitialConditions init{{0.1, 0.1, 0.1}, duffing->input};

    PseudoOrbit fo = simulate(*duffing, f, init, 5000);
    PseudoOrbit go = simulate(*duffing, g, init, 5000);
    REQUIRE(fo.values.size() == go.values.size());

    size_t first_diff = fo.values.size();
    for (size_t i = 0; i < fo.values.size(); ++i) {
        if (fo.values[i] != go.values[i]) {
            first_diff = i;
            break;
        }
    }
    REQUIRE(first_diff < fo.values.size());  // they do diverge
    CHECK(first_diff >= 1);
    CHECK(std::memcmp(fo.values.data(), go.values.data(), first_diff * sizeof(double)) == 0);
}

TEST_CASE("overflow truncates the orbit and reports the iteration") {
    PolynomialModel blowup = parse_model("name blowup\ninput none\n2.0 * y[0] * y[0]\n");
    auto model = std::make_shared<const PolynomialModel>(blowup);
    EvaluationPlan plan = canonical_plan(model);
    PseudoOrbit orbit = simulate(*model, plan, {{2.0}, InputSignal::none()}, 5000);

    REQUIRE(orbit.overflow.has_value());
    CHECK(orbit.overflow->iteration == static_cast<long>(orbit.values.size()));
    CHECK(orbit.values.size() < 5001);
    for (double v : orbit.values) CHECK(std::isfinite(v));
    CHECK(orbit.overflow->message.find("iteration") != std::string::npos);
}

TEST_CASE("simulate validates its inputs") {
    auto duffing = load("models/duffing_ueda.model");
    auto chua = load("models/chua.model");
    EvaluationPlan plan = canonical_plan(duffing);
    InitialConditions good{{0.1, 0.1, 0.1}, duffing->input};

    SUBCASE("seed length must match the model window") {
        CHECK_THROWS_AS(simulate(*duffing, plan, {{0.1}, duffing->input}, 5), Error);
    }
    SUBCASE("iterations must be positive") {
        CHECK_THROWS_AS(simulate(*duffing, plan, good, 0), Error);
    }
    SUBCASE("plan/model mismatch") {
        try {
            simulate(*chua, plan, {{1, 1, 1, 1}, InputSignal::none()}, 5);
            FAIL("expected mismatch");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Mismatch);
        }
    }
    SUBCASE("input terms need an input signal") {
        CHECK_THROWS_AS(simulate(*duffing, plan, {{0.1, 0.1, 0.1}, InputSignal::none()}, 5),
                        Error);
    }
    SUBCASE("non-finite seeds are rejected") {
        CHECK_THROWS_AS(
            simulate(*duffing, plan, {{0.1, std::nan(""), 0.1}, duffing->input}, 5), Error);
    }
    SUBCASE("input lag reaching before n=0 is rejected") {
        PolynomialModel m = parse_model("name t\ninput none\n0.5 * y[0] * u[2]\n");
        auto mp = std::make_shared<const PolynomialModel>(m);
        EvaluationPlan p = canonical_plan(mp);
        CHECK_THROWS_AS(simulate(*mp, p, {{0.1}, InputSignal::from_samples({1, 2, 3, 4})}, 2),
                        Error);
    }
    SUBCASE("sample signals must cover the run") {
        PolynomialModel m = parse_model("name s\ninput none\n0.5 * y[0]\n0.1 * u[0]\n");
        auto mp = std::make_shared<const PolynomialModel>(m);
        EvaluationPlan p = canonical_plan(mp);
        CHECK_THROWS_AS(simulate(*mp, p, {{0.1}, InputSignal::from_samples({1.0})}, 10), Error);
        PseudoOrbit ok = simulate(*mp, p, {{0.1}, InputSignal::from_samples({1, 1, 1, 1, 1})}, 4);
        CHECK(ok.values.size() == 5);
    }
}

TEST_CASE("the tape realizes the plan: regrouped plans change the bit stream") {
    // On a chaotic orbit, (c*y0)*y0 and c*(y0*y0) must eventually round apart.
    auto logistic = load("models/logistic.model");
    EvaluationPlan f = canonical_plan(logistic, "F");
    EvaluationPlan g = rewrite_grouping(f, 1, "c*(y0*y0)");
    InitialConditions init{{0.1}, InputSignal::none()};
    PseudoOrbit fo = simulate(*logistic, f, init, 200);
    PseudoOrbit go = simulate(*logistic, g, init, 200);
    bool differs = false;
    for (size_t i = 0; i < fo.values.size(); ++i) differs = differs || fo.values[i] != go.values[i];
    CHECK(differs);
}
