#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>
#include <set>

#include "core/canonical.hpp"
#include "core/error.hpp"
#include "core/plan.hpp"
#include "test_util.hpp"

using namespace lbex;

namespace {

std::shared_ptr<const PolynomialModel> load(const std::string& rel) {
    return std::make_shared<const PolynomialModel>(parse_model_file(repo_path(rel)));
}

// Random binary multiplication tree over {c} + the term's regressors.
FactorTree random_tree(const Term& term, std::mt19937_64& rng) {
    FactorTree t;
    std::vector<int> roots;
    FactorTree::Node c;
    c.kind = FactorTree::NodeKind::Coefficient;
    t.nodes.push_back(c);
    roots.push_back(0);
    for (const Regressor& r : term.regressors) {
        FactorTree::Node leaf;
        leaf.kind = FactorTree::NodeKind::Regressor;
        leaf.reg = r;
        t.nodes.push_back(leaf);
        roots.push_back(static_cast<int>(t.nodes.size()) - 1);
    }
    while (roots.size() > 1) {
        std::uniform_int_distribution<size_t> pick(0, roots.size() - 1);
        size_t i = pick(rng);
        std::swap(roots[i], roots.back());
        int a = roots.back();
        roots.pop_back();
        std::uniform_int_distribution<size_t> pick2(0, roots.size() - 1);
        size_t j = pick2(rng);
        FactorTree::Node mul;
        mul.kind = FactorTree::NodeKind::Mul;
        mul.left = a;
        mul.right = roots[j];
        t.nodes.push_back(mul);
        roots[j] = static_cast<int>(t.nodes.size()) - 1;
    }
    t.root = roots[0];
    return t;
}

EvaluationPlan random_transformed(const EvaluationPlan& base, std::mt19937_64& rng) {
    EvaluationPlan plan = base;
    std::uniform_int_distribution<int> term_pick(0, static_cast<int>(base.trees.size()) - 1);
    const int rewrites = 1 + static_cast<int>(rng() % 3);
    for (int k = 0; k < rewrites; ++k) {
        const int ti = term_pick(rng);
        plan = rewrite_grouping(plan, ti,
                                random_tree(base.model->terms[static_cast<size_t>(ti)], rng));
    }
    std::vector<int> perm(base.trees.size());
    for (size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
    std::shuffle(perm.begin(), perm.end(), rng);
    return permute_terms(plan, perm);
}

std::map<Regressor, mpq_class> random_point(const PolynomialModel& model, std::mt19937_64& rng) {
    std::set<Regressor> regs;
    for (const Term& t : model.terms) {
        for (const Regressor& r : t.regressors) regs.insert(r);
    }
    std::map<Regressor, mpq_class> point;
    std::uniform_int_distribution<long> num(-1000, 1000);
    std::uniform_int_distribution<long> den(1, 97);
    for (const Regressor& r : regs) {
        mpq_class q(num(rng), den(rng));
        q.canonicalize();
        point[r] = q;
    }
    return point;
}

}  // namespace

TEST_CASE("the bundled F/G pairs canonicalize to identical polynomials") {
    auto duffing = load("models/duffing_ueda.model");
    EvaluationPlan df = canonical_plan(duffing, "F");
    EvaluationPlan dg = rewrite_grouping(df, 5, "(c*(y0*y0))*y0");
    CHECK(equivalent(df, dg));
    CHECK(canonicalize(df) == canonicalize(dg));

    auto chua = load("models/chua.model");
    EvaluationPlan cg = canonical_plan(chua, "G");
    EvaluationPlan cf = rewrite_grouping(cg, 5, "(c*(y0*y0))*y1");
    CHECK(equivalent(cf, cg));
}

TEST_CASE("plan expansion matches the model's own canonical form") {
    for (const char* file : {"models/duffing_ueda.model", "models/chua.model",
                             "models/logistic.model"}) {
        auto model = load(file);
        CHECK(canonicalize(canonical_plan(model)) == canonicalize(*model));
    }
}

TEST_CASE("plans from different models cannot be compared") {
    auto duffing = load("models/duffing_ueda.model");
    auto chua = load("models/chua.model");
    try {
        equivalent(canonical_plan(duffing), canonical_plan(chua));
        FAIL("expected a mismatch error");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::Mismatch);
    }
}

TEST_CASE("a 1e-12 coefficient perturbation breaks equivalence") {
    auto duffing = load("models/duffing_ueda.model");
    auto perturbed_model = std::make_shared<PolynomialModel>(*duffing);
    perturbed_model->terms[5].coefficient = Decimal::parse("-0.004819600000001");
    EvaluationPlan a = canonical_plan(duffing);
    EvaluationPlan b = canonical_plan(std::shared_ptr<const PolynomialModel>(perturbed_model));
    CHECK(!equivalent(a, b));
    CHECK(equivalent(b, a) == equivalent(a, b));  // symmetric verdict
}

TEST_CASE("equivalence is reflexive and closed under the rewrite families") {
    auto chua = load("models/chua.model");
    EvaluationPlan base = canonical_plan(chua);
    CHECK(equivalent(base, base));

    std::mt19937_64 rng(20260811);
    for (int i = 0; i < 100; ++i) {
        EvaluationPlan p = random_transformed(base, rng);
        EvaluationPlan q = random_transformed(base, rng);
        CHECK(equivalent(base, p));
        CHECK(equivalent(p, q));  // transitive closure over the family
    }
}

TEST_CASE("equivalent plans evaluate exactly equal on random rational inputs") {
    std::mt19937_64 rng(42);
    for (const char* file : {"models/duffing_ueda.model", "models/chua.model"}) {
        auto model = load(file);
        EvaluationPlan base = canonical_plan(model);
        EvaluationPlan other = random_transformed(base, rng);
        for (int i = 0; i < 100; ++i) {
            auto point = random_point(*model, rng);
            CHECK(evaluate_exact(base, point) == evaluate_exact(other, point));
        }
    }
}

TEST_CASE("exact evaluation distinguishes non-equivalent plans") {
    auto duffing = load("models/duffing_ueda.model");
    auto perturbed_model = std::make_shared<PolynomialModel>(*duffing);
    perturbed_model->terms[0].coefficient = Decimal::parse("2.15790000001");
    EvaluationPlan a = canonical_plan(duffing);
    EvaluationPlan b = canonical_plan(std::shared_ptr<const PolynomialModel>(perturbed_model));
    std::mt19937_64 rng(7);
    auto point = random_point(*duffing, rng);
    CHECK(evaluate_exact(a, point) != evaluate_exact(b, point));
}

TEST_CASE("the two logistic model files are equivalent models") {
    auto a = load("models/logistic.model");
    auto b = load("models/logistic_alt.model");
    CHECK(equivalent_models(*a, *b));
    CHECK(canonicalize(*a).to_string() == canonicalize(*b).to_string());
}

TEST_CASE("like monomials collapse with exact rational sums") {
    PolynomialModel split = parse_model("name split\n0.5 * y[0]\n0.5 * y[0]\n");
    PolynomialModel unit = parse_model("name unit\n1.0 * y[0]\n");
    CHECK(equivalent_models(split, unit));
    CHECK(canonicalize(split).coefficients.size() == 1);

    PolynomialModel cancel = parse_model("name cancel\n0.5 * y[0]\n-0.5 * y[0]\n");
    CHECK(canonicalize(cancel).coefficients.empty());
}
