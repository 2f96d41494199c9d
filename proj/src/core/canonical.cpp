#include "core/canonical.hpp"

#include <sstream>

#include "core/error.hpp"

namespace lbex {

namespace {

struct ExpandedFactor {
    mpq_class coefficient = 1;
    Monomial monomial;
};

ExpandedFactor expand_node(const FactorTree& tree, int index, const mpq_class& term_coefficient) {
    const FactorTree::Node& n = tree.nodes[static_cast<size_t>(index)];
    switch (n.kind) {
        case FactorTree::NodeKind::Coefficient: {
            ExpandedFactor f;
            f.coefficient = term_coefficient;
            return f;
        }
        case FactorTree::NodeKind::Regressor: {
            ExpandedFactor f;
            f.monomial[n.reg] = 1;
            return f;
        }
        case FactorTree::NodeKind::Mul: {
            ExpandedFactor l = expand_node(tree, n.left, term_coefficient);
            ExpandedFactor r = expand_node(tree, n.right, term_coefficient);
            ExpandedFactor f;
            f.coefficient = l.coefficient * r.coefficient;
            f.monomial = std::move(l.monomial);
            for (const auto& [reg, exp] : r.monomial) f.monomial[reg] += exp;
            return f;
        }
    }
    fail(ErrorKind::Internal, "unreachable tree node kind");
}

void add_monomial(CanonicalPolynomial& poly, Monomial monomial, const mpq_class& coefficient) {
    auto [it, inserted] = poly.coefficients.emplace(std::move(monomial), coefficient);
    if (!inserted) {
        it->second += coefficient;
        if (it->second == 0) poly.coefficients.erase(it);
    } else if (it->second == 0) {
        poly.coefficients.erase(it);
    }
}

}  // namespace

std::string CanonicalPolynomial::to_string() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& [monomial, coefficient] : coefficients) {
        if (!first) os << " + ";
        first = false;
        os << coefficient.get_str();
        for (const auto& [reg, exp] : monomial) {
            os << "*" << regressor_name(reg);
            if (exp != 1) os << "^" << exp;
        }
    }
    if (first) os << "0";
    return os.str();
}

CanonicalPolynomial canonicalize(const EvaluationPlan& plan) {
    CanonicalPolynomial poly;
    for (int term_index : plan.term_order) {
        const Term& term = plan.model->terms[static_cast<size_t>(term_index)];
        const FactorTree& tree = plan.trees[static_cast<size_t>(term_index)];
        ExpandedFactor f = expand_node(tree, tree.root, term.coefficient.exact());
        add_monomial(poly, std::move(f.monomial), f.coefficient);
    }
    return poly;
}

CanonicalPolynomial canonicalize(const PolynomialModel& model) {
    CanonicalPolynomial poly;
    for (const Term& term : model.terms) {
        Monomial monomial;
        for (const Regressor& r : term.regressors) monomial[r] += 1;
        add_monomial(poly, std::move(monomial), term.coefficient.exact());
    }
    return poly;
}

bool equivalent(const EvaluationPlan& a, const EvaluationPlan& b) {
    if (!a.model || !b.model) fail(ErrorKind::Validation, "equivalent: plan without a model");
    if (a.model->name != b.model->name) {
        fail(ErrorKind::Mismatch, "plans reference different models: '" + a.model->name +
                                      "' vs '" + b.model->name + "'");
    }
    return canonicalize(a) == canonicalize(b);
}

bool equivalent_models(const PolynomialModel& a, const PolynomialModel& b) {
    return canonicalize(a) == canonicalize(b);
}

namespace {

mpq_class eval_node(const FactorTree& tree, int index, const mpq_class& coefficient,
                    const std::map<Regressor, mpq_class>& point) {
    const FactorTree::Node& n = tree.nodes[static_cast<size_t>(index)];
    switch (n.kind) {
        case FactorTree::NodeKind::Coefficient:
            return coefficient;
        case FactorTree::NodeKind::Regressor: {
            auto it = point.find(n.reg);
            if (it == point.end()) {
                fail(ErrorKind::Range, "no value for regressor " + regressor_name(n.reg));
            }
            return it->second;
        }
        case FactorTree::NodeKind::Mul:
            return eval_node(tree, n.left, coefficient, point) *
                   eval_node(tree, n.right, coefficient, point);
    }
    fail(ErrorKind::Internal, "unreachable tree node kind");
}

}  // namespace

mpq_class evaluate_exact(const EvaluationPlan& plan, const std::map<Regressor, mpq_class>& point) {
    mpq_class acc = 0;
    bool first = true;
    for (int term_index : plan.term_order) {
        const Term& term = plan.model->terms[static_cast<size_t>(term_index)];
        const FactorTree& tree = plan.trees[static_cast<size_t>(term_index)];
        mpq_class value = eval_node(tree, tree.root, term.coefficient.exact(), point);
        if (first) {
            acc = std::move(value);
            first = false;
        } else {
            acc += value;
        }
    }
    return acc;
}

}  // namespace lbex
