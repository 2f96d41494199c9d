#pragma once

#include <gmpxx.h>

#include <map>
#include <string>

#include "core/plan.hpp"

namespace lbex {

/// Product of regressors as a sorted exponent map.
using Monomial = std::map<Regressor, int>;

/// Sum-of-monomials form with exact rational coefficients; zero coefficients
/// are dropped. Equality of canonical polynomials is the project's notion of
/// algebraic equivalence.
struct CanonicalPolynomial {
    std::map<Monomial, mpq_class> coefficients;

    bool operator==(const CanonicalPolynomial& other) const {
        return coefficients == other.coefficients;
    }
    std::string to_string() const;
};

/// Expand a plan by walking each term's multiplication tree with exact
/// rational coefficient arithmetic and collecting like monomials.
CanonicalPolynomial canonicalize(const EvaluationPlan& plan);

/// Expand a model directly from its term list (an independent route that
/// never looks at factor trees).
CanonicalPolynomial canonicalize(const PolynomialModel& model);

/// True iff both plans expand to the same canonical polynomial.
/// Throws Error(Mismatch) when the plans reference different models.
bool equivalent(const EvaluationPlan& a, const EvaluationPlan& b);

/// Model-level equivalence, e.g. for the same map written as two term lists.
bool equivalent_models(const PolynomialModel& a, const PolynomialModel& b);

/// Exact rational value of one plan at a rational point, executed in the
/// plan's own operation order (tree walk + left-to-right accumulation).
/// Point values are looked up by regressor; a missing regressor is an error.
mpq_class evaluate_exact(const EvaluationPlan& plan, const std::map<Regressor, mpq_class>& point);

}  // namespace lbex
