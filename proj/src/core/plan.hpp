#pragma once

#include <memory>
#include <string>
#include <vector>

#include "core/model.hpp"

namespace lbex {

/// Binary multiplication tree over one term's factors. Leaves are either the
/// term's coefficient ("c") or a regressor by name ("y0", "u1"); two leaves
/// naming the same regressor are interchangeable. Nodes are stored in a flat
/// vector; identity is structural (shape + leaf names), never index-based.
struct FactorTree {
    enum class NodeKind : uint8_t { Coefficient, Regressor, Mul };

    struct Node {
        NodeKind kind = NodeKind::Coefficient;
        Regressor reg;            // NodeKind::Regressor
        int left = -1, right = -1;  // NodeKind::Mul
    };

    std::vector<Node> nodes;
    int root = -1;

    /// ((c * r0) * r1) * ... left-to-right over the term's regressor order.
    static FactorTree canonical_for(const Term& term);

    /// Parse "(c*(y0*y0))*y1". Unparenthesized chains associate left.
    static FactorTree parse(const std::string& text);

    std::string to_string() const;

    /// {number of coefficient leaves, multiset of regressor leaves}.
    void collect_leaves(int& coefficient_leaves, std::vector<Regressor>& regressors) const;

    bool structurally_equal(const FactorTree& other) const;
};

/// A totally ordered floating-point evaluation schedule for one model:
/// per-term multiplication trees plus a strict left-to-right accumulation
/// order. Two plans of one model are the artifact's "natural interval
/// extensions": algebraically identical, rounding-distinct.
struct EvaluationPlan {
    std::shared_ptr<const PolynomialModel> model;
    std::string label;            // e.g. "F"; not part of structural identity
    std::vector<int> term_order;  // accumulation order, a permutation of term indices
    std::vector<FactorTree> trees;  // indexed by term index (not by order position)
};

EvaluationPlan canonical_plan(std::shared_ptr<const PolynomialModel> model,
                              std::string label = "canonical");

/// New plan differing only in term_index's tree. The grouping's leaves must
/// be exactly {c} plus the term's regressor multiset; exact-arithmetic
/// equivalence with the input plan is re-verified.
EvaluationPlan rewrite_grouping(const EvaluationPlan& plan, int term_index,
                                const FactorTree& grouping);
EvaluationPlan rewrite_grouping(const EvaluationPlan& plan, int term_index,
                                const std::string& tree_text);

/// New plan with reordered accumulation; permutation must be a bijection on
/// term indices. Equivalence is preserved by construction and re-verified.
EvaluationPlan permute_terms(const EvaluationPlan& plan, const std::vector<int>& permutation);

/// Shape + leaf-name identity: true iff the two plans issue the same
/// floating-point operation sequence. Labels are ignored.
bool structurally_equal(const EvaluationPlan& a, const EvaluationPlan& b);

/// One-line structure signature, stable across runs; used in manifests and
/// for duplicate detection. Example: "order=0,1,2;t0=(c*y0);t1=..."
std::string plan_signature(const EvaluationPlan& plan);

/// Experiment-file plan grammar:
///   canonical
///   regroup(term=<idx>, tree="<tree>") [; transform]...
///   permute(reverse) | permute(order=<i0>,<i1>,...)
/// Transforms chain left to right starting from the canonical plan.
/// Term indices are 0-based in file order.
EvaluationPlan parse_plan_spec(std::shared_ptr<const PolynomialModel> model,
                               const std::string& spec, std::string label);

}  // namespace lbex
