#include "core/simulate.hpp"

#include <cmath>

#include "core/error.hpp"

namespace lbex {

namespace {

PlanTape::Operand emit_tree(const FactorTree& tree, int index, int term_index, PlanTape& tape) {
    const FactorTree::Node& n = tree.nodes[static_cast<size_t>(index)];
    switch (n.kind) {
        case FactorTree::NodeKind::Coefficient:
            return {PlanTape::Operand::Kind::Coefficient, term_index};
        case FactorTree::NodeKind::Regressor:
            if (n.reg.kind == RegressorKind::Output) {
                return {PlanTape::Operand::Kind::OutputLag, n.reg.lag};
            }
            return {PlanTape::Operand::Kind::InputLag, n.reg.lag};
        case FactorTree::NodeKind::Mul: {
            PlanTape::Operand a = emit_tree(tree, n.left, term_index, tape);
            PlanTape::Operand b = emit_tree(tree, n.right, term_index, tape);
            tape.ops.push_back({true, a, b});
            return {PlanTape::Operand::Kind::Temp, static_cast<int>(tape.ops.size()) - 1};
        }
    }
    fail(ErrorKind::Internal, "unreachable tree node kind");
}

void check_compatible(const PolynomialModel& model, const EvaluationPlan& plan) {
    if (!plan.model) fail(ErrorKind::Validation, "plan has no model");
    if (plan.model->name != model.name || plan.model->terms.size() != model.terms.size()) {
        fail(ErrorKind::Mismatch, "plan was built for model '" + plan.model->name +
                                      "', simulate was given '" + model.name + "'");
    }
}

}  // namespace

PlanTape compile_plan(const EvaluationPlan& plan) {
    PlanTape tape;
    const PolynomialModel& model = *plan.model;
    tape.coefficients.reserve(model.terms.size());
    for (const Term& t : model.terms) tape.coefficients.push_back(t.coefficient);
    tape.uses_input = model.has_input_terms();

    PlanTape::Operand acc;
    bool first = true;
    for (int term_index : plan.term_order) {
        const FactorTree& tree = plan.trees[static_cast<size_t>(term_index)];
        PlanTape::Operand value = emit_tree(tree, tree.root, term_index, tape);
        if (first) {
            acc = value;
            first = false;
        } else {
            tape.ops.push_back({false, acc, value});
            acc = {PlanTape::Operand::Kind::Temp, static_cast<int>(tape.ops.size()) - 1};
        }
    }
    tape.result = acc;
    return tape;
}

PseudoOrbit simulate(const PolynomialModel& model, const EvaluationPlan& plan,
                     const InitialConditions& init, long iterations) {
    check_compatible(model, plan);
    if (iterations < 1) fail(ErrorKind::Range, "iterations must be >= 1");
    const int seed_len = model.seed_length();
    if (static_cast<int>(init.y_seed.size()) != seed_len) {
        fail(ErrorKind::Validation, "model '" + model.name + "' needs " + std::to_string(seed_len) +
                                        " seed values, got " + std::to_string(init.y_seed.size()));
    }
    for (double s : init.y_seed) {
        if (!std::isfinite(s)) fail(ErrorKind::Validation, "seed values must be finite");
    }
    if (model.has_input_terms() && init.input.kind == InputSignal::Kind::None) {
        fail(ErrorKind::Validation,
             "model '" + model.name + "' has input terms but no input signal was given");
    }
    if (model.has_input_terms() && model.max_input_lag > seed_len - 1) {
        fail(ErrorKind::Validation,
             "input lag " + std::to_string(model.max_input_lag) + " reaches before n=0 (seed window " +
                 std::to_string(seed_len) + ")");
    }

    const PlanTape tape = compile_plan(plan);
    const long total = seed_len + iterations;

    // Input values are indexed by discrete time n, same axis as the orbit.
    std::vector<double> u;
    if (tape.uses_input) {
        u.resize(static_cast<size_t>(total));
        for (long n = 0; n + 1 < total; ++n) {
            u[static_cast<size_t>(n)] = input_value(init.input, n);
        }
    }

    PseudoOrbit orbit;
    orbit.plan_id = plan.label;
    orbit.values = init.y_seed;
    orbit.values.reserve(static_cast<size_t>(total));

    std::vector<double> temp(tape.ops.size());
    const std::vector<Decimal>& coef = tape.coefficients;

    for (long p = seed_len; p < total; ++p) {
        // Lag k reads the value k steps before time p-1, i.e. index p-1-k.
        auto load = [&](PlanTape::Operand r) -> double {
            switch (r.kind) {
                case PlanTape::Operand::Kind::Coefficient: return coef[static_cast<size_t>(r.index)].value;
                case PlanTape::Operand::Kind::OutputLag: return orbit.values[static_cast<size_t>(p - 1 - r.index)];
                case PlanTape::Operand::Kind::InputLag: return u[static_cast<size_t>(p - 1 - r.index)];
                case PlanTape::Operand::Kind::Temp: return temp[static_cast<size_t>(r.index)];
            }
            return 0.0;
        };
        for (size_t i = 0; i < tape.ops.size(); ++i) {
            const PlanTape::Op& op = tape.ops[i];
            const double a = load(op.a);
            const double b = load(op.b);
            temp[i] = op.is_mul ? a * b : a + b;
        }
        const double next = load(tape.result);
        if (!std::isfinite(next)) {
            orbit.overflow = OverflowDiagnostic{
                p, "orbit left the finite range at iteration " + std::to_string(p) +
                       " (plan '" + plan.label + "')"};
            break;
        }
        orbit.values.push_back(next);
    }
    return orbit;
}

}  // namespace lbex
