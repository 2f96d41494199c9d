#pragma once

#include <optional>
#include <string>
#include <vector>

#include "core/plan.hpp"

namespace lbex {

struct OverflowDiagnostic {
    long iteration = 0;  // orbit index at which the value stopped being finite
    std::string message;
};

/// One computed trajectory: seed values followed by plan-evaluated values.
/// If the recursion left the finite range, the orbit is truncated just
/// before the first non-finite value and `overflow` records where.
struct PseudoOrbit {
    std::vector<double> values;
    std::string plan_id;
    std::optional<OverflowDiagnostic> overflow;

    size_t length() const { return values.size(); }
};

struct InitialConditions {
    std::vector<double> y_seed;  // length = model seed window
    InputSignal input;           // effective signal (may override the model's)
};

/// A plan flattened into a totally ordered sequence of binary operations.
/// Executing the tape once produces the next orbit value; operands refer to
/// coefficients, lagged orbit values, lagged input values, or earlier tape
/// results. The tape is the unit of floating-point determinism.
struct PlanTape {
    struct Operand {
        enum class Kind : uint8_t { Coefficient, OutputLag, InputLag, Temp };
        Kind kind = Kind::Temp;
        int index = 0;  // term index / lag / temp slot
    };
    struct Op {
        bool is_mul = true;
        Operand a, b;
    };

    std::vector<Op> ops;  // op i writes temp slot i
    Operand result;
    std::vector<Decimal> coefficients;  // by term index
    bool uses_input = false;
};

PlanTape compile_plan(const EvaluationPlan& plan);

/// Free-run `iterations` steps of (model, plan) from the seed. values[0..seed)
/// echo the seed; each later value executes the tape in strict order, every
/// operation in round-to-nearest-even binary64, FMA contraction disabled.
/// Pure: identical inputs give bit-identical orbits.
PseudoOrbit simulate(const PolynomialModel& model, const EvaluationPlan& plan,
                     const InitialConditions& init, long iterations);

}  // namespace lbex
