#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

#include "core/numeric.hpp"

namespace lbex {

enum class RegressorKind : uint8_t { Output, Input };

/// One lagged variable inside a term. Lag counts steps before the current
/// time n, with the next value y[n+1] being produced: y[0] reads y_n,
/// y[2] reads y_{n-2}, u[1] reads u_{n-1}.
struct Regressor {
    RegressorKind kind = RegressorKind::Output;
    int lag = 0;

    auto operator<=>(const Regressor&) const = default;
};

std::string regressor_name(const Regressor& r);  // "y0", "u1", ...

/// coefficient * product of regressors; an empty regressor list is an
/// explicit constant term.
struct Term {
    Decimal coefficient;
    std::vector<Regressor> regressors;

    int degree() const { return static_cast<int>(regressors.size()); }
    bool operator==(const Term&) const = default;
};

/// Cosine step: either a plain decimal (radians) or pi/<divisor>.
struct AngleStep {
    Decimal literal;     // used when pi_divisor == 0
    int pi_divisor = 0;  // > 0 selects pi/pi_divisor

    double value() const;
    std::string text() const;
    bool operator==(const AngleStep&) const = default;
};

struct InputSignal {
    enum class Kind : uint8_t { None, Cosine, Samples };

    Kind kind = Kind::None;
    Decimal amplitude;            // Cosine
    AngleStep step;               // Cosine
    std::vector<double> samples;  // Samples

    bool operator==(const InputSignal&) const = default;

    static InputSignal none();
    static InputSignal cosine(Decimal amplitude, AngleStep step);
    static InputSignal from_samples(std::vector<double> values);
};

/// u_n for the given signal. Cosine computes A*cos(n*Ts) in binary64, in
/// exactly that operation order. Throws Error(Range) for a None signal, a
/// negative index, or an out-of-range sample index.
double input_value(const InputSignal& signal, long n);

struct PolynomialModel {
    std::string name;
    std::vector<Term> terms;  // file order; order is semantically significant
    int max_output_lag = -1;  // -1 when no output regressors
    int max_input_lag = -1;   // -1 when no input regressors
    int degree = 0;           // max term degree
    InputSignal input;        // signal declared in the model file (may be None)

    /// Number of seed values a simulation needs: one per output lag 0..max
    /// (3 for the Duffing-Ueda model, 4 for Chua), while max_output_lag is
    /// the largest y[...] index in the file.
    int seed_length() const { return max_output_lag + 1; }
    bool has_input_terms() const { return max_input_lag >= 0; }

    bool operator==(const PolynomialModel&) const = default;
};

/// Recompute (max_output_lag, max_input_lag, degree) from the term list.
void recompute_maxima(PolynomialModel& model);

/// Parse the line-oriented model grammar. Errors carry line/column.
/// Term order and coefficient strings are preserved exactly as written.
PolynomialModel parse_model(const std::string& text);
PolynomialModel parse_model_file(const std::string& path);

/// Inverse of parse_model up to comments/whitespace: parsing the result
/// yields a structurally identical model.
std::string serialize_model(const PolynomialModel& model);

/// Empty iff all invariants hold; otherwise one diagnostic per violation.
/// Never throws: inconsistencies are the return value.
std::vector<std::string> validate(const PolynomialModel& model);

}  // namespace lbex
