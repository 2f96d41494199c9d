#include "core/reference.hpp"

#include <algorithm>

#include "core/error.hpp"

namespace lbex {

namespace {

// u_n at `bits` precision: A * cos(n * Ts), every step correctly rounded.
BigFloat reference_input(const InputSignal& signal, long n, int bits) {
    if (n < 0) fail(ErrorKind::Range, "input index must be >= 0");
    BigFloat out(bits);
    switch (signal.kind) {
        case InputSignal::Kind::None:
            fail(ErrorKind::Range, "input signal 'none' queried");
        case InputSignal::Kind::Samples: {
            if (static_cast<size_t>(n) >= signal.samples.size()) {
                fail(ErrorKind::Range, "input sample index " + std::to_string(n) + " out of range");
            }
            out.set(signal.samples[static_cast<size_t>(n)]);
            return out;
        }
        case InputSignal::Kind::Cosine: {
            BigFloat step(bits);
            if (signal.step.pi_divisor > 0) {
                step.assign_pi();
                step.div_long(signal.step.pi_divisor);
            } else {
                step.set_decimal(signal.step.literal.text);
            }
            BigFloat arg(bits);
            arg.set(step);
            arg.mul_long(n);
            BigFloat amplitude(bits);
            amplitude.set_decimal(signal.amplitude.text);
            BigFloat cosine(bits);
            cosine.assign_cos(arg);
            out.assign_mul(amplitude, cosine);
            return out;
        }
    }
    fail(ErrorKind::Internal, "unreachable input kind");
}

}  // namespace

ReferenceOrbit simulate_reference(const PolynomialModel& model, const InitialConditions& init,
                                  long iterations, int bits) {
    if (bits < 128) fail(ErrorKind::Range, "reference precision must be >= 128 bits");
    if (iterations < 1) fail(ErrorKind::Range, "iterations must be >= 1");
    const int seed_len = model.seed_length();
    if (static_cast<int>(init.y_seed.size()) != seed_len) {
        fail(ErrorKind::Validation, "model '" + model.name + "' needs " + std::to_string(seed_len) +
                                        " seed values, got " + std::to_string(init.y_seed.size()));
    }
    if (model.has_input_terms() && init.input.kind == InputSignal::Kind::None) {
        fail(ErrorKind::Validation,
             "model '" + model.name + "' has input terms but no input signal was given");
    }
    if (model.has_input_terms() && model.max_input_lag > seed_len - 1) {
        fail(ErrorKind::Validation, "input lag " + std::to_string(model.max_input_lag) +
                                        " reaches before n=0 (seed window " +
                                        std::to_string(seed_len) + ")");
    }

    auto model_ptr = std::make_shared<PolynomialModel>(model);
    const PlanTape tape = compile_plan(canonical_plan(model_ptr));
    const long total = seed_len + iterations;

    std::vector<BigFloat> coefficients;
    coefficients.reserve(tape.coefficients.size());
    for (const Decimal& d : tape.coefficients) {
        BigFloat c(bits);
        c.set_decimal(d.text);
        coefficients.push_back(std::move(c));
    }

    std::vector<BigFloat> u;
    if (tape.uses_input) {
        u.reserve(static_cast<size_t>(total));
        for (long n = 0; n + 1 < total; ++n) u.push_back(reference_input(init.input, n, bits));
    }

    ReferenceOrbit orbit;
    orbit.bits = bits;
    orbit.plan_id = "reference@" + std::to_string(bits);
    orbit.values.reserve(static_cast<size_t>(total));
    for (double s : init.y_seed) {
        BigFloat v(bits);
        v.set(s);
        orbit.values.push_back(std::move(v));
    }

    std::vector<BigFloat> temp(tape.ops.size(), BigFloat(bits));
    BigFloat next(bits);
    for (long p = seed_len; p < total; ++p) {
        auto source = [&](PlanTape::Operand r) -> const BigFloat& {
            switch (r.kind) {
                case PlanTape::Operand::Kind::Coefficient:
                    return coefficients[static_cast<size_t>(r.index)];
                case PlanTape::Operand::Kind::OutputLag:
                    return orbit.values[static_cast<size_t>(p - 1 - r.index)];
                case PlanTape::Operand::Kind::InputLag:
                    return u[static_cast<size_t>(p - 1 - r.index)];
                case PlanTape::Operand::Kind::Temp:
                    return temp[static_cast<size_t>(r.index)];
            }
            fail(ErrorKind::Internal, "unreachable operand kind");
        };
        for (size_t i = 0; i < tape.ops.size(); ++i) {
            const PlanTape::Op& op = tape.ops[i];
            if (op.is_mul) {
                temp[i].assign_mul(source(op.a), source(op.b));
            } else {
                temp[i].assign_add(source(op.a), source(op.b));
            }
        }
        next.set(source(tape.result));
        if (!next.is_finite()) {
            orbit.overflow = OverflowDiagnostic{
                p, "reference orbit left the finite range at iteration " + std::to_string(p)};
            break;
        }
        orbit.values.push_back(next);
    }
    return orbit;
}

long trusted_prefix(const PolynomialModel& model, const InitialConditions& init, long iterations,
                    int bits) {
    const ReferenceOrbit base = simulate_reference(model, init, iterations, bits);
    const ReferenceOrbit wide = simulate_reference(model, init, iterations, 2 * bits);
    const size_t shared = std::min(base.length(), wide.length());

    const int work = 2 * bits;
    BigFloat diff(work), mag_a(work), mag_b(work), threshold(work), bound(work);
    threshold.set(1.0);
    // threshold = 2^(-bits/2)
    mpfr_div_2ui(threshold.raw(), threshold.raw(), static_cast<unsigned long>(bits / 2), MPFR_RNDN);

    for (size_t n = 0; n < shared; ++n) {
        diff.assign_sub(base.values[n], wide.values[n]);
        diff.assign_abs(diff);
        if (diff.is_zero()) continue;
        mag_a.assign_abs(base.values[n]);
        mag_b.assign_abs(wide.values[n]);
        if (mag_b.less_than(mag_a)) mag_b.set(mag_a);
        bound.assign_mul(mag_b, threshold);
        if (!diff.less_than(bound)) return static_cast<long>(n);
    }
    return static_cast<long>(shared);
}

}  // namespace lbex
