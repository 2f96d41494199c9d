#pragma once

#include <optional>
#include <vector>

#include "core/bigfloat.hpp"
#include "core/simulate.hpp"

namespace lbex {

/// The same recursion evaluated with `bits`-wide floating point (canonical
/// plan), serving as the proxy true orbit within a trust window. Coefficients
/// and signal parameters enter from their exact decimal literals, rounded
/// once to `bits`; pi is computed at `bits`.
struct ReferenceOrbit {
    std::vector<BigFloat> values;
    int bits = 0;
    std::string plan_id;
    std::optional<OverflowDiagnostic> overflow;

    size_t length() const { return values.size(); }
    double value_as_double(size_t n) const { return values[n].to_double(); }
};

/// bits must be >= 128.
ReferenceOrbit simulate_reference(const PolynomialModel& model, const InitialConditions& init,
                                  long iterations, int bits);

/// Length of the prefix on which the bits-wide and 2*bits-wide orbits agree
/// to a relative difference below 2^(-bits/2). The reference orbit is only a
/// defensible stand-in for the true orbit inside this window.
long trusted_prefix(const PolynomialModel& model, const InitialConditions& init, long iterations,
                    int bits);

}  // namespace lbex
