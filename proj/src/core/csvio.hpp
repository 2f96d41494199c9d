#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "core/lbe.hpp"
#include "core/simulate.hpp"

namespace lbex {

uint64_t fnv1a64(std::string_view data);
uint64_t fnv1a64_file(const std::string& path);

/// Write-then-rename so partially written files are never observed.
void write_text_atomic(const std::string& path, const std::string& content);

/// Orbit CSV: header `n,value`, one row per orbit index, values formatted
/// with 17 significant digits (round-trip exact for binary64).
std::string orbit_csv(const PseudoOrbit& orbit);
std::vector<std::pair<long, double>> parse_orbit_csv(const std::string& text);

/// LBE CSV: header `n,lbe,log2_lbe,epsilon,guard`.
std::string lbe_csv(const LbeSeries& lbe, const PrecisionSeries& precision);

/// Verification CSV: header `n,ref,a,b,lbe,margin` (ref rounded to binary64).
std::string verify_csv(const ReferenceOrbit& reference, const PseudoOrbit& a,
                       const PseudoOrbit& b, const VerificationReport& report);

}  // namespace lbex
