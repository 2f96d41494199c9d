#pragma once

#include <mpfr.h>

#include <string>

namespace lbex {

/// Thin RAII wrapper over mpfr_t with per-value precision. Every operation
/// rounds to the destination's precision, round-to-nearest-even, mirroring
/// what a `bits`-wide IEEE format would do.
class BigFloat {
public:
    explicit BigFloat(mpfr_prec_t bits) { mpfr_init2(value_, bits); mpfr_set_zero(value_, 1); }
    BigFloat(const BigFloat& other) {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_set(value_, other.value_, MPFR_RNDN);
    }
    BigFloat(BigFloat&& other) noexcept {
        mpfr_init2(value_, mpfr_get_prec(other.value_));
        mpfr_swap(value_, other.value_);
    }
    BigFloat& operator=(const BigFloat& other) {
        if (this != &other) {
            mpfr_set_prec(value_, mpfr_get_prec(other.value_));
            mpfr_set(value_, other.value_, MPFR_RNDN);
        }
        return *this;
    }
    BigFloat& operator=(BigFloat&& other) noexcept {
        if (this != &other) mpfr_swap(value_, other.value_);
        return *this;
    }
    ~BigFloat() { mpfr_clear(value_); }

    mpfr_prec_t precision() const { return mpfr_get_prec(value_); }

    void set(double x) { mpfr_set_d(value_, x, MPFR_RNDN); }
    void set(const BigFloat& x) { mpfr_set(value_, x.value_, MPFR_RNDN); }
    void set_decimal(const std::string& text) { mpfr_set_str(value_, text.c_str(), 10, MPFR_RNDN); }
    void set_zero() { mpfr_set_zero(value_, 1); }

    void assign_add(const BigFloat& a, const BigFloat& b) {
        mpfr_add(value_, a.value_, b.value_, MPFR_RNDN);
    }
    void assign_sub(const BigFloat& a, const BigFloat& b) {
        mpfr_sub(value_, a.value_, b.value_, MPFR_RNDN);
    }
    void assign_mul(const BigFloat& a, const BigFloat& b) {
        mpfr_mul(value_, a.value_, b.value_, MPFR_RNDN);
    }
    void assign_cos(const BigFloat& x) { mpfr_cos(value_, x.value_, MPFR_RNDN); }
    void assign_abs(const BigFloat& x) { mpfr_abs(value_, x.value_, MPFR_RNDN); }
    void assign_pi() { mpfr_const_pi(value_, MPFR_RNDN); }

    void mul_long(long k) { mpfr_mul_si(value_, value_, k, MPFR_RNDN); }
    void div_long(long k) { mpfr_div_si(value_, value_, k, MPFR_RNDN); }

    double to_double() const { return mpfr_get_d(value_, MPFR_RNDN); }
    bool is_finite() const { return mpfr_number_p(value_) != 0; }
    bool is_zero() const { return mpfr_zero_p(value_) != 0; }
    bool less_than(const BigFloat& other) const { return mpfr_less_p(value_, other.value_) != 0; }

    mpfr_ptr raw() { return value_; }
    mpfr_srcptr raw() const { return value_; }

private:
    mpfr_t value_;
};

}  // namespace lbex
