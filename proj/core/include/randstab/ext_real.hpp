#pragma once

// Extended-precision real numbers backed by MPFR.
//
// Open-loop-unstable episodes drive the state to magnitudes far outside the
// double range (10^1000 and beyond at a few thousand steps). The noise that
// carries the identifying information stays O(1), so a trajectory is only
// meaningful if every stored state keeps its small components. States are
// therefore held with a precision that grows with their binary exponent.

#include "randstab/linalg.hpp"

#include <mpfr.h>

#include <vector>

namespace randstab {

/// Precision floor for every extended value (bits).
inline constexpr mpfr_prec_t kMinPrecision = 128;
/// Bits kept below the O(1) noise scale when storing a state.
inline constexpr mpfr_prec_t kStateGuardBits = 96;
/// Bits kept below the O(1) scale when accumulating second moments.
inline constexpr mpfr_prec_t kMomentGuardBits = 128;

/// Rounds `bits` up to a whole number of 64-bit limbs, never below the floor.
[[nodiscard]] mpfr_prec_t round_precision(long bits) noexcept;

/// Owning RAII handle around one `mpfr_t`.
class ExtReal {
public:
    explicit ExtReal(mpfr_prec_t bits = kMinPrecision);
    ExtReal(double value, mpfr_prec_t bits);
    ExtReal(const ExtReal& other);
    ExtReal(ExtReal&& other) noexcept;
    ExtReal& operator=(const ExtReal& other);
    ExtReal& operator=(ExtReal&& other) noexcept;
    ~ExtReal();

    [[nodiscard]] mpfr_prec_t precision() const noexcept { return mpfr_get_prec(value_); }
    /// Changes precision, rounding the stored value.
    void set_precision(mpfr_prec_t bits);

    [[nodiscard]] double to_double() const noexcept { return mpfr_get_d(value_, MPFR_RNDN); }
    [[nodiscard]] bool is_zero() const noexcept { return mpfr_zero_p(value_) != 0; }
    [[nodiscard]] bool is_finite() const noexcept { return mpfr_number_p(value_) != 0; }
    /// Binary exponent e with 2^(e-1) <= |x| < 2^e; LONG_MIN for zero.
    [[nodiscard]] long exponent() const noexcept;

    [[nodiscard]] mpfr_ptr get() noexcept { return value_; }
    [[nodiscard]] mpfr_srcptr get() const noexcept { return value_; }

    // Value arithmetic; results carry the larger operand precision.
    friend ExtReal operator+(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator-(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator*(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator/(const ExtReal& a, const ExtReal& b);
    friend ExtReal operator-(const ExtReal& a);
    friend bool operator<(const ExtReal& a, const ExtReal& b) { return mpfr_less_p(a.value_, b.value_) != 0; }
    friend bool operator>(const ExtReal& a, const ExtReal& b) { return mpfr_greater_p(a.value_, b.value_) != 0; }

    [[nodiscard]] ExtReal abs() const;
    [[nodiscard]] ExtReal sqrt() const;

private:
    mpfr_t value_;
    bool owned_ = false;
};

using ExtVector = std::vector<ExtReal>;

[[nodiscard]] ExtVector make_ext_vector(const Vector& v, mpfr_prec_t bits = kMinPrecision);
[[nodiscard]] ExtVector zero_ext_vector(Eigen::Index n, mpfr_prec_t bits = kMinPrecision);
/// Entries rounded to double; may saturate to +-inf for huge values.
[[nodiscard]] Vector to_double(const ExtVector& v);
/// Largest binary exponent over the entries (LONG_MIN if all zero).
[[nodiscard]] long max_exponent(const ExtVector& v) noexcept;
/// log2 of the Euclidean norm; -inf for the zero vector.
[[nodiscard]] double log2_norm(const ExtVector& v);

}  // namespace randstab
