#include "randstab/ext_real.hpp"

#include <algorithm>
#include <climits>
#include <limits>

namespace randstab {

mpfr_prec_t round_precision(long bits) noexcept {
    const long floor = static_cast<long>(kMinPrecision);
    long b = std::max(bits, floor);
    b = ((b + 63) / 64) * 64;
    return static_cast<mpfr_prec_t>(b);
}

ExtReal::ExtReal(mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
    mpfr_set_zero(value_, 1);
    owned_ = true;
}

ExtReal::ExtReal(double value, mpfr_prec_t bits) {
    mpfr_init2(value_, bits);
    mpfr_set_d(value_, value, MPFR_RNDN);
    owned_ = true;
}

ExtReal::ExtReal(const ExtReal& other) {
    mpfr_init2(value_, other.precision());
    mpfr_set(value_, other.value_, MPFR_RNDN);
    owned_ = true;
}

ExtReal::ExtReal(ExtReal&& other) noexcept {
    // Steal the limb pointer; the moved-from object no longer owns it.
    *value_ = *other.value_;
    owned_ = other.owned_;
    other.owned_ = false;
}

ExtReal& ExtReal::operator=(const ExtReal& other) {
    if (this == &other) return *this;
    if (!owned_) {
        mpfr_init2(value_, other.precision());
        owned_ = true;
    } else if (precision() != other.precision()) {
        mpfr_set_prec(value_, other.precision());
    }
    mpfr_set(value_, other.value_, MPFR_RNDN);
    return *this;
}

ExtReal& ExtReal::operator=(ExtReal&& other) noexcept {
    if (this == &other) return *this;
    if (owned_) mpfr_clear(value_);
    *value_ = *other.value_;
    owned_ = other.owned_;
    other.owned_ = false;
    return *this;
}

ExtReal::~ExtReal() {
    if (owned_) mpfr_clear(value_);
}

void ExtReal::set_precision(mpfr_prec_t bits) {
    mpfr_prec_round(value_, bits, MPFR_RNDN);
}

long ExtReal::exponent() const noexcept {
    if (mpfr_zero_p(value_)) return LONG_MIN;
    return static_cast<long>(mpfr_get_exp(value_));
}

namespace {

mpfr_prec_t wider(const ExtReal& a, const ExtReal& b) {
    return std::max(a.precision(), b.precision());
}

}  // namespace

ExtReal operator+(const ExtReal& a, const ExtReal& b) {
    ExtReal out(wider(a, b));
    mpfr_add(out.get(), a.get(), b.get(), MPFR_RNDN);
    return out;
}

ExtReal operator-(const ExtReal& a, const ExtReal& b) {
    ExtReal out(wider(a, b));
    mpfr_sub(out.get(), a.get(), b.get(), MPFR_RNDN);
    return out;
}

ExtReal operator*(const ExtReal& a, const ExtReal& b) {
    ExtReal out(wider(a, b));
    mpfr_mul(out.get(), a.get(), b.get(), MPFR_RNDN);
    return out;
}

ExtReal operator/(const ExtReal& a, const ExtReal& b) {
    ExtReal out(wider(a, b));
    mpfr_div(out.get(), a.get(), b.get(), MPFR_RNDN);
    return out;
}

ExtReal operator-(const ExtReal& a) {
    ExtReal out(a.precision());
    mpfr_neg(out.get(), a.get(), MPFR_RNDN);
    return out;
}

ExtReal ExtReal::abs() const {
    ExtReal out(precision());
    mpfr_abs(out.get(), value_, MPFR_RNDN);
    return out;
}

ExtReal ExtReal::sqrt() const {
    ExtReal out(precision());
    mpfr_sqrt(out.get(), value_, MPFR_RNDN);
    return out;
}

ExtVector make_ext_vector(const Vector& v, mpfr_prec_t bits) {
    ExtVector out;
    out.reserve(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) out.emplace_back(v(i), bits);
    return out;
}

ExtVector zero_ext_vector(Eigen::Index n, mpfr_prec_t bits) {
    ExtVector out;
    out.reserve(static_cast<std::size_t>(n));
    for (Eigen::Index i = 0; i < n; ++i) out.emplace_back(bits);
    return out;
}

Vector to_double(const ExtVector& v) {
    Vector out(static_cast<Eigen::Index>(v.size()));
    for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i].to_double();
    return out;
}

long max_exponent(const ExtVector& v) noexcept {
    long e = LONG_MIN;
    for (const auto& x : v) e = std::max(e, x.exponent());
    return e;
}

double log2_norm(const ExtVector& v) {
    if (max_exponent(v) == LONG_MIN) return -std::numeric_limits<double>::infinity();
    // A 64-bit norm is plenty for magnitude bookkeeping.
    mpfr_t acc, sq;
    mpfr_init2(acc, 64);
    mpfr_init2(sq, 64);
    mpfr_set_zero(acc, 1);
    for (const auto& x : v) {
        mpfr_sqr(sq, x.get(), MPFR_RNDN);
        mpfr_add(acc, acc, sq, MPFR_RNDN);
    }
    mpfr_log2(acc, acc, MPFR_RNDN);
    const double out = 0.5 * mpfr_get_d(acc, MPFR_RNDN);
    mpfr_clear(sq);
    mpfr_clear(acc);
    return out;
}

}  // namespace randstab
