#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <string_view>

namespace seuvote {

/// Exact rational number in canonical form (gcd 1, positive denominator).
///
/// Thin value wrapper over GMP's mpq_class so that every comparison made by
/// the mechanisms is decidable without tolerances.
class Rational {
public:
    Rational() = default;
    Rational(long value) : q_(value) {}  // NOLINT(google-explicit-constructor)
    Rational(int value) : q_(value) {}   // NOLINT(google-explicit-constructor)
    Rational(long num, long den);
    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    /// Parses "num/den" or "num". Throws std::invalid_argument on bad input
    /// or a zero denominator.
    static Rational parse(std::string_view text);

    [[nodiscard]] std::string str() const;
    [[nodiscard]] double to_double() const { return q_.get_d(); }
    [[nodiscard]] const mpq_class& raw() const { return q_; }

    [[nodiscard]] bool is_zero() const { return sgn(q_) == 0; }
    [[nodiscard]] int sign() const { return sgn(q_); }
    [[nodiscard]] Rational abs() const { return Rational(mpq_class(::abs(q_))); }

    /// Numerator and denominator as decimal strings (denominator > 0).
    [[nodiscard]] std::string numerator_str() const { return q_.get_num().get_str(); }
    [[nodiscard]] std::string denominator_str() const { return q_.get_den().get_str(); }
    [[nodiscard]] mpz_class denominator() const { return q_.get_den(); }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o);

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return cmp(a.q_, b.q_) == 0; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    [[nodiscard]] std::size_t hash() const;

private:
    mpq_class q_{0};
};

std::ostream& operator<<(std::ostream& os, const Rational& r);

}  // namespace seuvote

template <>
struct std::hash<seuvote::Rational> {
    std::size_t operator()(const seuvote::Rational& r) const noexcept { return r.hash(); }
};
