#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>

#include <gmpxx.h>

#include "loopalg/errors.hpp"

namespace loopalg {

inline bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

/// The coefficient field: the rationals or a prime field F_p.
struct FieldSpec {
    enum class Kind { rationals, prime_field };

    Kind kind = Kind::rationals;
    std::uint64_t p = 0;

    static FieldSpec rationals() { return {}; }

    /// Primes are capped below 2^31 so residue products fit in 64 bits.
    static FieldSpec prime(std::uint64_t p) {
        if (!is_prime(p) || p >= (1ULL << 31))
            throw ParseError(ParseError::Kind::not_prime, "not a supported prime: " + std::to_string(p));
        return {Kind::prime_field, p};
    }

    bool is_rational() const { return kind == Kind::rationals; }
    std::uint64_t characteristic() const { return is_rational() ? 0 : p; }

    std::string to_string() const { return is_rational() ? "q" : "f" + std::to_string(p); }

    friend bool operator==(const FieldSpec&, const FieldSpec&) = default;
};

/// Field policy for exact rationals (GMP).
class Rationals {
public:
    using value_type = mpq_class;

    value_type zero() const { return value_type(0); }
    value_type one() const { return value_type(1); }
    value_type from_int(long v) const { return value_type(v); }
    value_type from_rational(const mpq_class& q) const {
        value_type r = q;
        r.canonicalize();
        return r;
    }

    value_type add(const value_type& a, const value_type& b) const { return a + b; }
    value_type sub(const value_type& a, const value_type& b) const { return a - b; }
    value_type mul(const value_type& a, const value_type& b) const { return a * b; }
    value_type neg(const value_type& a) const { return -a; }
    value_type inv(const value_type& a) const {
        if (sgn(a) == 0) throw InvalidInverse();
        return 1 / a;
    }
    bool is_zero(const value_type& a) const { return sgn(a) == 0; }
    bool equal(const value_type& a, const value_type& b) const { return a == b; }

    std::string to_string(const value_type& a) const { return a.get_str(); }
    mpq_class to_rational(const value_type& a) const { return a; }

    FieldSpec spec() const { return FieldSpec::rationals(); }
};

/// Field policy for F_p with residues kept canonical in [0, p).
class PrimeField {
public:
    using value_type = std::uint64_t;

    explicit PrimeField(std::uint64_t p) : p_(FieldSpec::prime(p).p) {}

    std::uint64_t modulus() const { return p_; }

    value_type zero() const { return 0; }
    value_type one() const { return 1; }
    value_type from_int(long v) const {
        long r = v % static_cast<long>(p_);
        return static_cast<value_type>(r < 0 ? r + static_cast<long>(p_) : r);
    }
    value_type from_rational(const mpq_class& q) const {
        mpz_class pz(static_cast<unsigned long>(p_));
        mpz_class num = q.get_num() % pz;
        if (num < 0) num += pz;
        mpz_class den = q.get_den() % pz;
        if (den == 0) throw InvalidInverse();
        return mul(num.get_ui(), inv(den.get_ui()));
    }

    value_type add(value_type a, value_type b) const {
        value_type s = a + b;
        return s >= p_ ? s - p_ : s;
    }
    value_type sub(value_type a, value_type b) const { return a >= b ? a - b : a + p_ - b; }
    value_type mul(value_type a, value_type b) const { return (a * b) % p_; }
    value_type neg(value_type a) const { return a == 0 ? 0 : p_ - a; }

    // Extended Euclid.
    value_type inv(value_type a) const {
        if (a == 0) throw InvalidInverse();
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(a);
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t = std::exchange(new_t, t - q * new_t);
            r = std::exchange(new_r, r - q * new_r);
        }
        if (t < 0) t += static_cast<std::int64_t>(p_);
        return static_cast<value_type>(t);
    }
    bool is_zero(value_type a) const { return a == 0; }
    bool equal(value_type a, value_type b) const { return a == b; }

    std::string to_string(value_type a) const { return std::to_string(a); }
    mpq_class to_rational(value_type a) const { return mpq_class(static_cast<unsigned long>(a)); }

    FieldSpec spec() const { return {FieldSpec::Kind::prime_field, p_}; }

private:
    std::uint64_t p_;
};

/// Calls fn with the field policy matching spec.
template <class Fn>
decltype(auto) visit_field(const FieldSpec& spec, Fn&& fn) {
    if (spec.is_rational()) return std::forward<Fn>(fn)(Rationals{});
    return std::forward<Fn>(fn)(PrimeField{spec.p});
}

/// A field element that carries its field. Used for structure constants and
/// file I/O; bulk linear algebra runs on the typed policies above.
class Scalar {
public:
    Scalar() = default;

    static Scalar from_int(const FieldSpec& field, long v) {
        Scalar s;
        s.field_ = field;
        if (field.is_rational())
            s.q_ = v;
        else
            s.r_ = PrimeField(field.p).from_int(v);
        return s;
    }

    static Scalar from_rational(const FieldSpec& field, const mpq_class& q) {
        Scalar s;
        s.field_ = field;
        if (field.is_rational()) {
            s.q_ = q;
            s.q_.canonicalize();
        } else
            s.r_ = PrimeField(field.p).from_rational(q);
        return s;
    }

    /// Accepts "3/4", "-2", "7".
    static Scalar parse(const FieldSpec& field, std::string_view text) {
        mpq_class q;
        std::string str(text);
        auto trimmed = str;
        if (trimmed.empty() || trimmed.find_first_not_of("+-0123456789/") != std::string::npos)
            throw ParseError(ParseError::Kind::bad_scalar, "bad scalar: '" + str + "'");
        if (trimmed.front() == '+') trimmed.erase(0, 1);
        if (q.set_str(trimmed, 10) != 0 || q.get_den() == 0)
            throw ParseError(ParseError::Kind::bad_scalar, "bad scalar: '" + str + "'");
        q.canonicalize();
        try {
            return from_rational(field, q);
        } catch (const InvalidInverse&) {
            throw ParseError(ParseError::Kind::bad_scalar,
                             "denominator vanishes in " + field.to_string() + ": '" + str + "'");
        }
    }

    template <class F>
    static Scalar from_value(const F& field, const typename F::value_type& v) {
        return from_rational(field.spec(), field.to_rational(v));
    }

    const FieldSpec& field() const { return field_; }

    bool is_zero() const { return field_.is_rational() ? sgn(q_) == 0 : r_ == 0; }

    Scalar operator+(const Scalar& o) const { return combine(o, '+'); }
    Scalar operator-(const Scalar& o) const { return combine(o, '-'); }
    Scalar operator*(const Scalar& o) const { return combine(o, '*'); }
    Scalar operator-() const {
        Scalar s = *this;
        if (field_.is_rational())
            s.q_ = -q_;
        else
            s.r_ = PrimeField(field_.p).neg(r_);
        return s;
    }
    Scalar inverse() const {
        Scalar s = *this;
        if (field_.is_rational())
            s.q_ = Rationals{}.inv(q_);
        else
            s.r_ = PrimeField(field_.p).inv(r_);
        return s;
    }
    Scalar& operator+=(const Scalar& o) { return *this = *this + o; }

    friend bool operator==(const Scalar& a, const Scalar& b) {
        if (a.field_ != b.field_) return false;
        return a.field_.is_rational() ? a.q_ == b.q_ : a.r_ == b.r_;
    }

    /// Canonical text: reduced fraction for Q, residue for F_p.
    std::string to_string() const { return field_.is_rational() ? q_.get_str() : std::to_string(r_); }

    mpq_class to_rational() const {
        return field_.is_rational() ? q_ : mpq_class(static_cast<unsigned long>(r_));
    }

    template <class F>
    typename F::value_type to(const F& field) const {
        if (field.spec() != field_) throw FieldMismatch(field_.to_string() + " vs " + field.spec().to_string());
        return field.from_rational(to_rational());
    }

    std::uint64_t residue() const { return r_; }

private:
    Scalar combine(const Scalar& o, char op) const {
        if (field_ != o.field_) throw FieldMismatch(field_.to_string() + " vs " + o.field_.to_string());
        Scalar s = *this;
        if (field_.is_rational()) {
            if (op == '+')
                s.q_ = q_ + o.q_;
            else if (op == '-')
                s.q_ = q_ - o.q_;
            else
                s.q_ = q_ * o.q_;
        } else {
            PrimeField f(field_.p);
            s.r_ = op == '+' ? f.add(r_, o.r_) : op == '-' ? f.sub(r_, o.r_) : f.mul(r_, o.r_);
        }
        return s;
    }

    FieldSpec field_;
    mpq_class q_;
    std::uint64_t r_ = 0;
};

enum class ScalarOp { add, mul, neg, inv };

/// Single entry point for the four field operations; `b` is the operand of
/// the unary operations.
inline Scalar scalar_arith(const Scalar& a, const Scalar& b, ScalarOp op) {
    switch (op) {
        case ScalarOp::add: return a + b;
        case ScalarOp::mul: return a * b;
        case ScalarOp::neg: return -b;
        case ScalarOp::inv: return b.inverse();
    }
    return a;
}

inline int sign_of(long exponent) { return (exponent % 2 == 0) ? 1 : -1; }

}  // namespace loopalg
