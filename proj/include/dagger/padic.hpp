#pragma once

// Exact arithmetic over Z/p^s with precision tracking.
//
// Three layers:
//   Zmod           plain residue arithmetic modulo p^s (no precision bookkeeping)
//   PadicScalar    an integer known modulo p^prec (capped absolute precision)
//   PadicNumber    an element of Q_p stored as p^val * unit with relative precision,
//                  used wherever denominators appear (cohomology reductions, traces)
//
// All moduli are kept below 2^62 so products fit in unsigned __int128.

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace dagger {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Input violates a mathematical precondition (non-unit, wrong valuation, mismatched prime...).
class DomainError : public Error {
public:
    using Error::Error;
};

// The requested result cannot be certified at the available precision.
class PrecisionError : public Error {
public:
    using Error::Error;
};

// A truncated computation changed its answer when the window was enlarged.
class InstabilityError : public Error {
public:
    using Error::Error;
};

bool is_prime(std::uint64_t n);

// p^e, throwing DomainError if the result would exceed 2^62.
std::uint64_t ipow(std::uint64_t p, int e);

// Largest e with p^e <= 2^62.
int max_exponent(std::uint64_t p);
// Largest e with p^e <= 2^126: the relative-precision cap of PadicNumber.
int max_wide_exponent(std::uint64_t p);

// Legendre: v_p(m!) = (m - digit_sum_p(m)) / (p - 1).
std::int64_t val_factorial(std::uint64_t p, std::uint64_t m);

// v_p(n) for n != 0.
int valuation_int(std::uint64_t p, std::int64_t n);

struct Zmod {
    std::uint64_t p = 0;
    int s = 0;
    std::uint64_t m = 1;

    Zmod() = default;
    Zmod(std::uint64_t prime, int exponent);

    std::uint64_t reduce(std::int64_t x) const;
    std::uint64_t add(std::uint64_t a, std::uint64_t b) const {
        std::uint64_t r = a + b;
        return r >= m ? r - m : r;
    }
    std::uint64_t sub(std::uint64_t a, std::uint64_t b) const { return a >= b ? a - b : a + m - b; }
    std::uint64_t neg(std::uint64_t a) const { return a == 0 ? 0 : m - a; }
    std::uint64_t mul(std::uint64_t a, std::uint64_t b) const {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
    }
    std::uint64_t pow(std::uint64_t a, std::uint64_t e) const;
    // Throws DomainError when a is not a unit.
    std::uint64_t inv(std::uint64_t a) const;
    // v_p(a) with the convention v_p(0) = s.
    int valuation(std::uint64_t a) const;
    // Representative in (-m/2, m/2].
    std::int64_t to_signed(std::uint64_t a) const;
    // Exact quotient a / p^k; requires p^k | a.  Result is meaningful modulo p^(s-k).
    std::uint64_t divide_by_p_power(std::uint64_t a, int k) const;

    bool operator==(const Zmod& o) const { return p == o.p && s == o.s; }
};

// C(n, k) mod p^s for any integer n (negative allowed) and k >= 0.
std::uint64_t binomial_mod(const Zmod& R, std::int64_t n, std::int64_t k);

// Binomial coefficient C(num/den, k) mod p^s for den a p-adic unit.
std::uint64_t binomial_rational_mod(const Zmod& R, std::int64_t num, std::int64_t den, std::int64_t k);

// The relation constant u_j = (p^(j+1))! / ((p^j)!)^p, as p-adic data: unit part mod p^s and valuation.
struct SplitInteger {
    int valuation = 0;
    std::uint64_t unit = 1;  // modulo p^s
};
SplitInteger echelon_relation_constant(const Zmod& R, int j);
// Exact integer value of u_j when it fits in 64 bits (any prime, including 2); nullopt otherwise.
std::optional<std::uint64_t> echelon_relation_constant_exact(std::uint64_t p, int j);

struct PrecisionPolicy {
    std::uint64_t p = 0;
    int s = 0;
    int D = 0;
    int E = 0;

    PrecisionPolicy() = default;
    PrecisionPolicy(std::uint64_t prime, int precision, int degree_bound, int pole_bound);
    Zmod ring() const { return Zmod(p, s); }
};

class PadicScalar {
public:
    PadicScalar() = default;
    PadicScalar(std::uint64_t p, int prec, std::int64_t value);
    static PadicScalar from_residue(std::uint64_t p, int prec, std::uint64_t residue);

    std::uint64_t prime() const { return p_; }
    int prec() const { return prec_; }
    std::uint64_t residue() const { return residue_; }
    std::uint64_t modulus() const { return mod_; }
    // v_p, reported as prec() when the scalar is zero to the known precision.
    int valuation() const;
    bool is_zero() const { return residue_ == 0; }

    PadicScalar operator+(const PadicScalar& o) const;
    PadicScalar operator-(const PadicScalar& o) const;
    PadicScalar operator*(const PadicScalar& o) const;
    PadicScalar operator-() const;
    // Multiplication by an exact integer: precision grows by v_p(k) up to cap.
    PadicScalar mul_exact(std::int64_t k, int cap) const;
    // Agreement modulo p^min(prec).
    bool operator==(const PadicScalar& o) const;
    PadicScalar with_prec(int prec) const;

    std::string to_string() const;

private:
    void check_same_prime(const PadicScalar& o) const;
    std::uint64_t p_ = 0;
    int prec_ = 0;
    std::uint64_t residue_ = 0;
    std::uint64_t mod_ = 1;
};

// Inverse of a unit modulo p^prec; DomainError for non-units.
PadicScalar inv_unit(const PadicScalar& a);

// log(1 + a) for v_p(a) >= 1 by the alternating series sum (-1)^m a^(m+1)/(m+1).
// Terms are summed until their guaranteed valuation reaches prec(a); the reported
// precision is prec(a) minus the largest v_p(m+1) among the summed terms.
PadicScalar log1p(const PadicScalar& a);
int log1p_precision_loss(std::uint64_t p, int prec, int input_valuation);

// r with (1 + r)^2 = 1 + a and r = 0 mod p, by Newton iteration; requires v_p(a) >= 1.
PadicScalar sqrt1p(const PadicScalar& a);

// Element of Q_p: p^val * unit with `rel` digits of relative precision (capped-relative model).
class PadicNumber {
public:
    PadicNumber() = default;
    static PadicNumber zero(std::uint64_t p, int absprec);
    static PadicNumber from_integer(std::uint64_t p, std::int64_t x, int absprec);
    static PadicNumber from_residue(std::uint64_t p, std::uint64_t residue, int absprec);
    static PadicNumber from_scalar(const PadicScalar& a);
    // a / p^shift.
    static PadicNumber shift(const PadicScalar& a, int shift);
    // (residue mod p^absprec) * p^-shift, i.e. a value with absolute precision absprec - shift.
    static PadicNumber from_shifted_residue(std::uint64_t p, std::uint64_t residue, int absprec, int shift);

    std::uint64_t prime() const { return p_; }
    bool is_zero() const { return zero_; }
    // Valuation; for zero the known lower bound (absprec).
    int valuation() const { return zero_ ? abs_ : val_; }
    int absprec() const { return zero_ ? abs_ : val_ + rel_; }
    int relprec() const { return zero_ ? 0 : rel_; }

    PadicNumber operator+(const PadicNumber& o) const;
    PadicNumber operator-(const PadicNumber& o) const;
    PadicNumber operator*(const PadicNumber& o) const;
    PadicNumber operator/(const PadicNumber& o) const;
    PadicNumber operator-() const;
    PadicNumber reduce_precision(int absprec) const;

    // Equality to the lower of the two absolute precisions.
    bool equals(const PadicNumber& o) const;
    // If integral, the residue modulo p^absprec.
    std::optional<std::uint64_t> residue() const;
    // The unique integer n with |n| <= bound congruent to this number, if absprec certifies it.
    std::optional<std::int64_t> round_to_integer(std::int64_t bound) const;

    std::string to_string() const;

private:
    static PadicNumber normalized(std::uint64_t p, int val, unsigned __int128 x, int rel);
    std::uint64_t p_ = 0;
    bool zero_ = true;
    int val_ = 0;
    int rel_ = 0;
    unsigned __int128 unit_ = 0;  // mod p^rel, rel capped by max_wide_exponent
    int abs_ = 0;
};

}  // namespace dagger
