#include "dagger/padic.hpp"

#include <algorithm>
#include <boost/multiprecision/cpp_int.hpp>
#include <climits>
#include <sstream>

namespace dagger {

namespace {

constexpr std::uint64_t kLimit = std::uint64_t{1} << 62;
constexpr int kInfinitePrec = 1 << 20;

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

// Inverse modulo m of a unit a (extended Euclid).
std::uint64_t invmod(std::uint64_t a, std::uint64_t m) {
    if (m == 1) return 0;
    __int128 t = 0, nt = 1;
    __int128 r = m, nr = a % m;
    while (nr != 0) {
        __int128 q = r / nr;
        __int128 tmp = t - q * nt;
        t = nt;
        nt = tmp;
        tmp = r - q * nr;
        r = nr;
        nr = tmp;
    }
    if (r != 1) throw DomainError("inverse of a non-unit");
    if (t < 0) t += m;
    return static_cast<std::uint64_t>(t);
}

int v_p_u64(std::uint64_t p, std::uint64_t x) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::uint64_t pow_or_cap(std::uint64_t p, int e) { return ipow(p, std::min(e, max_exponent(p))); }

// Splits a nonzero integer as sign * p^v * u with u > 0 coprime to p.
struct Split {
    int v = 0;
    std::uint64_t u = 1;
    bool negative = false;
};

Split split_int(std::uint64_t p, std::int64_t n) {
    Split s;
    s.negative = n < 0;
    std::uint64_t a = s.negative ? static_cast<std::uint64_t>(-(n + 1)) + 1 : static_cast<std::uint64_t>(n);
    while (a % p == 0) {
        a /= p;
        ++s.v;
    }
    s.u = a;
    return s;
}

}  // namespace

bool is_prime(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int r = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++r;
    }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 1; i < r; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) {
                composite = false;
                break;
            }
        }
        if (composite) return false;
    }
    return true;
}

std::uint64_t ipow(std::uint64_t p, int e) {
    if (e < 0) throw DomainError("negative exponent in ipow");
    thread_local std::uint64_t cached_p = 0;
    thread_local std::uint64_t table[64];
    thread_local int top = 0;
    if (p != cached_p) {
        if (p < 2) throw DomainError("ipow needs p >= 2");
        table[0] = 1;
        top = 0;
        while (table[top] <= kLimit / p) {
            table[top + 1] = table[top] * p;
            ++top;
        }
        cached_p = p;
    }
    if (e > top) throw DomainError("p^e exceeds 2^62");
    return table[e];
}

int max_exponent(std::uint64_t p) {
    if (p < 2) throw DomainError("max_exponent needs p >= 2");
    int e = 0;
    std::uint64_t r = 1;
    while (r <= kLimit / p) {
        r *= p;
        ++e;
    }
    return e;
}

std::int64_t val_factorial(std::uint64_t p, std::uint64_t m) {
    std::uint64_t digits = 0, x = m;
    while (x) {
        digits += x % p;
        x /= p;
    }
    return static_cast<std::int64_t>((m - digits) / (p - 1));
}

int valuation_int(std::uint64_t p, std::int64_t n) {
    if (n == 0) throw DomainError("valuation of zero");
    return split_int(p, n).v;
}

// ---------------------------------------------------------------- Zmod

Zmod::Zmod(std::uint64_t prime, int exponent) : p(prime), s(exponent) {
    if (prime < 2) throw DomainError("modulus prime must be >= 2");
    if (exponent < 0) throw DomainError("negative precision");
    m = ipow(prime, exponent);
}

std::uint64_t Zmod::reduce(std::int64_t x) const {
    if (x >= 0) return static_cast<std::uint64_t>(x) % m;
    std::uint64_t a = (static_cast<std::uint64_t>(-(x + 1)) + 1) % m;
    return a == 0 ? 0 : m - a;
}

std::uint64_t Zmod::pow(std::uint64_t a, std::uint64_t e) const { return powmod(a, e, m); }

std::uint64_t Zmod::inv(std::uint64_t a) const {
    if (s > 0 && a % p == 0) throw DomainError("inverse of a non-unit modulo p^s");
    return invmod(a, m);
}

int Zmod::valuation(std::uint64_t a) const {
    a %= m;
    if (a == 0) return s;
    return v_p_u64(p, a);
}

std::int64_t Zmod::to_signed(std::uint64_t a) const {
    a %= m;
    if (a > m / 2) return -static_cast<std::int64_t>(m - a);
    return static_cast<std::int64_t>(a);
}

std::uint64_t Zmod::divide_by_p_power(std::uint64_t a, int k) const {
    std::uint64_t pk = ipow(p, k);
    if (a % pk != 0) throw DomainError("divide_by_p_power: not divisible");
    return a / pk;
}

// ---------------------------------------------------------------- binomials

namespace {

// prod(nums) / prod(dens) mod p^s, which must be p-integral.
std::uint64_t ratio_mod(const Zmod& R, const std::vector<std::int64_t>& nums, const std::vector<std::int64_t>& dens) {
    int v = 0;
    std::uint64_t unit = 1 % R.m;
    bool negative = false;
    for (std::int64_t n : nums) {
        if (n == 0) return 0;
        Split sp = split_int(R.p, n);
        v += sp.v;
        negative ^= sp.negative;
        unit = R.mul(unit, sp.u % R.m);
    }
    std::uint64_t den_unit = 1 % R.m;
    for (std::int64_t d : dens) {
        Split sp = split_int(R.p, d);
        v -= sp.v;
        negative ^= sp.negative;
        den_unit = R.mul(den_unit, sp.u % R.m);
    }
    if (v < 0) throw DomainError("ratio is not p-integral");
    if (v >= R.s) return 0;
    std::uint64_t r = R.mul(R.mul(unit, R.inv(den_unit)), ipow(R.p, v));
    return negative ? R.neg(r) : r;
}

}  // namespace

std::uint64_t binomial_mod(const Zmod& R, std::int64_t n, std::int64_t k) {
    if (k < 0) return 0;
    if (k == 0) return 1 % R.m;
    if (n >= 0 && k > n) return 0;
    std::vector<std::int64_t> nums, dens;
    nums.reserve(k);
    dens.reserve(k);
    for (std::int64_t i = 0; i < k; ++i) {
        nums.push_back(n - i);
        dens.push_back(i + 1);
    }
    return ratio_mod(R, nums, dens);
}

std::uint64_t binomial_rational_mod(const Zmod& R, std::int64_t num, std::int64_t den, std::int64_t k) {
    if (den == 0) throw DomainError("zero denominator");
    if (den % static_cast<std::int64_t>(R.p) == 0) throw DomainError("denominator is not a p-adic unit");
    if (k < 0) return 0;
    if (k == 0) return 1 % R.m;
    std::vector<std::int64_t> nums, dens;
    for (std::int64_t i = 0; i < k; ++i) {
        nums.push_back(num - i * den);
        dens.push_back((i + 1) * den);
    }
    return ratio_mod(R, nums, dens);
}

SplitInteger echelon_relation_constant(const Zmod& R, int j) {
    if (j < 0) throw DomainError("negative echelon index");
    std::uint64_t big = ipow(R.p, j + 1);
    std::uint64_t small = big / R.p;
    auto unit_factorial = [&](std::uint64_t n, std::int64_t& v) {
        std::uint64_t u = 1 % R.m;
        for (std::uint64_t i = 2; i <= n; ++i) {
            Split sp = split_int(R.p, static_cast<std::int64_t>(i));
            v += sp.v;
            u = R.mul(u, sp.u % R.m);
        }
        return u;
    };
    std::int64_t vb = 0, vs = 0;
    std::uint64_t ub = unit_factorial(big, vb);
    std::uint64_t us = unit_factorial(small, vs);
    SplitInteger out;
    out.valuation = static_cast<int>(vb - static_cast<std::int64_t>(R.p) * vs);
    out.unit = R.mul(ub, R.inv(R.pow(us, R.p)));
    return out;
}

std::optional<std::uint64_t> echelon_relation_constant_exact(std::uint64_t p, int j) {
    using boost::multiprecision::cpp_int;
    cpp_int pj = 1;
    for (int i = 0; i < j; ++i) pj *= p;
    if (pj * p > 100000) return std::nullopt;
    auto fact = [](cpp_int n) {
        cpp_int r = 1;
        for (cpp_int i = 2; i <= n; ++i) r *= i;
        return r;
    };
    cpp_int small = fact(pj);
    cpp_int denom = 1;
    for (std::uint64_t i = 0; i < p; ++i) denom *= small;
    cpp_int q = fact(pj * p) / denom;
    if (q > cpp_int(std::numeric_limits<std::uint64_t>::max())) return std::nullopt;
    return static_cast<std::uint64_t>(q);
}

// ---------------------------------------------------------------- PrecisionPolicy

PrecisionPolicy::PrecisionPolicy(std::uint64_t prime, int precision, int degree_bound, int pole_bound)
    : p(prime), s(precision), D(degree_bound), E(pole_bound) {
    if (!is_prime(prime)) throw DomainError("p must be prime");
    if (prime == 2) throw DomainError("p = 2 is not supported");
    if (precision < 1) throw DomainError("precision s must be >= 1");
    if (degree_bound < 0 || pole_bound < 0) throw DomainError("bounds must be nonnegative");
    if (precision > max_exponent(prime)) throw DomainError("p^s must stay below 2^62");
}

// ---------------------------------------------------------------- PadicScalar

PadicScalar::PadicScalar(std::uint64_t p, int prec, std::int64_t value) : p_(p), prec_(prec) {
    Zmod R(p, prec);
    mod_ = R.m;
    residue_ = R.reduce(value);
}

PadicScalar PadicScalar::from_residue(std::uint64_t p, int prec, std::uint64_t residue) {
    PadicScalar a;
    a.p_ = p;
    a.prec_ = prec;
    a.mod_ = ipow(p, prec);
    a.residue_ = residue % a.mod_;
    return a;
}

void PadicScalar::check_same_prime(const PadicScalar& o) const {
    if (p_ != o.p_) throw DomainError("mismatched primes");
}

int PadicScalar::valuation() const { return residue_ == 0 ? prec_ : v_p_u64(p_, residue_); }

PadicScalar PadicScalar::with_prec(int prec) const {
    if (prec > prec_) throw PrecisionError("cannot raise the precision of a scalar");
    return from_residue(p_, prec, residue_);
}

PadicScalar PadicScalar::operator+(const PadicScalar& o) const {
    check_same_prime(o);
    int pr = std::min(prec_, o.prec_);
    std::uint64_t m = std::min(mod_, o.mod_);
    return from_residue(p_, pr, (residue_ % m + o.residue_ % m) % m);
}

PadicScalar PadicScalar::operator-() const { return from_residue(p_, prec_, residue_ == 0 ? 0 : mod_ - residue_); }

PadicScalar PadicScalar::operator-(const PadicScalar& o) const { return *this + (-o); }

PadicScalar PadicScalar::operator*(const PadicScalar& o) const {
    check_same_prime(o);
    int pr = std::min(prec_, o.prec_);
    std::uint64_t m = std::min(mod_, o.mod_);
    return from_residue(p_, pr, mulmod(residue_ % m, o.residue_ % m, m));
}

PadicScalar PadicScalar::mul_exact(std::int64_t k, int cap) const {
    if (k == 0) return from_residue(p_, cap, 0);
    int pr = std::min(cap, prec_ + valuation_int(p_, k));
    Zmod R(p_, pr);
    return from_residue(p_, pr, R.mul(residue_ % R.m, R.reduce(k)));
}

bool PadicScalar::operator==(const PadicScalar& o) const {
    check_same_prime(o);
    std::uint64_t m = std::min(mod_, o.mod_);
    return residue_ % m == o.residue_ % m;
}

std::string PadicScalar::to_string() const {
    std::ostringstream os;
    os << residue_ << " (mod " << p_ << "^" << prec_ << ")";
    return os.str();
}

PadicScalar inv_unit(const PadicScalar& a) {
    if (a.prec() == 0) return a;
    if (a.residue() % a.prime() == 0) throw DomainError("inv_unit: input is not a unit");
    return PadicScalar::from_residue(a.prime(), a.prec(), invmod(a.residue(), a.modulus()));
}

// ---------------------------------------------------------------- log1p / sqrt1p

namespace {

// Number of series terms k = 1..K summed by log1p, and the maximal v_p(k) among them.
std::pair<int, int> log1p_plan(std::uint64_t p, int prec, int v) {
    int K = 0, loss = 0;
    for (int k = 1;; ++k) {
        int lg = 0;
        for (std::uint64_t t = p; t <= static_cast<std::uint64_t>(k); t *= p) ++lg;
        if (static_cast<std::int64_t>(k) * v - lg >= prec) break;
        K = k;
        loss = std::max(loss, v_p_u64(p, static_cast<std::uint64_t>(k)));
    }
    return {K, loss};
}

}  // namespace

int log1p_precision_loss(std::uint64_t p, int prec, int input_valuation) {
    if (input_valuation < 1) throw DomainError("log1p needs valuation >= 1");
    return log1p_plan(p, prec, input_valuation).second;
}

PadicScalar log1p(const PadicScalar& a) {
    const std::uint64_t p = a.prime();
    const int prec = a.prec();
    if (prec == 0) return a;
    if (a.residue() % p != 0) throw DomainError("log1p needs valuation >= 1");
    if (a.is_zero()) return a;
    auto [K, loss] = log1p_plan(p, prec, a.valuation());
    // a^k is known modulo p^(prec + (k-1)v) >= p^(prec + loss) once k > 1, so dividing by k
    // (valuation <= loss) leaves at least prec - loss... and in fact prec digits for these terms.
    int work = std::min(prec + loss, max_exponent(p));
    Zmod W(p, work);
    Zmod R(p, prec);
    std::uint64_t sum = 0;
    std::uint64_t power = 1;
    for (int k = 1; k <= K; ++k) {
        power = W.mul(power, a.residue());
        Split sp = split_int(p, k);
        std::uint64_t term = power / ipow(p, sp.v);  // exact: v_p(a^k) >= k >= v_p(k)
        term = R.mul(term % R.m, R.inv(sp.u % R.m));
        sum = (k % 2 == 1) ? R.add(sum, term) : R.sub(sum, term);
    }
    return PadicScalar::from_residue(p, prec - loss, sum);
}

PadicScalar sqrt1p(const PadicScalar& a) {
    const std::uint64_t p = a.prime();
    if (p == 2) throw DomainError("sqrt1p is not supported for p = 2");
    const int prec = a.prec();
    if (prec == 0) return a;
    if (a.residue() % p != 0) throw DomainError("sqrt1p needs valuation >= 1");
    Zmod R(p, prec);
    const std::uint64_t target = R.add(1 % R.m, a.residue());
    const std::uint64_t half = R.inv(2);
    std::uint64_t y = 1 % R.m;
    // y <- (y + target / y) / 2; quadratic convergence from y = 1.
    for (int iter = 0; iter < 64; ++iter) {
        std::uint64_t next = R.mul(R.add(y, R.mul(target, R.inv(y))), half);
        if (next == y) break;
        y = next;
    }
    if (R.mul(y, y) != target) throw PrecisionError("sqrt1p: Newton iteration did not converge");
    return PadicScalar::from_residue(p, prec, R.sub(y, 1 % R.m));
}

// ---------------------------------------------------------------- PadicNumber

namespace {

using u128 = unsigned __int128;
using boost::multiprecision::uint256_t;

constexpr u128 kWideLimit = u128{1} << 126;

u128 wpow(std::uint64_t p, int e) {
    thread_local std::uint64_t cached_p = 0;
    thread_local u128 table[128];
    thread_local int top = 0;
    if (p != cached_p) {
        table[0] = 1;
        top = 0;
        while (table[top] <= kWideLimit / p) {
            table[top + 1] = table[top] * p;
            ++top;
        }
        cached_p = p;
    }
    if (e < 0 || e > top) throw DomainError("p^e exceeds the 126-bit unit range");
    return table[e];
}

u128 wmulmod(u128 a, u128 b, u128 m) {
    if ((a >> 64) == 0 && (b >> 64) == 0 && (m >> 64) == 0) {
        const auto a64 = static_cast<std::uint64_t>(a), b64 = static_cast<std::uint64_t>(b);
        const auto m64 = static_cast<std::uint64_t>(m);
        return mulmod(a64 % m64, b64 % m64, m64);
    }
    uint256_t r = uint256_t(a) * uint256_t(b) % uint256_t(m);
    return static_cast<u128>(r);
}

// Inverse of a unit modulo p^r by Newton lifting from the inverse mod p.
u128 winv(u128 a, std::uint64_t p, int r) {
    const u128 m = wpow(p, r);
    u128 x = invmod(static_cast<std::uint64_t>(a % p), p);
    int k = 1;
    while (k < r) {
        k = std::min(2 * k, r);
        const u128 mk = wpow(p, k);
        const u128 ax = wmulmod(a % mk, x, mk);
        const u128 two_minus = (2 % mk + mk - ax) % mk;
        x = wmulmod(x, two_minus, mk);
    }
    return x % m;
}

int v_p_wide(std::uint64_t p, u128 x) {
    int v = 0;
    while (x % p == 0) {
        x /= p;
        ++v;
    }
    return v;
}

std::string u128_to_string(u128 x) {
    if (x == 0) return "0";
    std::string s;
    while (x) {
        s.push_back(static_cast<char>('0' + static_cast<int>(x % 10)));
        x /= 10;
    }
    return {s.rbegin(), s.rend()};
}

}  // namespace

int max_wide_exponent(std::uint64_t p) {
    if (p < 2) throw DomainError("max_wide_exponent needs p >= 2");
    int e = 0;
    u128 r = 1;
    while (r <= kWideLimit / p) {
        r *= p;
        ++e;
    }
    return e;
}

PadicNumber PadicNumber::zero(std::uint64_t p, int absprec) {
    PadicNumber z;
    z.p_ = p;
    z.zero_ = true;
    z.abs_ = std::min(absprec, kInfinitePrec);
    return z;
}

PadicNumber PadicNumber::normalized(std::uint64_t p, int val, u128 x, int rel) {
    if (rel <= 0 || x == 0) return zero(p, val + std::max(rel, 0));
    int t = v_p_wide(p, x);
    if (t >= rel) return zero(p, val + rel);
    PadicNumber r;
    r.p_ = p;
    r.zero_ = false;
    r.val_ = val + t;
    r.rel_ = rel - t;
    r.unit_ = (x / wpow(p, t)) % wpow(p, r.rel_);
    return r;
}

PadicNumber PadicNumber::from_integer(std::uint64_t p, std::int64_t x, int absprec) {
    if (x == 0) return zero(p, absprec);
    Split sp = split_int(p, x);
    int rel = std::min(absprec - sp.v, max_wide_exponent(p));
    if (rel <= 0) return zero(p, absprec);
    const u128 m = wpow(p, rel);
    u128 u = u128{sp.u} % m;
    if (sp.negative) u = (m - u) % m;
    return normalized(p, sp.v, u, rel);
}

PadicNumber PadicNumber::from_residue(std::uint64_t p, std::uint64_t residue, int absprec) {
    return from_shifted_residue(p, residue, absprec, 0);
}

PadicNumber PadicNumber::from_shifted_residue(std::uint64_t p, std::uint64_t residue, int absprec, int shift) {
    std::uint64_t m = pow_or_cap(p, absprec);
    return normalized(p, -shift, residue % m, std::min(absprec, max_exponent(p)));
}

PadicNumber PadicNumber::from_scalar(const PadicScalar& a) { return from_residue(a.prime(), a.residue(), a.prec()); }

PadicNumber PadicNumber::shift(const PadicScalar& a, int s) {
    return from_shifted_residue(a.prime(), a.residue(), a.prec(), s);
}

PadicNumber PadicNumber::operator-() const {
    if (zero_) return *this;
    PadicNumber r = *this;
    const u128 m = wpow(p_, rel_);
    r.unit_ = (m - unit_) % m;
    return r;
}

PadicNumber PadicNumber::operator+(const PadicNumber& o) const {
    if (p_ != o.p_) throw DomainError("mismatched primes");
    if (zero_ && o.zero_) return zero(p_, std::min(abs_, o.abs_));
    int A = std::min(absprec(), o.absprec());
    int v0 = std::min(valuation(), o.valuation());
    if (A <= v0) return zero(p_, A);
    int r = std::min(A - v0, max_wide_exponent(p_));
    const u128 m = wpow(p_, r);
    u128 x = 0;
    for (const PadicNumber* t : {this, &o}) {
        if (t->zero_) continue;
        int d = t->val_ - v0;
        if (d >= r) continue;
        x = (x + wmulmod(t->unit_ % m, wpow(p_, d), m)) % m;
    }
    return normalized(p_, v0, x, r);
}

PadicNumber PadicNumber::operator-(const PadicNumber& o) const { return *this + (-o); }

PadicNumber PadicNumber::operator*(const PadicNumber& o) const {
    if (p_ != o.p_) throw DomainError("mismatched primes");
    if (zero_ || o.zero_) {
        int a = zero_ ? abs_ : val_;
        int b = o.zero_ ? o.abs_ : o.val_;
        // uncertainty p^abs times the other factor's valuation
        return zero(p_, a + b);
    }
    int rel = std::min(rel_, o.rel_);
    const u128 m = wpow(p_, rel);
    PadicNumber r;
    r.p_ = p_;
    r.zero_ = false;
    r.val_ = val_ + o.val_;
    r.rel_ = rel;
    r.unit_ = wmulmod(unit_ % m, o.unit_ % m, m);
    return r;
}

PadicNumber PadicNumber::operator/(const PadicNumber& o) const {
    if (p_ != o.p_) throw DomainError("mismatched primes");
    if (o.zero_) throw PrecisionError("division by a value indistinguishable from zero");
    if (zero_) return zero(p_, abs_ - o.val_);
    int rel = std::min(rel_, o.rel_);
    const u128 m = wpow(p_, rel);
    PadicNumber r;
    r.p_ = p_;
    r.zero_ = false;
    r.val_ = val_ - o.val_;
    r.rel_ = rel;
    r.unit_ = wmulmod(unit_ % m, winv(o.unit_ % m, p_, rel), m);
    return r;
}

PadicNumber PadicNumber::reduce_precision(int A) const {
    if (A >= absprec()) return *this;
    if (zero_ || A <= val_) return zero(p_, A);
    PadicNumber r = *this;
    r.rel_ = A - val_;
    r.unit_ = unit_ % wpow(p_, r.rel_);
    return r;
}

bool PadicNumber::equals(const PadicNumber& o) const { return (*this - o).is_zero(); }

std::optional<std::uint64_t> PadicNumber::residue() const {
    if (zero_) return 0;
    if (val_ < 0) return std::nullopt;
    int A = std::min(absprec(), max_exponent(p_));
    if (val_ >= A) return 0;
    const u128 m = wpow(p_, A);
    return static_cast<std::uint64_t>(wmulmod(unit_ % m, wpow(p_, val_), m));
}

std::optional<std::int64_t> PadicNumber::round_to_integer(std::int64_t bound) const {
    int A = std::min(absprec(), max_exponent(p_));
    if (A <= 0) return std::nullopt;
    std::uint64_t m = ipow(p_, A);
    if (m / 2 < static_cast<std::uint64_t>(bound)) return std::nullopt;
    auto r = residue();
    if (!r) return std::nullopt;
    std::int64_t x = *r > m / 2 ? -static_cast<std::int64_t>(m - *r) : static_cast<std::int64_t>(*r);
    if (x > bound || x < -bound) return std::nullopt;
    return x;
}

std::string PadicNumber::to_string() const {
    std::ostringstream os;
    if (zero_) {
        os << "O(" << p_ << "^" << abs_ << ")";
        return os.str();
    }
    if (val_ >= 0 && absprec() <= max_wide_exponent(p_)) {
        // balanced representative modulo p^absprec
        const u128 m = wpow(p_, absprec());
        const u128 x = unit_ * wpow(p_, val_) % m;
        os << (x > m / 2 ? "-" + u128_to_string(m - x) : u128_to_string(x)) << " + O(" << p_ << "^" << absprec() << ")";
    } else {
        const u128 m = wpow(p_, rel_);
        os << (unit_ > m / 2 ? "-" + u128_to_string(m - unit_) : u128_to_string(unit_)) << "*" << p_ << "^" << val_ << " + O(" << p_
           << "^" << absprec() << ")";
    }
    return os.str();
}

}  // namespace dagger
