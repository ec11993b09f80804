#include "dagger/ffield.hpp"

#include <numeric>
#include <random>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace dagger {

namespace {

using Poly = std::vector<std::uint64_t>;

void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mod(Poly a, const Poly& f, const Zmod& F) {
    trim(a);
    std::uint64_t inv = F.inv(f.back());
    while (a.size() >= f.size()) {
        std::uint64_t c = F.mul(a.back(), inv);
        std::size_t shift = a.size() - f.size();
        for (std::size_t i = 0; i < f.size(); ++i) a[i + shift] = F.sub(a[i + shift], F.mul(c, f[i]));
        trim(a);
    }
    return a;
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& f, const Zmod& F) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) r[i + j] = F.add(r[i + j], F.mul(a[i], b[j]));
    return poly_mod(r, f, F);
}

Poly poly_powmod(Poly a, std::uint64_t e, const Poly& f, const Zmod& F) {
    Poly r{1};
    a = poly_mod(a, f, F);
    while (e) {
        if (e & 1) r = poly_mulmod(r, a, f, F);
        e >>= 1;
        if (e) a = poly_mulmod(a, a, f, F);
    }
    return r;
}

Poly poly_gcd(Poly a, Poly b, const Zmod& F) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        a = poly_mod(a, b, F);
        std::swap(a, b);
    }
    return a;
}

Poly x_minus(const Poly& a, const Zmod& F) {
    Poly r = a;
    if (r.size() < 2) r.resize(2, 0);
    r[1] = F.sub(r[1], 1);
    trim(r);
    return r;
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

}  // namespace

bool FiniteField::is_irreducible(const std::vector<std::uint64_t>& monic, std::uint64_t p) {
    Zmod F(p, 1);
    const int m = static_cast<int>(monic.size()) - 1;
    if (m < 1) return false;
    if (m == 1) return true;
    Poly x{0, 1};
    // x^{p^m} == x mod f
    Poly xp = x;
    std::vector<Poly> frob(m + 1);
    frob[0] = x;
    for (int i = 1; i <= m; ++i) {
        xp = poly_powmod(xp, p, monic, F);
        frob[i] = xp;
    }
    Poly d = x_minus(frob[m], F);
    if (!d.empty()) return false;
    for (std::uint64_t r : prime_factors(static_cast<std::uint64_t>(m))) {
        Poly h = x_minus(frob[m / r], F);
        Poly g = poly_gcd(monic, h, F);
        if (g.size() > 1) return false;
    }
    return true;
}

FiniteField::FiniteField(std::uint64_t p, int m, std::uint64_t seed) : p_(p), m_(m) {
    if (!is_prime(p)) throw DomainError("FiniteField: p must be prime");
    if (m < 1) throw DomainError("FiniteField: degree must be >= 1");
    std::uint64_t q = 1;
    for (int i = 0; i < m; ++i) {
        q *= p;
        if (q > (1u << 24)) throw DomainError("FiniteField: q exceeds 2^24");
    }
    q_ = static_cast<std::uint32_t>(q);
    Zmod F(p, 1);

    std::mt19937_64 rng(seed);
    for (;;) {
        Poly cand(m + 1, 0);
        cand[m] = 1;
        for (int i = 0; i < m; ++i) cand[i] = rng() % p;
        if (m > 1 && cand[0] == 0) continue;
        if (is_irreducible(cand, p)) {
            modulus_ = cand;
            break;
        }
    }

    auto to_poly = [&](std::uint32_t a) {
        Poly r(m, 0);
        for (int i = 0; i < m; ++i) {
            r[i] = a % p;
            a /= static_cast<std::uint32_t>(p);
        }
        return r;
    };
    auto from_poly = [&](const Poly& a) {
        std::uint64_t r = 0;
        for (int i = static_cast<int>(a.size()) - 1; i >= 0; --i) r = r * p + a[i];
        return static_cast<std::uint32_t>(r);
    };

    exp_.assign(q_ - 1, 0);
    log_.assign(q_, 0);
    const auto factors = prime_factors(q_ - 1);
    for (std::uint32_t cand = (q_ == 2 ? 1 : 2); cand < q_; ++cand) {
        Poly g = to_poly(cand);
        bool primitive = true;
        for (std::uint64_t r : factors) {
            Poly h = poly_powmod(g, (q_ - 1) / r, modulus_, F);
            trim(h);
            if (h.size() == 1 && h[0] == 1) {
                primitive = false;
                break;
            }
        }
        if (!primitive) continue;
        Poly cur{1};
        for (std::uint32_t k = 0; k < q_ - 1; ++k) {
            Poly c = cur;
            c.resize(m, 0);
            std::uint32_t v = from_poly(c);
            exp_[k] = v;
            log_[v] = k;
            cur = poly_mulmod(cur, g, modulus_, F);
        }
        break;
    }
}

std::uint32_t FiniteField::add(std::uint32_t a, std::uint32_t b) const {
    std::uint32_t r = 0, scale = 1;
    const auto P = static_cast<std::uint32_t>(p_);
    while (a || b) {
        std::uint32_t d = a % P + b % P;
        if (d >= P) d -= P;
        r += d * scale;
        scale *= P;
        a /= P;
        b /= P;
    }
    return r;
}

std::uint32_t FiniteField::neg(std::uint32_t a) const {
    std::uint32_t r = 0, scale = 1;
    const auto P = static_cast<std::uint32_t>(p_);
    while (a) {
        std::uint32_t d = a % P;
        r += (d == 0 ? 0 : P - d) * scale;
        scale *= P;
        a /= P;
    }
    return r;
}

std::uint32_t FiniteField::mul(std::uint32_t a, std::uint32_t b) const {
    if (a == 0 || b == 0) return 0;
    std::uint64_t k = static_cast<std::uint64_t>(log_[a]) + log_[b];
    if (k >= q_ - 1) k -= q_ - 1;
    return exp_[k];
}

std::uint32_t FiniteField::pow(std::uint32_t a, std::uint64_t e) const {
    if (e == 0) return 1;
    if (a == 0) return 0;
    return exp_[(static_cast<unsigned __int128>(log_[a]) * e) % (q_ - 1)];
}

std::uint32_t FiniteField::from_int(std::int64_t c) const {
    std::int64_t P = static_cast<std::int64_t>(p_);
    return static_cast<std::uint32_t>(((c % P) + P) % P);
}

std::uint32_t FiniteField::eval(const std::vector<std::int64_t>& coeffs, std::uint32_t x) const {
    std::uint32_t r = 0;
    for (int i = static_cast<int>(coeffs.size()) - 1; i >= 0; --i) r = add(mul(r, x), from_int(coeffs[i]));
    return r;
}

// ---------------------------------------------------------------- point counting

namespace {

// Number of t in F_q^* with t^e = g(x), for every x.
std::vector<std::uint64_t> factor_weights(const FiniteField& K, const CurveFactor& f) {
    const std::uint32_t q = K.q();
    std::vector<std::uint64_t> w(q, 1);
    if (!f.is_cover()) return w;
    const std::uint64_t d = std::gcd<std::uint64_t>(static_cast<std::uint64_t>(f.e), q - 1);
    for (std::uint32_t x = 0; x < q; ++x) {
        std::uint32_t c = K.eval(f.g, x);
        w[x] = (c != 0 && K.log(c) % d == 0) ? d : 0;
    }
    return w;
}

struct CountSetup {
    std::vector<std::vector<std::uint64_t>> weights;
    std::uint64_t q = 0;
    std::uint64_t total = 1;
};

CountSetup setup(const VarietyPresentation& pres, std::uint64_t p, int m) {
    if (pres.dim() > 2) throw DomainError("count_points supports dimension <= 2");
    CountSetup S;
    FiniteField K(p, m);
    S.q = K.q();
    for (int i = 0; i < pres.dim(); ++i) {
        if (S.total > kPointCountGuard / S.q) throw DomainError("count_points: size guard exceeded");
        S.total *= S.q;
    }
    for (const auto& f : pres.factors()) S.weights.push_back(factor_weights(K, f));
    return S;
}

inline std::uint64_t tuple_weight(const CountSetup& S, std::uint64_t idx) {
    std::uint64_t w = 1;
    for (const auto& wf : S.weights) {
        w *= wf[idx % S.q];
        idx /= S.q;
    }
    return w;
}

}  // namespace

std::uint64_t count_points_serial(const VarietyPresentation& pres, std::uint64_t p, int m) {
    CountSetup S = setup(pres, p, m);
    std::uint64_t sum = 0;
    for (std::uint64_t idx = 0; idx < S.total; ++idx) sum += tuple_weight(S, idx);
    return sum;
}

std::uint64_t count_points(const VarietyPresentation& pres, std::uint64_t p, int m) {
    CountSetup S = setup(pres, p, m);
    std::uint64_t sum = 0;
    const auto total = static_cast<std::int64_t>(S.total);
#pragma omp parallel for reduction(+ : sum) schedule(static)
    for (std::int64_t idx = 0; idx < total; ++idx) sum += tuple_weight(S, static_cast<std::uint64_t>(idx));
    return sum;
}

std::uint64_t count_points_naive(const VarietyPresentation& pres, std::uint64_t p, int m) {
    FiniteField K(p, m);
    const std::uint64_t q = K.q();
    const int n = pres.nvars();
    std::uint64_t total = 1;
    for (int i = 0; i < n; ++i) {
        if (total > kPointCountGuard / q) throw DomainError("count_points_naive: size guard exceeded");
        total *= q;
    }
    std::uint64_t count = 0;
    std::vector<std::uint32_t> pt(n);
    for (std::uint64_t idx = 0; idx < total; ++idx) {
        std::uint64_t r = idx;
        for (int i = 0; i < n; ++i) {
            pt[i] = static_cast<std::uint32_t>(r % q);
            r /= q;
        }
        bool ok = true;
        for (int f = 0; f < pres.dim() && ok; ++f) {
            const auto& F = pres.factors()[f];
            if (!F.is_cover()) continue;
            std::uint32_t x = pt[pres.x_var(f)], t = pt[pres.t_var(f)];
            ok = t != 0 && K.pow(t, static_cast<std::uint64_t>(F.e)) == K.eval(F.g, x);
        }
        if (ok) ++count;
    }
    return count;
}

}  // namespace dagger
