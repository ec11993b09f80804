#include "dagger/acceptance.hpp"

#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "dagger/auto_group.hpp"
#include "dagger/local_cohomology.hpp"

namespace dagger {

void PropertyTally::record(bool ok, const std::string& what) {
    ++checked;
    if (!ok) {
        if (failed == 0) first_failure = what;
        ++failed;
    }
}

bool BatteryResult::pass() const {
    for (const auto& t : properties)
        if (!t.pass()) return false;
    return true;
}

PropertyTally& BatteryResult::tally(const std::string& name) {
    for (auto& t : properties)
        if (t.name == name) return t;
    properties.push_back(PropertyTally{name, 0, 0, {}});
    return properties.back();
}

void BatteryResult::merge(const BatteryResult& o) {
    for (const auto& t : o.properties) {
        auto& mine = tally(t.name);
        if (mine.failed == 0 && t.failed > 0) mine.first_failure = t.first_failure;
        mine.checked += t.checked;
        mine.failed += t.failed;
    }
    notes.insert(notes.end(), o.notes.begin(), o.notes.end());
}

std::string BatteryResult::summary() const {
    std::ostringstream os;
    bool first = true;
    for (const auto& t : properties) {
        os << (first ? "" : ", ") << t.name << " " << (t.checked - t.failed) << "/" << t.checked;
        first = false;
    }
    return os.str();
}

namespace {

// Runs body, counting any library error as a failure of that property.
template <class F>
void check(BatteryResult& r, const std::string& name, const std::string& label, F&& body) {
    try {
        r.tally(name).record(body(), label);
    } catch (const Error& e) {
        r.tally(name).record(false, label + ": " + e.what());
    }
}

TruncSeries random_poly(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int deg, std::uint64_t scale = 1,
                        bool sparse = false) {
    const Zmod R = pol.ring();
    TruncSeries f(pol, n);
    for (const auto& e : multi_indices(n, deg))
        if (!sparse || rng() % 2) f.add_term(e, R.mul(rng() % R.m, scale % R.m));
    return f;
}

GroupElement random_element(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int deg) {
    std::vector<TruncSeries> a;
    for (int i = 0; i < n; ++i) a.push_back(random_poly(rng, pol, n, deg, pol.p, true));
    return theta(pol, a);
}

DiffOperator random_op(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int ord, int A, int deg) {
    DiffOperator P(pol, n, A);
    for (const auto& a : multi_indices(n, ord)) P.set_coefficient(a, random_poly(rng, pol, n, deg));
    return P;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string join(const std::vector<int>& v) {
    std::string s = "(";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s + ")";
}

std::int64_t binom(int a, int b) {
    std::int64_t r = 1;
    for (int i = 1; i <= b; ++i) r = r * (a - b + i) / i;
    return r;
}

CriterionResult battery_criterion(int id, const std::string& name, double limit,
                                  const std::function<BatteryResult()>& run) {
    CriterionResult c{id, name, false, 0, limit, ""};
    const auto t0 = std::chrono::steady_clock::now();
    try {
        BatteryResult r = run();
        c.correct = r.pass();
        c.detail = r.summary();
        for (const auto& t : r.properties)
            if (!t.pass()) c.detail += "; first " + t.name + " failure: " + t.first_failure;
    } catch (const std::exception& e) {
        c.detail = std::string("error: ") + e.what();
    }
    c.seconds = seconds_since(t0);
    return c;
}

}  // namespace

BatteryResult group_battery(std::uint64_t p, int s, int n, int count, std::uint64_t seed, int deg) {
    BatteryResult r;
    for (const char* name : {"bijection", "group_axioms", "inner_derivation", "inverse", "order_bound", "jacobian",
                             "factorization", "cocycle"})
        r.tally(name);
    if (n == 0) {
        r.notes.push_back("n = 0: the group is trivial and every identity holds vacuously");
        return r;
    }
    if (n < 0 || n > 3) throw DomainError("group battery: n must be in 0..3");
    if (s < 2) throw DomainError("group battery: need s >= 2");
    if (count < 1) throw DomainError("group battery: need at least one element");
    const int D = 2;  // monomial window of the action checks
    const PrecisionPolicy pol(p, s, std::max(D, deg) + 1, 0);
    const PrecisionPolicy wide = unbounded(pol);
    const Zmod R = pol.ring();
    std::mt19937_64 rng(seed);

    std::vector<GroupElement> els;
    for (int k = 0; k < count; ++k) els.push_back(random_element(rng, pol, n, deg));
    const GroupElement id = GroupElement::identity(pol, n);
    const auto window = multi_indices(n, D);

    r.notes.push_back("log cocycle precision " + std::to_string(log_cocycle(id).precision) + " of " +
                      std::to_string(s) + " digits");
    for (int k = 0; k < count; ++k) {
        const GroupElement& g = els[k];
        const GroupElement& h = els[(k + 1) % count];
        const GroupElement& l = els[(k + 2) % count];
        const std::string label = "element " + std::to_string(k);

        check(r, "bijection", label, [&] {
            if (delta(theta(pol, g.a())) != g.a()) return false;
            if (!homomorphism_check(g, D)) return false;
            auto act = [&](const Exp& b) { return g.act(TruncSeries::monomial(wide, n, b, 1)); };
            return theta_from_operator(extract_symbol(act, wide, n, s - 1)) == g;
        });
        check(r, "group_axioms", label, [&] {
            if (group_mul(group_mul(g, h), l) != group_mul(g, group_mul(h, l))) return false;
            if (group_mul(g, id) != g || group_mul(id, g) != g) return false;
            const GroupElement gh = group_mul(g, h);
            for (const auto& e : window) {
                TruncSeries m = TruncSeries::monomial(wide, n, e, 1);
                if (gh.act(m) != g.act(h.act(m))) return false;
            }
            return true;
        });
        check(r, "inner_derivation", label, [&] {
            const auto dgh = delta(group_mul(g, h));
            for (int i = 0; i < n; ++i)
                if (dgh[i] != g.a()[i] + g.act(h.a()[i])) return false;
            return true;
        });
        check(r, "inverse", label, [&] {
            const GroupElement gi = group_inv(g);
            if (group_mul(g, gi) != id || group_mul(gi, g) != id) return false;
            for (int i = 0; i < n; ++i) {
                TruncSeries x = TruncSeries::variable(wide, n, i);
                if (gi.act(g.act(x)) != x) return false;
            }
            return true;
        });
        check(r, "order_bound", label, [&] {
            std::vector<TruncSeries> tests;
            for (int j = 0; j < s; ++j) tests.push_back(random_poly(rng, pol, n, 1));
            for (int sp = 1; sp <= s; ++sp)
                if (!order_bound_check(g, sp, tests, D)) return false;
            return true;
        });
        check(r, "jacobian", label, [&] { return jacobian_identity(g).equal; });
        check(r, "factorization", label, [&] {
            const auto fs = axis_factorization(g);
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    if (i != j && !fs[i].a()[j].is_zero()) return false;
            return product(fs) == g;
        });
        check(r, "cocycle", label, [&] {
            if (!cocycle_law_check(g, h)) return false;
            std::vector<TruncSeries> c;
            for (int i = 0; i < n; ++i) c.push_back(TruncSeries::constant(pol, n, R.mul(p, rng() % R.m)));
            return log_cocycle(theta(pol, c)).value.is_zero();
        });
    }
    return r;
}

BatteryResult operator_battery(std::uint64_t p, int s, int pairs, std::uint64_t seed) {
    BatteryResult r;
    for (const char* name : {"symbol_round_trip", "composition", "transpose", "echelon"}) r.tally(name);
    const PrecisionPolicy pol(p, s, 12, 0);
    std::mt19937_64 rng(seed);
    const int A = 4;
    for (int k = 0; k < pairs; ++k) {
        const int n = 1 + k % 2;
        const DiffOperator P = random_op(rng, pol, n, 2, A, 2);
        const DiffOperator Q = random_op(rng, pol, n, 2, A, 2);
        const std::string label = "pair " + std::to_string(k);
        check(r, "composition", label, [&] {
            const DiffOperator C = compose(P, Q);
            for (const auto& b : multi_indices(n, 3)) {
                TruncSeries m = TruncSeries::monomial(pol, n, b, 1);
                if (apply(C, m) != apply(P, apply(Q, m))) return false;
            }
            return true;
        });
        if (k % 4 == 0) {
            check(r, "symbol_round_trip", label, [&] {
                auto act = [&](const Exp& b) { return apply(P, TruncSeries::monomial(pol, n, b, 1)); };
                return extract_symbol(act, pol, n, A) == P;
            });
            check(r, "transpose", label, [&] {
                if (transpose(transpose(P)) != P) return false;
                return transpose(compose(P, Q)) == compose(transpose(Q), transpose(P));
            });
        }
    }
    // operators of translations x -> x + a have symbol a^alpha; their echelon coefficients obey the lambda bound
    const PrecisionPolicy epol(p, std::max(s, 6), 40, 0);
    for (int trial = 0; trial < 4; ++trial) {
        std::vector<TruncSeries> a{random_poly(rng, epol, 2, 2, p), random_poly(rng, epol, 2, 2, p)};
        DiffOperator G(epol, 2, 8);
        for (const auto& al : multi_indices(2, 8)) G.set_coefficient(al, a[0].pow(al[0]) * a[1].pow(al[1]));
        for (int h : {0, 1, 2}) {
            check(r, "echelon", "trial " + std::to_string(trial) + ", h = " + std::to_string(h), [&] {
                const EchelonSymbol E = echelon_rewrite(G, h);
                const Rational lam = echelon_lambda(p, h);
                for (const auto& [beta, b] : E.b) {
                    if (b.is_zero()) continue;
                    const Rational need = lam * multi_degree(beta, 2);
                    // ceil of a nonnegative rational
                    const std::int64_t c = (need.numerator() + need.denominator() - 1) / need.denominator();
                    if (b.min_valuation() < c) return false;
                }
                return plain_symbol(E) == G;
            });
        }
    }
    return r;
}

BatteryResult localcoh_battery(const LocalSetup& setup, const PrecisionPolicy& pol) {
    BatteryResult r;
    const int n = setup.n;
    const int q = static_cast<int>(setup.z.size());
    const std::string tag = "n = " + std::to_string(n) + ", q = " + std::to_string(q);
    check_adapted(setup.z);

    check(r, "smooth", tag, [&] { return smooth_complete_intersection(setup.z); });
    bool coordinates = true;
    for (int i = 0; i < q; ++i)
        if (setup.z[i] != TruncSeries::variable(setup.z[i].policy(), n, i)) coordinates = false;
    if (coordinates) {
        try {
            const AnnihilatorReport a = annihilator_check(setup.z, pol, setup.A);
            r.tally("annihilators_meromorphic").record(a.meromorphic, tag);
            r.tally("annihilators_top").record(a.top, tag);
        } catch (const Error& e) {
            r.tally("annihilators_top").record(false, tag + ": " + e.what());
        }
    } else {
        r.notes.push_back("annihilators skipped (" + tag + "): z is not a coordinate system");
    }
    check(r, "determinant_identity", tag, [&] {
        const CoordinateChange c = change_of_coordinates(setup.z, setup.z, pol);
        return c.equal && c.det == TruncSeries::constant(c.det.policy(), n, 1);
    });
    for (std::size_t k = 0; k < setup.z_prime.size(); ++k) {
        const std::string label = tag + ", change " + std::to_string(k);
        try {
            r.tally("coordinate_change").record(change_of_coordinates(setup.z, setup.z_prime[k], pol).equal, label);
        } catch (const DomainError& e) {
            r.tally("coordinate_change").record(false, label + ": " + e.what());
        }
    }
    if (q <= 2 && n <= 3) {
        check(r, "purity", tag, [&] {
            const PurityReport pr = pure_dims(setup.z, pol);
            std::int64_t expect = binom(pol.D + n - q, n - q);
            for (int i = 0; i < q; ++i) expect *= pol.E;
            return pr.concentrated && pr.dims[q] == expect;
        });
    } else {
        r.notes.push_back("purity skipped (" + tag + "): window computation supports q <= 2, n <= 3");
    }
    return r;
}

namespace {

// z'_i = (1 + p r) x_i + p (other x_j, j < q) + random degree-2 terms in the ideal (x_1..x_q).
std::vector<TruncSeries> unipotent_change(std::mt19937_64& rng, const PrecisionPolicy& pol, int n, int q) {
    const Zmod R = pol.ring();
    std::vector<TruncSeries> zp;
    for (int i = 0; i < q; ++i) {
        TruncSeries f(pol, n);
        for (int j = 0; j < q; ++j) f.add_term(unit_exp(j), R.add(i == j ? 1 : 0, R.mul(pol.p, rng() % R.m)));
        for (const auto& e : multi_indices(n, 2)) {
            if (multi_degree(e, n) != 2) continue;
            bool in_ideal = false;
            for (int j = 0; j < q; ++j) in_ideal = in_ideal || e[j] > 0;
            if (in_ideal && rng() % 2) f.add_term(e, rng() % R.m);
        }
        zp.push_back(f);
    }
    return zp;
}

}  // namespace

BatteryResult localcoh_suite(std::uint64_t seed) {
    BatteryResult all;
    std::mt19937_64 rng(seed);
    struct Config {
        int n, q, changes, A;
        PrecisionPolicy pol;
    };
    const std::vector<Config> configs{
        {1, 1, 4, 3, PrecisionPolicy(5, 3, 4, 4)},
        {2, 1, 4, 3, PrecisionPolicy(5, 3, 4, 4)},
        {2, 2, 6, 3, PrecisionPolicy(5, 3, 4, 4)},
        {3, 2, 0, 2, PrecisionPolicy(5, 2, 3, 2)},
    };
    for (const auto& c : configs) {
        LocalSetup setup;
        setup.n = c.n;
        setup.A = c.A;
        for (int i = 0; i < c.q; ++i) setup.z.push_back(TruncSeries::variable(c.pol, c.n, i));
        while (static_cast<int>(setup.z_prime.size()) < c.changes) {
            auto zp = unipotent_change(rng, c.pol, c.n, c.q);
            // terms like x*y can make V(z') singular away from the origin
            if (smooth_complete_intersection(zp)) setup.z_prime.push_back(zp);
        }
        all.merge(localcoh_battery(setup, c.pol));
    }
    return all;
}

BatteryResult kernel_battery(int matrices, std::uint64_t seed) {
    BatteryResult r;
    r.tally("howell_span");
    r.tally("val_factorial");
    std::mt19937_64 rng(seed);
    std::vector<std::pair<std::uint64_t, int>> rings;
    for (std::uint64_t p : {2, 3, 5, 7, 11})
        for (int s = 1; ipow(p, s) <= 125; ++s) rings.push_back({p, s});
    for (int k = 0; k < matrices; ++k) {
        const auto [p, s] = rings[rng() % rings.size()];
        const Zmod R(p, s);
        const int m = static_cast<int>(R.m);
        const int cols = m <= 27 ? 3 : 2;
        const int nrows = 1 + static_cast<int>(rng() % 4);
        Matrix M(nrows, std::vector<std::uint64_t>(cols));
        for (auto& row : M) {
            const std::uint64_t scale = ipow(p, static_cast<int>(rng() % s));
            for (auto& x : row) x = R.mul(rng() % R.m, scale);
        }
        check(r, "howell_span", "matrix " + std::to_string(k) + " over Z/" + std::to_string(m), [&] {
            // all additive combinations of the rows, vectors encoded base m
            int total = 1;
            for (int c = 0; c < cols; ++c) total *= m;
            auto encode = [&](const std::vector<std::uint64_t>& v) {
                int code = 0;
                for (int c = cols - 1; c >= 0; --c) code = code * m + static_cast<int>(v[c]);
                return code;
            };
            auto decode = [&](int code) {
                std::vector<std::uint64_t> v(cols);
                for (int c = 0; c < cols; ++c) {
                    v[c] = static_cast<std::uint64_t>(code % m);
                    code /= m;
                }
                return v;
            };
            std::vector<char> seen(total, 0);
            std::vector<int> stack{0};
            seen[0] = 1;
            int size = 1;
            while (!stack.empty()) {
                auto v = decode(stack.back());
                stack.pop_back();
                for (const auto& row : M) {
                    std::vector<std::uint64_t> w(cols);
                    for (int c = 0; c < cols; ++c) w[c] = R.add(v[c], row[c]);
                    const int code = encode(w);
                    if (!seen[code]) {
                        seen[code] = 1;
                        ++size;
                        stack.push_back(code);
                    }
                }
            }
            const HowellForm H(M, R, true);
            if (!(H == HowellForm(M, R, false))) return false;
            if (ipow(p, H.length()) != static_cast<std::uint64_t>(size)) return false;
            for (int code = 0; code < total; ++code)
                if (H.contains(decode(code)) != static_cast<bool>(seen[code])) return false;
            return true;
        });
    }
    for (std::uint64_t p : {2, 3, 5, 7, 11, 13}) {
        std::int64_t direct = 0;
        for (std::uint64_t m = 0; m <= 200; ++m) {
            for (std::uint64_t k = m; m > 0 && k % p == 0; k /= p) ++direct;
            check(r, "val_factorial", "p = " + std::to_string(p) + ", m = " + std::to_string(m),
                  [&] { return val_factorial(p, m) == direct; });
        }
    }
    return r;
}

std::vector<std::pair<std::string, VarietyPresentation>> acceptance_varieties() {
    return {
        {"A^1", VarietyPresentation::affine_space(1)},
        {"A^2", VarietyPresentation::affine_space(2)},
        {"G_m", VarietyPresentation::torus(1)},
        {"G_m^2", VarietyPresentation::torus(2)},
        {"A^1 - {0}", VarietyPresentation::punctured_line({0})},
        {"A^1 - {0,1}", VarietyPresentation::punctured_line({0, 1})},
        {"A^1 - {0,1,2}", VarietyPresentation::punctured_line({0, 1, 2})},
        {"y^2 = x^3 - x", VarietyPresentation::hyperelliptic_patch({0, -1, 0, 1})},
        {"y^2 = x^3 + x + 1", VarietyPresentation::hyperelliptic_patch({1, 1, 0, 1})},
    };
}

CriterionResult criterion_zeta() {
    CriterionResult c{1, "zeta correctness", false, 0, 60, ""};
    const auto t0 = std::chrono::steady_clock::now();
    int runs = 0, good = 0;
    std::string failures;
    for (std::uint64_t p : {5, 7, 11, 13}) {
        // m = 1..4, or 1..3 when p^8 > 10^8
        const int M = ipow(p, 8) > 100000000ULL ? 3 : 4;
        for (const auto& [name, V] : acceptance_varieties()) {
            ++runs;
            try {
                const ZetaReport z = zeta(V, p);
                bool ok = z.pass && static_cast<int>(z.recovered.size()) >= M && static_cast<int>(z.oracle.size()) >= M;
                for (int m = 0; ok && m < M; ++m) ok = z.recovered[m] == z.oracle[m];
                if (ok) {
                    ++good;
                } else {
                    failures += " " + name + "@" + std::to_string(p);
                }
            } catch (const Error& e) {
                failures += " " + name + "@" + std::to_string(p) + " (" + e.what() + ")";
            }
        }
    }
    c.correct = good == runs;
    c.detail = std::to_string(good) + "/" + std::to_string(runs) + " (variety, p) runs exact";
    if (!failures.empty()) c.detail += "; failed:" + failures;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult criterion_homotopy() {
    CriterionResult c{2, "Poincare lemma / homotopy invariance", false, 0, 10, ""};
    const auto t0 = std::chrono::steady_clock::now();
    const PrecisionPolicy pol(5, 4, 3, 1);
    bool ok = true;
    std::string detail;
    try {
        for (int n = 1; n <= 3; ++n) {
            const StabilityReport s = stable_betti(VarietyPresentation::affine_space(n), pol, 4, 2, false);
            std::vector<int> expect(n + 1, 0);
            expect[0] = 1;
            const bool good = s.stable && s.dims == expect;
            ok = ok && good;
            detail += "A^" + std::to_string(n) + " " + join(s.dims) + (good ? "" : " FAIL") + "; ";
        }
        const std::vector<std::pair<std::string, VarietyPresentation>> Xs{
            {"G_m", VarietyPresentation::torus(1)},
            {"A^1-{0}", VarietyPresentation::punctured_line({0})},
            {"A^1-{0,1}", VarietyPresentation::punctured_line({0, 1})},
            {"A^1-{0,1,2}", VarietyPresentation::punctured_line({0, 1, 2})},
        };
        for (const auto& [name, X] : Xs) {
            const HomotopyReport h = homotopy_check(X, pol);
            const StabilityReport sx = stable_betti(X, pol, 4, 2, false);
            const StabilityReport sxa =
                stable_betti(VarietyPresentation::product(X, VarietyPresentation::affine_space(1)), pol, 4, 2, false);
            const bool good = h.pass && sx.stable && sxa.stable;
            ok = ok && good;
            detail += name + " x A^1 " + join(h.dims_XA1) + (good ? "" : " FAIL") + "; ";
        }
    } catch (const Error& e) {
        ok = false;
        detail += std::string("error: ") + e.what();
    }
    c.correct = ok;
    c.detail = detail + "stable under (D+4, E+2)";
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult criterion_gysin() {
    CriterionResult c{3, "Gysin bookkeeping", false, 0, 10, ""};
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    try {
        const std::vector<std::vector<std::int64_t>> point_sets{{0}, {0, 2}, {0, 1, 3}};
        for (const auto& pts : point_sets) {
            const GysinReport g = gysin_points(pts, PrecisionPolicy(7, 5, 6, 3));
            const int r = static_cast<int>(pts.size());
            const bool good = g.pass && g.alternating_sum == 0 && g.dims_U.size() > 1 && g.dims_U[1] == r;
            ok = ok && good;
            detail += "A^1 minus " + std::to_string(r) + " points: H^1(U) = " +
                      (g.dims_U.size() > 1 ? std::to_string(g.dims_U[1]) : "?") + (good ? "" : " FAIL") + "; ";
        }
        const GysinReport a = gysin_axis(PrecisionPolicy(5, 5, 4, 2));
        const bool good = a.pass && a.alternating_sum == 0 && a.dims_U.size() > 1 && a.dims_U[1] == 1;
        ok = ok && good;
        detail += "A^2 minus axis: H^1(U) = " + (a.dims_U.size() > 1 ? std::to_string(a.dims_U[1]) : "?") +
                  (good ? "" : " FAIL");
    } catch (const Error& e) {
        ok = false;
        detail += std::string("error: ") + e.what();
    }
    c.correct = ok;
    c.detail = detail;
    c.seconds = seconds_since(t0);
    return c;
}

CriterionResult criterion_operators(std::uint64_t seed) {
    return battery_criterion(4, "operator calculus suite", 30, [&] {
        BatteryResult r = operator_battery(5, 4, 100, seed);
        r.merge(operator_battery(7, 4, 100, seed + 1));
        return r;
    });
}

CriterionResult criterion_group(std::uint64_t seed) {
    return battery_criterion(5, "group suite", 30, [&] {
        BatteryResult r;
        for (std::uint64_t p : {5, 7})
            for (int n : {1, 2}) r.merge(group_battery(p, 4, n, 100, seed + 10 * p + n));
        return r;
    });
}

CriterionResult criterion_localcoh(std::uint64_t seed) {
    return battery_criterion(6, "local cohomology suite", 20, [&] { return localcoh_suite(seed); });
}

CriterionResult criterion_kernels(std::uint64_t seed) {
    return battery_criterion(7, "kernel oracles", 10, [&] { return kernel_battery(100, seed); });
}

std::vector<CriterionResult> run_acceptance(std::uint64_t seed,
                                            const std::function<void(const CriterionResult&)>& progress) {
    std::vector<std::function<CriterionResult()>> steps{
        [] { return criterion_zeta(); },
        [] { return criterion_homotopy(); },
        [] { return criterion_gysin(); },
        [&] { return criterion_operators(seed); },
        [&] { return criterion_group(seed); },
        [&] { return criterion_localcoh(seed); },
        [&] { return criterion_kernels(seed); },
    };
    std::vector<CriterionResult> out;
    for (const auto& step : steps) {
        out.push_back(step());
        if (progress) progress(out.back());
    }
    return out;
}

std::string format_criterion(const CriterionResult& r) {
    std::ostringstream os;
    os << (r.pass() ? "PASS" : "FAIL") << " [" << r.id << "] " << r.name << " (";
    os.setf(std::ios::fixed);
    os.precision(2);
    os << r.seconds << " s / limit " << r.limit << " s): " << r.detail;
    if (r.correct && r.seconds > r.limit) os << " [over time limit]";
    return os.str();
}

}  // namespace dagger
