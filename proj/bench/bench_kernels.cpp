#include <omp.h>

#include <chrono>
#include <cstdio>
#include <functional>
#include <random>

#include <CLI11.hpp>

#include "dagger/diff_ops.hpp"
#include "dagger/ffield.hpp"
#include "dagger/linalg.hpp"

using namespace dagger;

namespace {

double best_of(int reps, const std::function<void()>& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const char* name, double serial, double parallel, bool agree) {
    std::printf("%-34s %10.4f %10.4f %8.2fx  %s\n", name, serial, parallel, parallel > 0 ? serial / parallel : 0.0,
                agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"serial vs OpenMP kernel timings"};
    int reps = 3;
    int threads = 0;
    app.add_option("--reps", reps, "repetitions (best time is reported)")->check(CLI::Range(1, 100));
    app.add_option("--threads", threads, "OpenMP threads (0: runtime default)");
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) omp_set_num_threads(threads);

    std::printf("threads: %d\n", omp_get_max_threads());
    std::printf("%-34s %10s %10s %9s\n", "kernel", "serial s", "omp s", "speedup");
    int mismatches = 0;

    {
        const auto V = VarietyPresentation::hyperelliptic_patch({1, 1, 0, 1});
        std::uint64_t a = 0, b = 0;
        const double ts = best_of(reps, [&] { a = count_points_serial(V, 13, 5); });
        const double tp = best_of(reps, [&] { b = count_points(V, 13, 5); });
        row("count_points  y^2=x^3+x+1, F_13^5", ts, tp, a == b);
        mismatches += a != b;
    }
    {
        const auto V = VarietyPresentation::torus(2);
        std::uint64_t a = 0, b = 0;
        const double ts = best_of(reps, [&] { a = count_points_serial(V, 11, 3); });
        const double tp = best_of(reps, [&] { b = count_points(V, 11, 3); });
        row("count_points  G_m^2, F_11^3", ts, tp, a == b);
        mismatches += a != b;
    }
    {
        const Zmod R(7, 6);
        std::mt19937_64 rng(5);
        const std::size_t rows = 4000, cols = 800;
        Matrix M(rows, std::vector<std::uint64_t>(cols));
        for (auto& r : M)
            for (auto& x : r) x = rng() % R.m;
        std::vector<std::size_t> targets;
        std::vector<std::uint64_t> factors;
        for (std::size_t i = 1; i < rows; ++i) {
            targets.push_back(i);
            factors.push_back(rng() % R.m);
        }
        Matrix A, B;
        const double ts = best_of(reps, [&] {
            A = M;
            eliminate_rows_serial(A, targets, factors, M[0], R);
        });
        const double tp = best_of(reps, [&] {
            B = M;
            eliminate_rows(B, targets, factors, M[0], R);
        });
        row("eliminate_rows 4000x800 mod 7^6", ts, tp, A == B);
        mismatches += !(A == B);
    }
    {
        const PrecisionPolicy pol(5, 6, 40, 0);
        std::mt19937_64 rng(9);
        const int n = 2, A = 10;
        DiffOperator P(pol, n, A);
        for (const auto& al : multi_indices(n, A)) {
            TruncSeries c(pol, n);
            for (const auto& e : multi_indices(n, 3)) c.add_term(e, rng() % pol.ring().m);
            P.set_coefficient(al, c);
        }
        auto act = [&](const Exp& b) { return apply(P, TruncSeries::monomial(pol, n, b, 1)); };
        DiffOperator X, Y;
        const double ts = best_of(reps, [&] { X = extract_symbol_serial(act, pol, n, A); });
        const double tp = best_of(reps, [&] { Y = extract_symbol(act, pol, n, A); });
        row("extract_symbol n=2, order 10", ts, tp, X == Y);
        mismatches += X != Y;
    }
    return mismatches ? 1 : 0;
}
