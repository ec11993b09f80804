#include "dagger/linalg.hpp"

#include <algorithm>

namespace dagger {

void eliminate_rows_serial(Matrix& rows, const std::vector<std::size_t>& targets,
                           const std::vector<std::uint64_t>& factors, const std::vector<std::uint64_t>& pivot_row,
                           const Zmod& R) {
    for (std::size_t t = 0; t < targets.size(); ++t) {
        auto& row = rows[targets[t]];
        const std::uint64_t f = factors[t];
        for (std::size_t c = 0; c < row.size(); ++c)
            if (pivot_row[c]) row[c] = R.sub(row[c], R.mul(f, pivot_row[c]));
    }
}

void eliminate_rows(Matrix& rows, const std::vector<std::size_t>& targets, const std::vector<std::uint64_t>& factors,
                    const std::vector<std::uint64_t>& pivot_row, const Zmod& R) {
    const auto n = static_cast<std::int64_t>(targets.size());
    // Small batches are not worth a parallel region.
#pragma omp parallel for schedule(static) if (n * static_cast<std::int64_t>(pivot_row.size()) > 4096)
    for (std::int64_t t = 0; t < n; ++t) {
        auto& row = rows[targets[t]];
        const std::uint64_t f = factors[t];
        for (std::size_t c = 0; c < row.size(); ++c)
            if (pivot_row[c]) row[c] = R.sub(row[c], R.mul(f, pivot_row[c]));
    }
}

HowellForm::HowellForm(const Matrix& m, const Zmod& R, bool parallel) : R_(R), ncols_(m.empty() ? 0 : m[0].size()) {
    Matrix work;
    for (const auto& r : m) {
        if (static_cast<int>(r.size()) != ncols_) throw DomainError("ragged matrix");
        std::vector<std::uint64_t> row(r.size());
        bool nz = false;
        for (std::size_t c = 0; c < r.size(); ++c) {
            row[c] = r[c] % R.m;
            nz = nz || row[c];
        }
        if (nz) work.push_back(std::move(row));
    }
    std::size_t cur = 0;
    std::vector<int> pivot_vals;
    for (int c = 0; c < ncols_ && cur < work.size(); ++c) {
        std::size_t best = work.size();
        int best_v = R.s;
        for (std::size_t r = cur; r < work.size(); ++r) {
            int v = R.valuation(work[r][c]);
            if (v < best_v) {
                best_v = v;
                best = r;
            }
        }
        if (best == work.size()) continue;
        std::swap(work[cur], work[best]);
        auto& piv = work[cur];
        const std::uint64_t pv = ipow(R.p, best_v);
        const std::uint64_t uinv = R.inv(piv[c] / pv);
        for (auto& x : piv) x = R.mul(x, uinv);
        std::vector<std::size_t> targets;
        std::vector<std::uint64_t> factors;
        for (std::size_t r = cur + 1; r < work.size(); ++r) {
            if (work[r][c] == 0) continue;
            targets.push_back(r);
            factors.push_back(work[r][c] / pv);
        }
        if (parallel)
            eliminate_rows(work, targets, factors, piv, R);
        else
            eliminate_rows_serial(work, targets, factors, piv, R);
        if (best_v > 0) {
            // annihilator row p^(s-v) * pivot row, zero in column c
            std::vector<std::uint64_t> ann(ncols_);
            const std::uint64_t scale = ipow(R.p, R.s - best_v);
            bool nz = false;
            for (int k = 0; k < ncols_; ++k) {
                ann[k] = R.mul(work[cur][k], scale);
                nz = nz || ann[k];
            }
            if (nz) work.push_back(std::move(ann));
        }
        pivot_cols_.push_back(c);
        pivot_vals.push_back(best_v);
        ++cur;
    }
    work.resize(cur);
    // reduce entries above each pivot into [0, p^v)
    for (std::size_t i = 0; i < cur; ++i) {
        const int c = pivot_cols_[i];
        const std::uint64_t pv = ipow(R.p, pivot_vals[i]);
        for (std::size_t j = 0; j < i; ++j) {
            std::uint64_t q = work[j][c] / pv;
            if (q == 0) continue;
            for (int k = 0; k < ncols_; ++k) work[j][k] = R.sub(work[j][k], R.mul(q, work[i][k]));
        }
    }
    rows_ = std::move(work);
}

int HowellForm::length() const {
    int len = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i) len += R_.s - R_.valuation(rows_[i][pivot_cols_[i]]);
    return len;
}

int HowellForm::free_rank() const {
    int r = 0;
    for (std::size_t i = 0; i < rows_.size(); ++i)
        if (rows_[i][pivot_cols_[i]] == 1) ++r;
    return r;
}

bool HowellForm::contains(const std::vector<std::uint64_t>& v0) const {
    if (static_cast<int>(v0.size()) != ncols_) throw DomainError("vector length mismatch");
    std::vector<std::uint64_t> v(v0.size());
    for (std::size_t i = 0; i < v0.size(); ++i) v[i] = v0[i] % R_.m;
    std::size_t next = 0;
    for (int c = 0; c < ncols_; ++c) {
        if (next < rows_.size() && pivot_cols_[next] == c) {
            const std::uint64_t piv = rows_[next][c];
            if (v[c] % piv != 0) return false;
            const std::uint64_t q = v[c] / piv;
            for (int k = 0; k < ncols_; ++k) v[k] = R_.sub(v[k], R_.mul(q, rows_[next][k]));
            ++next;
        } else if (v[c] != 0) {
            return false;
        }
    }
    return true;
}

HowellForm left_kernel(const Matrix& m, const Zmod& R) {
    const std::size_t nr = m.size();
    const std::size_t nc = nr ? m[0].size() : 0;
    Matrix aug(nr, std::vector<std::uint64_t>(nc + nr, 0));
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 0; j < nc; ++j) aug[i][j] = m[i][j] % R.m;
        aug[i][nc + i] = 1 % R.m;
    }
    HowellForm H(aug, R);
    Matrix ker;
    for (std::size_t i = 0; i < H.rows().size(); ++i) {
        if (H.pivot_cols()[i] < static_cast<int>(nc)) continue;
        ker.emplace_back(H.rows()[i].begin() + nc, H.rows()[i].end());
    }
    if (ker.empty()) ker.push_back(std::vector<std::uint64_t>(nr, 0));
    return HowellForm(ker, R);
}

// ---------------------------------------------------------------- PadicEchelon

SparseVec sparse_axpy(const SparseVec& v, const PadicNumber& a, const SparseVec& w) {
    SparseVec r = v;
    for (const auto& [c, x] : w) {
        auto it = r.find(c);
        PadicNumber t = a * x;
        if (it == r.end())
            r.emplace(c, -t);
        else
            it->second = it->second - t;
    }
    return r;
}

namespace {

void drop_zeros(SparseVec& v) {
    for (auto it = v.begin(); it != v.end();) {
        if (it->second.is_zero())
            it = v.erase(it);
        else
            ++it;
    }
}

// v -= a * w in place
void sub_in_place(SparseVec& v, const PadicNumber& a, const SparseVec& w) {
    for (const auto& [c, x] : w) {
        auto it = v.find(c);
        PadicNumber t = a * x;
        if (it == v.end())
            v.emplace(c, -t);
        else
            it->second = it->second - t;
    }
}

}  // namespace

PadicEchelon::PadicEchelon(std::uint64_t p, int precision_guard) : p_(p), guard_(precision_guard) {}

bool PadicEchelon::add_row(const SparseVec& row, int tag) {
    Row r;
    r.entries = row;
    drop_zeros(r.entries);
    r.combo[tag] = PadicNumber::from_integer(p_, 1, 1 << 20);
    for (;;) {
        if (r.entries.empty()) {
            relations_.push_back(std::move(r.combo));
            return false;
        }
        const int c = r.entries.begin()->first;
        auto it = pivots_.find(c);
        if (it == pivots_.end()) {
            const PadicNumber& lead = r.entries.begin()->second;
            if (lead.relprec() < guard_) throw PrecisionError("pivot indistinguishable from zero at working precision");
            max_pivot_val_ = std::max(max_pivot_val_, lead.valuation());
            pivots_.emplace(c, std::move(r));
            return true;
        }
        if (r.entries.begin()->second.valuation() < it->second.entries.begin()->second.valuation()) std::swap(r, it->second);
        const Row& P = it->second;
        PadicNumber f = r.entries.begin()->second / P.entries.begin()->second;
        sub_in_place(r.entries, f, P.entries);
        r.entries.erase(c);
        drop_zeros(r.entries);
        sub_in_place(r.combo, f, P.combo);
        drop_zeros(r.combo);
    }
}

PadicEchelon::Reduction PadicEchelon::reduce(const SparseVec& v) const {
    Reduction out;
    SparseVec w = v;
    for (auto it = w.begin(); it != w.end();) {
        const int c = it->first;
        auto pit = pivots_.find(c);
        if (pit == pivots_.end()) {
            ++it;
            continue;
        }
        const auto& P = pit->second;
        PadicNumber f = it->second / P.entries.begin()->second;
        for (auto pe = std::next(P.entries.begin()); pe != P.entries.end(); ++pe) {
            auto wit = w.find(pe->first);
            PadicNumber t = f * pe->second;
            if (wit == w.end())
                w.emplace(pe->first, -t);
            else
                wit->second = wit->second - t;
        }
        for (const auto& [tag, x] : P.combo) {
            auto cit = out.combination.find(tag);
            PadicNumber t = f * x;
            if (cit == out.combination.end())
                out.combination.emplace(tag, t);
            else
                cit->second = cit->second + t;
        }
        it = w.erase(it);
    }
    out.remainder = std::move(w);
    return out;
}

std::vector<std::pair<SparseVec, SparseVec>> PadicEchelon::rows_from(int first_col) const {
    std::vector<std::pair<SparseVec, SparseVec>> out;
    for (auto it = pivots_.lower_bound(first_col); it != pivots_.end(); ++it)
        out.emplace_back(it->second.entries, it->second.combo);
    return out;
}

}  // namespace dagger
