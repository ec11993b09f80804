#pragma once

// Exact linear algebra.
//
//   HowellForm    canonical echelon form of a matrix over Z/p^s (row module membership, ranks)
//   PadicEchelon  sparse incremental echelon over Q_p with per-entry precision, used for
//                 reductions modulo exact forms; rows remember which generators built them.

#include <cstdint>
#include <map>
#include <vector>

#include "dagger/padic.hpp"

namespace dagger {

using Matrix = std::vector<std::vector<std::uint64_t>>;

// row_j -= factor_j * pivot_row for every listed row (entries mod R.m).
// The OpenMP version and the serial reference must agree bit for bit.
void eliminate_rows(Matrix& rows, const std::vector<std::size_t>& targets, const std::vector<std::uint64_t>& factors,
                    const std::vector<std::uint64_t>& pivot_row, const Zmod& R);
void eliminate_rows_serial(Matrix& rows, const std::vector<std::size_t>& targets,
                           const std::vector<std::uint64_t>& factors, const std::vector<std::uint64_t>& pivot_row,
                           const Zmod& R);

class HowellForm {
public:
    HowellForm(const Matrix& m, const Zmod& R, bool parallel = true);

    const Matrix& rows() const { return rows_; }
    const std::vector<int>& pivot_cols() const { return pivot_cols_; }
    // log_p of the number of elements of the row module.
    int length() const;
    // Number of pivots that are units.
    int free_rank() const;
    bool contains(const std::vector<std::uint64_t>& v) const;
    bool operator==(const HowellForm& o) const { return rows_ == o.rows_; }

private:
    Zmod R_;
    int ncols_;
    Matrix rows_;
    std::vector<int> pivot_cols_;
};

// Kernel of v -> v M (row vectors) as a Howell form of the left kernel.
HowellForm left_kernel(const Matrix& m, const Zmod& R);

using SparseVec = std::map<int, PadicNumber>;

class PadicEchelon {
public:
    // Columns are processed in increasing index; a row's pivot is its lowest nonzero column.
    PadicEchelon(std::uint64_t p, int precision_guard = 1);

    // Inserts a row with the given tag; returns false when it reduced to zero, in which
    // case the accumulated combination of tags is stored as a relation.
    bool add_row(const SparseVec& row, int tag);

    struct Reduction {
        SparseVec remainder;  // entries in columns without pivot
        SparseVec combination;  // subtracted multiple of rows, expressed in tags
    };
    // Eliminates every pivot column of v.  Entries in non-pivot columns are left in the remainder.
    Reduction reduce(const SparseVec& v) const;

    bool has_pivot(int col) const { return pivots_.count(col) != 0; }
    std::size_t rank() const { return pivots_.size(); }
    const std::vector<SparseVec>& relations() const { return relations_; }
    // Rows (with their tag combinations) whose pivot column is >= first_col.
    std::vector<std::pair<SparseVec, SparseVec>> rows_from(int first_col) const;
    // Largest pivot valuation seen.
    int max_pivot_valuation() const { return max_pivot_val_; }

private:
    struct Row {
        SparseVec entries;
        SparseVec combo;
    };
    std::uint64_t p_;
    int guard_;
    std::map<int, Row> pivots_;
    std::vector<SparseVec> relations_;
    int max_pivot_val_ = 0;
};

SparseVec sparse_axpy(const SparseVec& v, const PadicNumber& a, const SparseVec& w);

}  // namespace dagger
