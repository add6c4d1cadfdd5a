// Exact sparse elimination over Q with a deterministic pivot rule.
#pragma once

#include <map>
#include <optional>
#include <vector>

#include "cf/rational.hpp"

namespace cf {

using SparseVec = std::map<int, Q>;

// Gaussian elimination of a rows x cols matrix. Pivot: the active row with the
// fewest nonzeros (lowest id on ties), then its column with the fewest active
// rows (lowest id on ties). Row operations are recorded so right-hand sides
// can be replayed later.
class Elimination {
public:
    Elimination(int rows, int cols, std::vector<SparseVec> A);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    int rank() const { return static_cast<int>(steps_.size()); }

    // Rows reduced to zero, ascending.
    const std::vector<int>& zero_rows() const { return zero_rows_; }
    // Columns that never held a pivot, ascending.
    const std::vector<int>& free_cols() const { return free_cols_; }

    // b after the recorded row operations.
    SparseVec reduce(SparseVec b) const;
    // Value of the reduced right-hand side on a zero row: a linear functional of b
    // that vanishes on the column space.
    std::map<int, Q> obstruction(const SparseVec& b) const;
    // y with y^T A = 0, the functional belonging to zero row `row`.
    SparseVec left_null(int row) const;
    // Solution with free variables set to zero, or nullopt if inconsistent.
    std::optional<SparseVec> solve(const SparseVec& b) const;
    // Kernel vector with the given free column set to 1 and other free columns 0.
    SparseVec null_vector(int free_col) const;

private:
    struct Step {
        int row, col;
        SparseVec urow;                      // pivot row at the time of pivoting
        std::vector<std::pair<int, Q>> ops;  // row_i -= f * row_pivot
    };
    SparseVec back_substitute(const SparseVec& reduced, const SparseVec& free_values) const;

    int rows_, cols_;
    std::vector<Step> steps_;
    std::vector<int> zero_rows_, free_cols_;
};

// Small dense helpers.
using DenseQ = std::vector<std::vector<Q>>;

DenseQ dense_zero(int r, int c);
DenseQ dense_identity(int n);
DenseQ dense_mul(const DenseQ& a, const DenseQ& b);
DenseQ dense_transpose(const DenseQ& a, int cols_if_empty = 0);
int dense_rank(DenseQ a);
// Basis of {x : a x = 0} as columns listed in a vector.
std::vector<std::vector<Q>> dense_nullspace(const DenseQ& a, int cols);
// Inverse of a square nonsingular matrix; nullopt if singular.
std::optional<DenseQ> dense_inverse(const DenseQ& a);

}  // namespace cf
