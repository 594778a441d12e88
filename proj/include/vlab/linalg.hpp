#pragma once

#include "vlab/rational.hpp"

#include <cstddef>
#include <map>
#include <utility>
#include <vector>

namespace vlab {

using RatVector = std::vector<Rational>;

/// Sparse rational matrix keyed by (row, col). Zero entries are never stored.
class RatMatrix {
public:
    RatMatrix() = default;
    RatMatrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols) {}

    static RatMatrix identity(std::size_t n);
    static RatMatrix from_rows(const std::vector<RatVector>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nonzeros() const { return entries_.size(); }
    bool is_zero() const { return entries_.empty(); }

    Rational at(std::size_t r, std::size_t c) const;
    void set(std::size_t r, std::size_t c, const Rational& v);
    void add(std::size_t r, std::size_t c, const Rational& v);

    const std::map<std::pair<std::size_t, std::size_t>, Rational>& entries() const { return entries_; }

    RatVector apply(const RatVector& v) const;
    RatMatrix transpose() const;
    RatMatrix scaled(const Rational& s) const;

    friend RatMatrix operator*(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator+(const RatMatrix& a, const RatMatrix& b);
    friend RatMatrix operator-(const RatMatrix& a, const RatMatrix& b);
    friend bool operator==(const RatMatrix& a, const RatMatrix& b) {
        return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.entries_ == b.entries_;
    }

private:
    std::size_t rows_ = 0, cols_ = 0;
    std::map<std::pair<std::size_t, std::size_t>, Rational> entries_;
};

struct RankKernel {
    std::size_t rank = 0;
    /// Basis of the null space, one vector per free column, read off the reduced echelon form.
    std::vector<RatVector> kernel_basis;
};

/// Exact Gaussian elimination. Dense storage below 64x64, row-sparse storage above.
RankKernel matrix_rank_kernel(const RatMatrix& m);

/// Rank only; skips kernel extraction (same elimination).
std::size_t matrix_rank(const RatMatrix& m);

struct LinearSolution {
    bool consistent = false;
    RatVector particular;              // one solution of A x = rhs when consistent
    std::vector<RatVector> null_space; // basis of ker A
};

/// Solves A x = rhs exactly.
LinearSolution solve_linear(const RatMatrix& a, const RatVector& rhs);

namespace detail {
RankKernel rank_kernel_dense(const RatMatrix& m);
RankKernel rank_kernel_sparse(const RatMatrix& m, bool want_kernel = true);
}  // namespace detail

}  // namespace vlab
