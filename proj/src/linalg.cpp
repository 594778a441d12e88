#include "vlab/linalg.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace vlab {

RatMatrix RatMatrix::identity(std::size_t n) {
    RatMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, Rational(1));
    return m;
}

RatMatrix RatMatrix::from_rows(const std::vector<RatVector>& rows) {
    std::size_t cols = rows.empty() ? 0 : rows.front().size();
    RatMatrix m(rows.size(), cols);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != cols) throw std::invalid_argument("ragged rows in RatMatrix::from_rows");
        for (std::size_t c = 0; c < cols; ++c) m.set(r, c, rows[r][c]);
    }
    return m;
}

Rational RatMatrix::at(std::size_t r, std::size_t c) const {
    auto it = entries_.find({r, c});
    return it == entries_.end() ? Rational(0) : it->second;
}

void RatMatrix::set(std::size_t r, std::size_t c, const Rational& v) {
    if (r >= rows_ || c >= cols_) throw std::out_of_range("RatMatrix index out of range");
    if (v.is_zero())
        entries_.erase({r, c});
    else
        entries_[{r, c}] = v;
}

void RatMatrix::add(std::size_t r, std::size_t c, const Rational& v) {
    if (v.is_zero()) return;
    if (r >= rows_ || c >= cols_) throw std::out_of_range("RatMatrix index out of range");
    auto [it, inserted] = entries_.try_emplace({r, c}, v);
    if (!inserted) {
        it->second += v;
        if (it->second.is_zero()) entries_.erase(it);
    }
}

RatVector RatMatrix::apply(const RatVector& v) const {
    if (v.size() != cols_) throw std::invalid_argument("RatMatrix::apply dimension mismatch");
    RatVector out(rows_, Rational(0));
    for (const auto& [rc, x] : entries_) out[rc.first] += x * v[rc.second];
    return out;
}

RatMatrix RatMatrix::transpose() const {
    RatMatrix t(cols_, rows_);
    for (const auto& [rc, x] : entries_) t.entries_[{rc.second, rc.first}] = x;
    return t;
}

RatMatrix RatMatrix::scaled(const Rational& s) const {
    RatMatrix out(rows_, cols_);
    if (s.is_zero()) return out;
    for (const auto& [rc, x] : entries_) out.entries_[rc] = x * s;
    return out;
}

RatMatrix operator*(const RatMatrix& a, const RatMatrix& b) {
    if (a.cols_ != b.rows_) throw std::invalid_argument("RatMatrix product dimension mismatch");
    std::vector<std::vector<std::pair<std::size_t, const Rational*>>> brows(b.rows_);
    for (const auto& [rc, x] : b.entries_) brows[rc.first].push_back({rc.second, &x});
    RatMatrix out(a.rows_, b.cols_);
    for (const auto& [rc, x] : a.entries_)
        for (const auto& [col, y] : brows[rc.second]) out.add(rc.first, col, x * *y);
    return out;
}

RatMatrix operator+(const RatMatrix& a, const RatMatrix& b) {
    if (a.rows_ != b.rows_ || a.cols_ != b.cols_) throw std::invalid_argument("RatMatrix sum dimension mismatch");
    RatMatrix out = a;
    for (const auto& [rc, x] : b.entries_) out.add(rc.first, rc.second, x);
    return out;
}

RatMatrix operator-(const RatMatrix& a, const RatMatrix& b) { return a + b.scaled(Rational(-1)); }

namespace detail {

namespace {

// Kernel vectors from a reduced echelon form given as pivot columns and the
// pivot rows restricted to free columns.
template <class RowLookup>
std::vector<RatVector> kernel_from_rref(std::size_t cols, const std::vector<std::size_t>& pivot_cols,
                                        RowLookup&& entry) {
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivot_cols) is_pivot[c] = true;
    std::vector<RatVector> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        RatVector v(cols, Rational(0));
        v[f] = Rational(1);
        for (std::size_t p = 0; p < pivot_cols.size(); ++p) v[pivot_cols[p]] = -entry(p, f);
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace

RankKernel rank_kernel_dense(const RatMatrix& m) {
    const std::size_t rows = m.rows(), cols = m.cols();
    std::vector<RatVector> a(rows, RatVector(cols, Rational(0)));
    for (const auto& [rc, x] : m.entries()) a[rc.first][rc.second] = x;

    std::vector<std::size_t> pivot_cols;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t best = rows;
        std::size_t best_bits = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = r; i < rows; ++i) {
            if (a[i][c].is_zero()) continue;
            auto bits = a[i][c].bit_size();
            if (bits < best_bits) { best = i; best_bits = bits; }
        }
        if (best == rows) continue;
        std::swap(a[r], a[best]);
        Rational inv = Rational(1) / a[r][c];
        for (std::size_t j = c; j < cols; ++j) a[r][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c].is_zero()) continue;
            Rational f = a[i][c];
            for (std::size_t j = c; j < cols; ++j)
                if (!a[r][j].is_zero()) a[i][j] -= f * a[r][j];
        }
        pivot_cols.push_back(c);
        ++r;
    }
    RankKernel out;
    out.rank = pivot_cols.size();
    out.kernel_basis = kernel_from_rref(cols, pivot_cols, [&](std::size_t p, std::size_t f) { return a[p][f]; });
    return out;
}

RankKernel rank_kernel_sparse(const RatMatrix& m, bool want_kernel) {
    using Row = std::map<std::size_t, Rational>;
    const std::size_t cols = m.cols();
    std::vector<Row> rows(m.rows());
    for (const auto& [rc, x] : m.entries()) rows[rc.first][rc.second] = x;

    // Column -> rows currently holding a nonzero there, kept in sync lazily.
    std::vector<Row> done;  // pivot rows, normalised, in pivot order
    std::vector<std::size_t> pivot_cols;
    std::vector<bool> used(rows.size(), false);

    auto sub_scaled = [](Row& target, const Row& src, const Rational& f) {
        for (const auto& [c, x] : src) {
            auto [it, ins] = target.try_emplace(c, -(f * x));
            if (!ins) {
                it->second -= f * x;
                if (it->second.is_zero()) target.erase(it);
            }
        }
    };

    for (std::size_t c = 0; c < cols; ++c) {
        std::size_t best = rows.size();
        std::size_t best_bits = std::numeric_limits<std::size_t>::max();
        std::size_t best_len = std::numeric_limits<std::size_t>::max();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            auto it = rows[i].find(c);
            if (it == rows[i].end()) continue;
            auto bits = it->second.bit_size();
            if (bits < best_bits || (bits == best_bits && rows[i].size() < best_len)) {
                best = i;
                best_bits = bits;
                best_len = rows[i].size();
            }
        }
        if (best == rows.size()) continue;
        used[best] = true;
        Row piv = std::move(rows[best]);
        rows[best].clear();
        Rational inv = Rational(1) / piv.at(c);
        for (auto& [cc, x] : piv) x *= inv;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            if (used[i]) continue;
            auto it = rows[i].find(c);
            if (it == rows[i].end()) continue;
            Rational f = it->second;
            sub_scaled(rows[i], piv, f);
        }
        done.push_back(std::move(piv));
        pivot_cols.push_back(c);
    }
    RankKernel out;
    out.rank = pivot_cols.size();
    if (!want_kernel) return out;
    // Back substitution to reach reduced echelon form.
    for (std::size_t p = done.size(); p-- > 0;) {
        for (std::size_t q = 0; q < p; ++q) {
            auto it = done[q].find(pivot_cols[p]);
            if (it == done[q].end()) continue;
            Rational f = it->second;
            sub_scaled(done[q], done[p], f);
        }
    }
    out.kernel_basis = kernel_from_rref(cols, pivot_cols, [&](std::size_t p, std::size_t f) {
        auto it = done[p].find(f);
        return it == done[p].end() ? Rational(0) : it->second;
    });
    return out;
}

}  // namespace detail

RankKernel matrix_rank_kernel(const RatMatrix& m) {
    if (m.rows() < 64 && m.cols() < 64) return detail::rank_kernel_dense(m);
    return detail::rank_kernel_sparse(m, true);
}

std::size_t matrix_rank(const RatMatrix& m) {
    if (m.rows() == 0 || m.cols() == 0 || m.is_zero()) return 0;
    if (m.rows() < 64 && m.cols() < 64) return detail::rank_kernel_dense(m).rank;
    return detail::rank_kernel_sparse(m, false).rank;
}

LinearSolution solve_linear(const RatMatrix& a, const RatVector& rhs) {
    if (rhs.size() != a.rows()) throw std::invalid_argument("right-hand side length differs from the row count");
    const std::size_t n = a.cols();
    RatMatrix aug(a.rows(), n + 1);
    for (const auto& [rc, v] : a.entries()) aug.set(rc.first, rc.second, v);
    for (std::size_t r = 0; r < rhs.size(); ++r) aug.set(r, n, rhs[r]);
    RankKernel rk = matrix_rank_kernel(aug);
    LinearSolution out;
    for (auto& v : rk.kernel_basis) {
        if (!v[n].is_zero()) {
            // A x + t rhs = 0 with t = 1 for the free rhs column
            out.consistent = true;
            out.particular.assign(v.begin(), v.begin() + static_cast<long>(n));
            for (auto& x : out.particular) x = -x / v[n];
        } else {
            v.pop_back();
            out.null_space.push_back(std::move(v));
        }
    }
    return out;
}

}  // namespace vlab
