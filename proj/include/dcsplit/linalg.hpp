#ifndef DCSPLIT_LINALG_HPP
#define DCSPLIT_LINALG_HPP

#include <optional>
#include <vector>

#include "dcsplit/rational.hpp"

namespace dcsplit {

/// Incremental row echelon over the rationals with right-hand sides.
/// Used by basis-enumeration searches: rows are pushed as a constraint is
/// added to a candidate tight set and popped on backtrack.
class Echelon {
  public:
    explicit Echelon(int cols) : cols_(cols) {}

    int rank() const { return static_cast<int>(rows_.size()); }
    int cols() const { return cols_; }

    /// Reduce `row` against the stored rows. Returns false (and stores
    /// nothing) if the row is linearly dependent on the current set.
    bool push(RatVec row, Rat rhs) {
        for (std::size_t i = 0; i < rows_.size(); ++i) {
            const Rat& lead = row[pivot_[i]];
            if (lead != 0) {
                Rat factor = lead;
                for (int j = 0; j < cols_; ++j) row[j] -= factor * rows_[i][j];
                rhs -= factor * rhs_[i];
            }
        }
        int p = -1;
        for (int j = 0; j < cols_; ++j) {
            if (row[j] != 0) { p = j; break; }
        }
        if (p < 0) return false;
        Rat lead = row[p];
        for (int j = 0; j < cols_; ++j) row[j] /= lead;
        rhs /= lead;
        rows_.push_back(std::move(row));
        rhs_.push_back(std::move(rhs));
        pivot_.push_back(p);
        return true;
    }

    void pop() {
        rows_.pop_back();
        rhs_.pop_back();
        pivot_.pop_back();
    }

    /// Solve the stored full-rank square system by back substitution.
    /// Requires rank() == cols().
    RatVec solve() const {
        RatVec x(cols_, Rat(0));
        for (int i = rank() - 1; i >= 0; --i) {
            Rat v = rhs_[i];
            for (int j = pivot_[i] + 1; j < cols_; ++j) v -= rows_[i][j] * x[j];
            x[pivot_[i]] = v;  // leading entry is 1
        }
        return x;
    }

  private:
    int cols_;
    RatMat rows_;
    RatVec rhs_;
    std::vector<int> pivot_;
};

inline int rank_of(const RatMat& m) {
    if (m.empty()) return 0;
    Echelon ech(static_cast<int>(m[0].size()));
    for (const auto& row : m) ech.push(row, Rat(0));
    return ech.rank();
}

struct LinearSolve {
    bool consistent = false;
    RatVec solution;   // one solution if consistent
    RatVec certificate;  // y with yᵀA = 0, yᵀb ≠ 0 otherwise
};

/// Solve A x = b exactly; on inconsistency returns a verifying row
/// combination certificate.
inline LinearSolve solve_linear_system(const RatMat& a, const RatVec& b) {
    const int m = static_cast<int>(a.size());
    const int n = m == 0 ? 0 : static_cast<int>(a[0].size());
    // augmented with identity to track row operations
    RatMat work(m, RatVec(n + m + 1, Rat(0)));
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < n; ++j) work[i][j] = a[i][j];
        work[i][n + i] = 1;
        work[i][n + m] = b[i];
    }
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i) {
            if (work[i][col] != 0) { sel = i; break; }
        }
        if (sel < 0) continue;
        std::swap(work[row], work[sel]);
        Rat lead = work[row][col];
        for (int j = 0; j <= n + m; ++j) work[row][j] /= lead;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            Rat f = work[i][col];
            if (f == 0) continue;
            for (int j = 0; j <= n + m; ++j) work[i][j] -= f * work[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    LinearSolve result;
    for (int i = row; i < m; ++i) {
        if (work[i][n + m] != 0) {
            result.consistent = false;
            result.certificate.assign(m, Rat(0));
            for (int k = 0; k < m; ++k) result.certificate[k] = work[i][n + k];
            return result;
        }
    }
    result.consistent = true;
    result.solution.assign(n, Rat(0));
    for (int i = 0; i < row; ++i) result.solution[pivot_col[i]] = work[i][n + m];
    return result;
}

/// Basis of the nullspace {x : A x = 0}, one vector per non-pivot column.
inline std::vector<RatVec> nullspace(const RatMat& a, int cols) {
    RatMat work = a;
    const int m = static_cast<int>(work.size());
    std::vector<int> pivot_of_col(cols, -1);
    int row = 0;
    for (int col = 0; col < cols && row < m; ++col) {
        int sel = -1;
        for (int i = row; i < m; ++i) {
            if (work[i][col] != 0) { sel = i; break; }
        }
        if (sel < 0) continue;
        std::swap(work[row], work[sel]);
        Rat lead = work[row][col];
        for (int j = 0; j < cols; ++j) work[row][j] /= lead;
        for (int i = 0; i < m; ++i) {
            if (i == row) continue;
            Rat f = work[i][col];
            if (f == 0) continue;
            for (int j = 0; j < cols; ++j) work[i][j] -= f * work[row][j];
        }
        pivot_of_col[col] = row;
        ++row;
    }
    std::vector<RatVec> basis;
    for (int col = 0; col < cols; ++col) {
        if (pivot_of_col[col] >= 0) continue;
        RatVec v(cols, Rat(0));
        v[col] = 1;
        for (int c = 0; c < cols; ++c) {
            if (pivot_of_col[c] >= 0) v[c] = -work[pivot_of_col[c]][col];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace dcsplit

#endif
