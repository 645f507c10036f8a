#include "folia/linalg_exact.hpp"

#include "folia/errors.hpp"

namespace folia {

RatMat rat_mat(int rows, int cols) {
    return RatMat(rows, RatVec(cols, Rat(0)));
}

RatMat rat_identity(int n) {
    RatMat m = rat_mat(n, n);
    for (int i = 0; i < n; ++i) m[i][i] = 1;
    return m;
}

RatMat rat_mat_mul(const RatMat& a, const RatMat& b) {
    if (a.empty() || b.empty()) return {};
    std::size_t n = a.size(), k = b.size(), m = b[0].size();
    if (a[0].size() != k) throw InputError("matrix dimension mismatch");
    RatMat out = rat_mat(static_cast<int>(n), static_cast<int>(m));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (a[i][l] == 0) continue;
            for (std::size_t j = 0; j < m; ++j) out[i][j] += a[i][l] * b[l][j];
        }
    return out;
}

RatMat rat_mat_add(const RatMat& a, const RatMat& b) {
    RatMat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] += b[i][j];
    return out;
}

RatMat rat_mat_sub(const RatMat& a, const RatMat& b) {
    RatMat out = a;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < a[i].size(); ++j) out[i][j] -= b[i][j];
    return out;
}

RatMat rat_mat_scale(const RatMat& a, const Rat& c) {
    RatMat out = a;
    for (auto& row : out)
        for (auto& x : row) x *= c;
    return out;
}

RatMat rat_commutator(const RatMat& a, const RatMat& b) {
    return rat_mat_sub(rat_mat_mul(a, b), rat_mat_mul(b, a));
}

bool rat_mat_is_zero(const RatMat& a) {
    for (const auto& row : a)
        for (const auto& x : row)
            if (x != 0) return false;
    return true;
}

RatVec rat_mat_apply(const RatMat& a, const RatVec& v) {
    RatVec out(a.size(), Rat(0));
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (a[i].size() != v.size()) throw InputError("matrix/vector dimension mismatch");
        for (std::size_t j = 0; j < v.size(); ++j) out[i] += a[i][j] * v[j];
    }
    return out;
}

std::vector<int> rref(RatMat& m) {
    std::vector<int> pivots;
    if (m.empty()) return pivots;
    std::size_t rows = m.size(), cols = m[0].size();
    std::size_t row = 0;
    for (std::size_t col = 0; col < cols && row < rows; ++col) {
        std::size_t sel = rows;
        for (std::size_t i = row; i < rows; ++i)
            if (m[i][col] != 0) {
                sel = i;
                break;
            }
        if (sel == rows) continue;
        std::swap(m[row], m[sel]);
        Rat inv = 1 / m[row][col];
        for (std::size_t j = col; j < cols; ++j) m[row][j] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == row || m[i][col] == 0) continue;
            Rat f = m[i][col];
            for (std::size_t j = col; j < cols; ++j) m[i][j] -= f * m[row][j];
        }
        pivots.push_back(static_cast<int>(col));
        ++row;
    }
    return pivots;
}

int rank(RatMat m) {
    return static_cast<int>(rref(m).size());
}

std::vector<RatVec> kernel_basis(RatMat m) {
    if (m.empty()) return {};
    std::size_t cols = m[0].size();
    std::vector<int> pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (int p : pivots) is_pivot[p] = true;
    std::vector<RatVec> basis;
    for (std::size_t free_col = 0; free_col < cols; ++free_col) {
        if (is_pivot[free_col]) continue;
        RatVec v(cols, Rat(0));
        v[free_col] = 1;
        for (std::size_t pi = 0; pi < pivots.size(); ++pi) {
            // row pi has its pivot at pivots[pi]
            v[pivots[pi]] = -m[pi][free_col];
        }
        basis.push_back(std::move(v));
    }
    return basis;
}

bool solve(const RatMat& m, const RatVec& b, RatVec& x) {
    if (m.empty()) {
        for (const auto& c : b)
            if (c != 0) return false;
        x.clear();
        return true;
    }
    std::size_t rows = m.size(), cols = m[0].size();
    RatMat aug = m;
    for (std::size_t i = 0; i < rows; ++i) aug[i].push_back(b[i]);
    std::vector<int> pivots = rref(aug);
    // inconsistent iff a pivot lands in the augmented column
    if (!pivots.empty() && pivots.back() == static_cast<int>(cols)) return false;
    x.assign(cols, Rat(0));
    for (std::size_t pi = 0; pi < pivots.size(); ++pi) x[pivots[pi]] = aug[pi][cols];
    return true;
}

bool expand_in_span(const std::vector<RatVec>& span, const RatVec& v, RatVec& coeffs) {
    if (span.empty()) {
        coeffs.clear();
        for (const auto& c : v)
            if (c != 0) return false;
        return true;
    }
    std::size_t dim = v.size();
    RatMat m = rat_mat(static_cast<int>(dim), static_cast<int>(span.size()));
    for (std::size_t j = 0; j < span.size(); ++j) {
        if (span[j].size() != dim) throw InputError("span vector dimension mismatch");
        for (std::size_t i = 0; i < dim; ++i) m[i][j] = span[j][i];
    }
    return solve(m, v, coeffs);
}

bool in_row_span(const RatMat& m, const RatVec& v) {
    RatMat probe = m;
    probe.push_back(v);
    return rank(std::move(probe)) == rank(m);
}

}  // namespace folia
