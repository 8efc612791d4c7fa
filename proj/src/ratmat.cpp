#include "fraclag/ratmat.hpp"

#include "fraclag/error.hpp"

namespace fraclag {

int rank_exact(RatMat m) {
    if (m.empty()) return 0;
    std::size_t rows = m.size();
    std::size_t cols = m[0].size();
    std::size_t rank = 0;
    for (std::size_t col = 0; col < cols && rank < rows; ++col) {
        std::size_t pivot = rank;
        while (pivot < rows && m[pivot][col].is_zero()) ++pivot;
        if (pivot == rows) continue;
        std::swap(m[pivot], m[rank]);
        Rational inv = m[rank][col].inverse();
        for (std::size_t j = col; j < cols; ++j) m[rank][j] *= inv;
        for (std::size_t r = 0; r < rows; ++r) {
            if (r == rank || m[r][col].is_zero()) continue;
            Rational factor = m[r][col];
            for (std::size_t j = col; j < cols; ++j) m[r][j] -= factor * m[rank][j];
        }
        ++rank;
    }
    return static_cast<int>(rank);
}

RatMat invert_exact(RatMat m) {
    std::size_t n = m.size();
    for (const auto& row : m)
        if (row.size() != n) throw Error(ErrorCode::DomainError, "inverse of non-square matrix");
    RatMat inv(n, std::vector<Rational>(n, Rational(0)));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = Rational(1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        while (pivot < n && m[pivot][col].is_zero()) ++pivot;
        if (pivot == n) throw Error(ErrorCode::DomainError, "singular matrix");
        std::swap(m[pivot], m[col]);
        std::swap(inv[pivot], inv[col]);
        Rational scale = m[col][col].inverse();
        for (std::size_t j = 0; j < n; ++j) {
            m[col][j] *= scale;
            inv[col][j] *= scale;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || m[r][col].is_zero()) continue;
            Rational factor = m[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                m[r][j] -= factor * m[col][j];
                inv[r][j] -= factor * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace fraclag
