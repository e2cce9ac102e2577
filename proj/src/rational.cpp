#include "forge/rational.hpp"

#include <stdexcept>

namespace forge {

std::string rational_to_string(const Rational& r) {
    return r.str();
}

Rational rational_from_string(const std::string& s) {
    try {
        return Rational(s);
    } catch (const std::exception&) {
        throw std::runtime_error("bad rational literal: '" + s + "'");
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
}

Matrix Matrix::zero(int r, int c) {
    return Matrix(r, c);
}

Matrix matmul(const Matrix& g, const Matrix& f) {
    if (g.cols != f.rows) throw std::runtime_error("matmul: dimension mismatch");
    Matrix out(g.rows, f.cols);
    for (int i = 0; i < g.rows; ++i) {
        for (int k = 0; k < g.cols; ++k) {
            const Rational& gik = g.at(i, k);
            if (gik == 0) continue;
            for (int j = 0; j < f.cols; ++j) {
                const Rational& fkj = f.at(k, j);
                if (fkj == 0) continue;
                out.at(i, j) += gik * fkj;
            }
        }
    }
    return out;
}

Matrix kronecker(const Matrix& f, const Matrix& g) {
    Matrix out(f.rows * g.rows, f.cols * g.cols);
    for (int i = 0; i < f.rows; ++i)
        for (int j = 0; j < f.cols; ++j) {
            const Rational& fij = f.at(i, j);
            if (fij == 0) continue;
            for (int p = 0; p < g.rows; ++p)
                for (int q = 0; q < g.cols; ++q) {
                    const Rational& gpq = g.at(p, q);
                    if (gpq == 0) continue;
                    out.at(i * g.rows + p, j * g.cols + q) = fij * gpq;
                }
        }
    return out;
}

std::vector<int> rref(Matrix& m) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < m.cols && row < m.rows; ++col) {
        int sel = -1;
        for (int r = row; r < m.rows; ++r) {
            if (m.at(r, col) != 0) {
                sel = r;
                break;
            }
        }
        if (sel < 0) continue;
        if (sel != row)
            for (int c = 0; c < m.cols; ++c) std::swap(m.at(sel, c), m.at(row, c));
        Rational p = m.at(row, col);
        for (int c = 0; c < m.cols; ++c) m.at(row, c) /= p;
        for (int r = 0; r < m.rows; ++r) {
            if (r == row) continue;
            Rational q = m.at(r, col);
            if (q == 0) continue;
            for (int c = 0; c < m.cols; ++c) m.at(r, c) -= q * m.at(row, c);
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

int rank(Matrix m) {
    return static_cast<int>(rref(m).size());
}

bool is_invertible(const Matrix& m) {
    if (m.rows != m.cols) return false;
    return rank(m) == m.rows;
}

Matrix inverse(const Matrix& m) {
    if (m.rows != m.cols) throw std::runtime_error("inverse: not square");
    int n = m.rows;
    Matrix aug(n, 2 * n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) aug.at(i, j) = m.at(i, j);
        aug.at(i, n + i) = 1;
    }
    auto piv = rref(aug);
    if (static_cast<int>(piv.size()) < n || piv[n - 1] != n - 1)
        throw std::runtime_error("inverse: singular matrix");
    Matrix out(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) out.at(i, j) = aug.at(i, n + j);
    return out;
}

}  // namespace forge
