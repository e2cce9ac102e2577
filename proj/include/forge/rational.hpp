#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <string>
#include <vector>

namespace forge {

using Rational = boost::multiprecision::cpp_rational;

std::string rational_to_string(const Rational& r);
Rational rational_from_string(const std::string& s);

/// Dense exact-rational matrix, row major.
struct Matrix {
    int rows = 0;
    int cols = 0;
    std::vector<Rational> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Rational& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Rational& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }

    bool operator==(const Matrix& o) const = default;

    static Matrix identity(int n);
    static Matrix zero(int r, int c);
};

Matrix matmul(const Matrix& g, const Matrix& f);
Matrix kronecker(const Matrix& f, const Matrix& g);

/// Reduced row echelon form in place; returns pivot column indices.
std::vector<int> rref(Matrix& m);

int rank(Matrix m);
bool is_invertible(const Matrix& m);
Matrix inverse(const Matrix& m);

}  // namespace forge
