#pragma once

#include <vector>

#include "rook/errors.hpp"
#include "rook/galois.hpp"

namespace rook {

// Dense row-major matrix over a finite field. The field itself travels
// separately: every operation takes it as the first argument.
struct Matrix {
    int rows = 0, cols = 0;
    std::vector<FieldElement> a;

    Matrix() = default;
    Matrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    FieldElement& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
    FieldElement at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

    friend bool operator==(const Matrix&, const Matrix&) = default;
};

inline Matrix mat_identity(const Field& F, int n) {
    Matrix I(n, n);
    for (int i = 0; i < n; ++i) I.at(i, i) = F.one();
    return I;
}

inline Matrix mat_add(const Field& F, const Matrix& A, const Matrix& B) {
    if (A.rows != B.rows || A.cols != B.cols) throw ShapeMismatch("matrix addition shape mismatch");
    Matrix C(A.rows, A.cols);
    for (size_t i = 0; i < C.a.size(); ++i) C.a[i] = F.add(A.a[i], B.a[i]);
    return C;
}

inline Matrix mat_scale(const Field& F, FieldElement s, const Matrix& A) {
    Matrix C = A;
    for (auto& x : C.a) x = F.mul(s, x);
    return C;
}

inline Matrix mat_mul(const Field& F, const Matrix& A, const Matrix& B) {
    if (A.cols != B.rows)
        throw ShapeMismatch("matrix product shape mismatch: " + std::to_string(A.cols) + " vs " + std::to_string(B.rows));
    Matrix C(A.rows, B.cols);
    for (int i = 0; i < A.rows; ++i)
        for (int t = 0; t < A.cols; ++t) {
            FieldElement aij = A.at(i, t);
            if (F.is_zero(aij)) continue;
            for (int j = 0; j < B.cols; ++j) C.at(i, j) = F.add(C.at(i, j), F.mul(aij, B.at(t, j)));
        }
    return C;
}

inline Matrix transpose(const Matrix& A) {
    Matrix T(A.cols, A.rows);
    for (int i = 0; i < A.rows; ++i)
        for (int j = 0; j < A.cols; ++j) T.at(j, i) = A.at(i, j);
    return T;
}

// In-place Gauss-Jordan reduction. Returns the pivot column of each pivot
// row, in order; the rank is the number of pivots. Pivot search can be
// limited to a column prefix (for [A | payload] augmented matrices).
inline std::vector<int> rref(const Field& F, Matrix& M, int pivot_cols) {
    std::vector<int> pivots;
    int row = 0;
    for (int col = 0; col < pivot_cols && row < M.rows; ++col) {
        int sel = -1;
        for (int i = row; i < M.rows; ++i)
            if (!F.is_zero(M.at(i, col))) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        if (sel != row)
            for (int j = 0; j < M.cols; ++j) std::swap(M.at(sel, j), M.at(row, j));
        FieldElement piv_inv = F.inv(M.at(row, col));
        for (int j = col; j < M.cols; ++j) M.at(row, j) = F.mul(piv_inv, M.at(row, j));
        for (int i = 0; i < M.rows; ++i) {
            if (i == row || F.is_zero(M.at(i, col))) continue;
            FieldElement factor = M.at(i, col);
            for (int j = col; j < M.cols; ++j) M.at(i, j) = F.sub(M.at(i, j), F.mul(factor, M.at(row, j)));
        }
        pivots.push_back(col);
        ++row;
    }
    return pivots;
}

inline std::vector<int> rref(const Field& F, Matrix& M) { return rref(F, M, M.cols); }

inline int mat_rank(const Field& F, Matrix M) { return static_cast<int>(rref(F, M).size()); }

// Expresses `target` (a row vector over columns [0, value_col)) as a linear
// combination of the rows of R, where R is in reduced row echelon form with
// the given pivot columns and column value_col holds per-row payload values.
// On success combo_value is the same combination applied to the payload.
struct RowspaceResult {
    bool in_rowspace = false;
    FieldElement combo_value{};
};

inline RowspaceResult reduce_against(const Field& F, const Matrix& R, const std::vector<int>& pivots,
                                     std::vector<FieldElement> target, int value_col) {
    if (static_cast<int>(target.size()) != value_col) throw ShapeMismatch("target length must equal value_col");
    FieldElement value = F.zero();
    for (size_t r = 0; r < pivots.size(); ++r) {
        int p = pivots[r];
        if (p >= value_col) continue;  // inconsistency marker row; caller decides
        FieldElement coef = target[p];
        if (F.is_zero(coef)) continue;
        for (int j = 0; j < value_col; ++j) target[j] = F.sub(target[j], F.mul(coef, R.at(static_cast<int>(r), j)));
        value = F.add(value, F.mul(coef, R.at(static_cast<int>(r), value_col)));
    }
    for (FieldElement t : target)
        if (!F.is_zero(t)) return {false, F.zero()};
    return {true, value};
}

// Entry-wise change of field for matrices whose entries lie in the prime
// subfield (used when a computation over GF(p) is carried out in GF(p^m)).
inline Matrix lift_matrix(const Field& from, const Field& to, const Matrix& A) {
    Matrix B = A;
    for (auto& x : B.a) x = lift_element(from, to, x);
    return B;
}

inline Matrix project_matrix(const Field& from, const Field& to, const Matrix& A) {
    Matrix B = A;
    for (auto& x : B.a) x = project_element(from, to, x);
    return B;
}

}  // namespace rook
