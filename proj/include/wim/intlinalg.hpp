#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <utility>
#include <vector>

#include "wim/errors.hpp"
#include "wim/model.hpp"

namespace wim {

using Int = boost::multiprecision::cpp_int;
using IntVector = std::vector<Int>;

// Column-oriented integer matrix: columns are generators (log-vectors for Z_B,
// indicator columns for A_B). Entries addressed as at(row, col).
struct IntMatrix {
    int rows = 0;
    int cols = 0;
    std::vector<Int> a;  // row-major

    IntMatrix() = default;
    IntMatrix(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c) {}

    Int& at(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
    const Int& at(int r, int c) const { return a[static_cast<size_t>(r) * cols + c]; }
};

// Log-vector of an adjacent minor: +1 at (i,j) and (i+1,j+1), -1 at (i+1,j)
// and (i,j+1), in row-major cell order.
inline IntVector log_vector(MinorAnchor m, Shape shape) {
    if (m.row < 1 || m.row > shape.rows - 1 || m.col < 1 || m.col > shape.cols - 1)
        throw input_error("minor anchor (" + std::to_string(m.row) + "," +
                          std::to_string(m.col) + ") out of bounds");
    IntVector v(shape.cell_count(), 0);
    v[shape.index_of({m.row, m.col})] += 1;
    v[shape.index_of({m.row + 1, m.col + 1})] += 1;
    v[shape.index_of({m.row + 1, m.col})] -= 1;
    v[shape.index_of({m.row, m.col + 1})] -= 1;
    return v;
}

inline IntMatrix from_columns(int rows, const std::vector<IntVector>& cols) {
    IntMatrix m(rows, static_cast<int>(cols.size()));
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < rows; ++r) m.at(r, c) = cols[c][r];
    return m;
}

namespace detail {

// Integer column-echelon reduction of `work` (each element one column),
// optionally applying the same unimodular column operations to `carry`.
// Per pivot row, repeatedly reduces modulo the column with the smallest
// nonzero entry (Euclid) until one column remains nonzero there, then fixes
// it. Returns the number of pivot columns; columns past that count are zero
// in every processed row.
inline int column_echelon(std::vector<IntVector>& work, std::vector<IntVector>* carry,
                          int depth) {
    const int n = static_cast<int>(work.size());
    int fixed = 0;
    for (int row = 0; row < depth && fixed < n; ++row) {
        while (true) {
            int best = -1;
            for (int j = fixed; j < n; ++j)
                if (work[j][row] != 0 &&
                    (best < 0 || abs(work[j][row]) < abs(work[best][row])))
                    best = j;
            if (best < 0) break;
            bool clean = true;
            for (int j = fixed; j < n; ++j) {
                if (j == best || work[j][row] == 0) continue;
                Int q = work[j][row] / work[best][row];
                if (q != 0) {
                    for (int r = row; r < depth; ++r) work[j][r] -= q * work[best][r];
                    if (carry)
                        for (size_t r = 0; r < (*carry)[j].size(); ++r)
                            (*carry)[j][r] -= q * (*carry)[best][r];
                }
                if (work[j][row] != 0) clean = false;
            }
            if (clean) {
                std::swap(work[best], work[fixed]);
                if (carry) std::swap((*carry)[best], (*carry)[fixed]);
                ++fixed;
                break;
            }
        }
    }
    return fixed;
}

}  // namespace detail

// Exact rank over the rationals.
inline int rank(const IntMatrix& m) {
    std::vector<IntVector> cols(m.cols, IntVector(m.rows));
    for (int c = 0; c < m.cols; ++c)
        for (int r = 0; r < m.rows; ++r) cols[c][r] = m.at(r, c);
    return detail::column_echelon(cols, nullptr, m.rows);
}

// Lattice basis of { v integer : m^t v = 0 }, via column-style Hermite
// reduction of m^t with the identity carried alongside. The result spans the
// full kernel lattice (kernels are saturated), so basis vectors are primitive.
inline std::vector<IntVector> integer_kernel(const IntMatrix& m) {
    const int n = m.rows;  // length of kernel vectors
    const int s = m.cols;
    std::vector<IntVector> top(n, IntVector(s));
    std::vector<IntVector> bot(n, IntVector(n, 0));
    for (int j = 0; j < n; ++j) {
        for (int r = 0; r < s; ++r) top[j][r] = m.at(j, r);
        bot[j][j] = 1;
    }
    int fixed = detail::column_echelon(top, &bot, s);
    std::vector<IntVector> basis(bot.begin() + fixed, bot.end());
    return basis;
}

}  // namespace wim
