#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wim/errors.hpp"
#include "wim/intlinalg.hpp"
#include "wim/model.hpp"

namespace wim {

enum class ColumnKind { mcr, mcc, free_cell, quadrant };

inline const char* column_kind_name(ColumnKind k) {
    switch (k) {
        case ColumnKind::mcr: return "mcr";
        case ColumnKind::mcc: return "mcc";
        case ColumnKind::free_cell: return "free";
        case ColumnKind::quadrant: return "quadrant";
    }
    return "?";
}

// One 0/1 indicator column of A_B. `cells` lists the support; `label` is the
// first cell of the run, the free cell itself, or the corner of a quadrant.
struct SuffStatColumn {
    ColumnKind kind;
    Cell label;
    std::vector<Cell> cells;
    std::vector<int> support;  // row-major cell indices, ascending
};

// Sufficient statistic A_B. Columns may be linearly redundant by design;
// `rank` always equals IJ - |B|.
struct SuffStatMatrix {
    Shape shape;
    int minor_count = 0;
    std::vector<SuffStatColumn> columns;
    int rank = 0;

    int df() const { return minor_count; }

    IntMatrix matrix() const {
        IntMatrix m(shape.cell_count(), static_cast<int>(columns.size()));
        for (int c = 0; c < m.cols; ++c)
            for (int idx : columns[c].support) m.at(idx, c) = 1;
        return m;
    }

    // T(h) = A_B^t h.
    std::vector<long long> apply(const std::vector<long long>& counts) const {
        if (static_cast<int>(counts.size()) != shape.cell_count())
            throw internal_error("sufficient statistic applied to a table of wrong size");
        std::vector<long long> t(columns.size(), 0);
        for (size_t c = 0; c < columns.size(); ++c)
            for (int idx : columns[c].support) t[c] += counts[idx];
        return t;
    }
};

// Builds A_B from the decomposition: one indicator column per MCR, MCC and
// free cell, plus for each corner (i,j) the lower-right quadrant
// {(a,b): a >= i+1, b >= j+1}. Column order: MCRs, MCCs, free cells,
// quadrants, each group sorted by label.
inline SuffStatMatrix generators(const MinorSet& model, const Decomposition& decomp) {
    const Shape shape = model.shape;
    SuffStatMatrix out;
    out.shape = shape;
    out.minor_count = static_cast<int>(model.anchors.size());

    auto push = [&out, shape](ColumnKind kind, Cell label, std::vector<Cell> cells) {
        SuffStatColumn col{kind, label, std::move(cells), {}};
        for (const Cell& c : col.cells) col.support.push_back(shape.index_of(c));
        std::sort(col.support.begin(), col.support.end());
        out.columns.push_back(std::move(col));
    };

    for (const auto& run : decomp.mcrs) push(ColumnKind::mcr, run.front(), run);
    for (const auto& run : decomp.mccs) push(ColumnKind::mcc, run.front(), run);
    for (const Cell& c : decomp.free_cells) push(ColumnKind::free_cell, c, {c});
    for (const Cell& corner : decomp.corners) {
        std::vector<Cell> cells;
        for (int a = corner.row + 1; a <= shape.rows; ++a)
            for (int b = corner.col + 1; b <= shape.cols; ++b) cells.push_back({a, b});
        push(ColumnKind::quadrant, corner, std::move(cells));
    }

    out.rank = rank(out.matrix());
    if (out.rank != shape.cell_count() - out.minor_count)
        throw internal_error("sufficient statistic rank " + std::to_string(out.rank) +
                             " != " + std::to_string(shape.cell_count() - out.minor_count) +
                             " for |B| = " + std::to_string(out.minor_count));
    return out;
}

inline SuffStatMatrix generators(const MinorSet& model) {
    return generators(model, decompose(model));
}

// Monomial parametrization p = zeta^{A_B}: cell (i,j) maps to the product of
// zeta_k over the columns k whose indicator contains the cell. Indices are
// 0-based positions into SuffStatMatrix.columns.
struct Parametrization {
    Shape shape;
    std::vector<std::vector<int>> factors;  // per cell, ascending column indices

    std::string monomial(Cell c) const {
        std::string s;
        for (int k : factors[shape.index_of(c)]) {
            if (!s.empty()) s += "*";
            s += "z" + std::to_string(k + 1);
        }
        return s.empty() ? "1" : s;
    }
};

inline Parametrization parametrize(const SuffStatMatrix& a) {
    Parametrization p;
    p.shape = a.shape;
    p.factors.assign(a.shape.cell_count(), {});
    for (size_t k = 0; k < a.columns.size(); ++k)
        for (int idx : a.columns[k].support) p.factors[idx].push_back(static_cast<int>(k));
    return p;
}

}  // namespace wim
