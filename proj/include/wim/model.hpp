#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <map>
#include <numeric>
#include <set>
#include <string>
#include <vector>

#include "wim/errors.hpp"

namespace wim {

// Cell of an I x J table, 1-based, rows numbered top to bottom.
struct Cell {
    int row = 0;
    int col = 0;
    friend auto operator<=>(const Cell&, const Cell&) = default;
};

struct Shape {
    int rows = 0;
    int cols = 0;

    int cell_count() const { return rows * cols; }
    bool contains(Cell c) const {
        return c.row >= 1 && c.row <= rows && c.col >= 1 && c.col <= cols;
    }
    // Row-major position of a cell, 0-based.
    int index_of(Cell c) const { return (c.row - 1) * cols + (c.col - 1); }
    Cell cell_at(int idx) const { return {idx / cols + 1, idx % cols + 1}; }

    friend auto operator<=>(const Shape&, const Shape&) = default;
};

// Anchor (i,j) of the adjacent minor p_{i,j} p_{i+1,j+1} - p_{i+1,j} p_{i,j+1}.
// Valid anchors satisfy 1 <= i <= I-1, 1 <= j <= J-1.
struct MinorAnchor {
    int row = 0;
    int col = 0;
    friend auto operator<=>(const MinorAnchor&, const MinorAnchor&) = default;

    std::array<Cell, 4> cells() const {
        return {Cell{row, col}, Cell{row, col + 1}, Cell{row + 1, col}, Cell{row + 1, col + 1}};
    }
};

inline std::string cell_str(Cell c) {
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

// A model: table shape plus the chosen subset B of adjacent-minor anchors.
// Anchors are kept sorted and unique; construct via validate_model().
struct MinorSet {
    Shape shape;
    std::vector<MinorAnchor> anchors;

    bool contains(MinorAnchor a) const {
        return std::binary_search(anchors.begin(), anchors.end(), a);
    }
};

inline std::vector<MinorAnchor> all_anchors(Shape shape) {
    std::vector<MinorAnchor> out;
    for (int i = 1; i < shape.rows; ++i)
        for (int j = 1; j < shape.cols; ++j) out.push_back({i, j});
    return out;
}

inline MinorSet validate_model(Shape shape, std::vector<MinorAnchor> anchors) {
    if (shape.rows < 2 || shape.cols < 2)
        throw input_error("table shape must be at least 2x2, got " +
                          std::to_string(shape.rows) + "x" + std::to_string(shape.cols));
    for (const auto& a : anchors) {
        if (a.row < 1 || a.row > shape.rows - 1 || a.col < 1 || a.col > shape.cols - 1)
            throw input_error("minor anchor (" + std::to_string(a.row) + "," +
                              std::to_string(a.col) + ") out of bounds for " +
                              std::to_string(shape.rows) + "x" + std::to_string(shape.cols));
    }
    std::sort(anchors.begin(), anchors.end());
    auto dup = std::adjacent_find(anchors.begin(), anchors.end());
    if (dup != anchors.end())
        throw input_error("duplicate minor anchor (" + std::to_string(dup->row) + "," +
                          std::to_string(dup->col) + ")");
    return MinorSet{shape, std::move(anchors)};
}

// Graph G_B: vertices are cells, each anchor contributes the 4 sides of its
// 2x2 block; an edge shared by two anchors has multiplicity 2.
struct ModelGraph {
    Shape shape;
    std::map<std::pair<Cell, Cell>, int> edges;  // key normalized with first < second

    int multiplicity(Cell a, Cell b) const {
        if (b < a) std::swap(a, b);
        auto it = edges.find({a, b});
        return it == edges.end() ? 0 : it->second;
    }
    bool has_edge(Cell a, Cell b) const { return multiplicity(a, b) > 0; }
    int edge_count() const { return static_cast<int>(edges.size()); }
};

inline ModelGraph build_graph(const MinorSet& model) {
    ModelGraph g{model.shape, {}};
    auto add = [&g](Cell a, Cell b) {
        if (b < a) std::swap(a, b);
        ++g.edges[{a, b}];
    };
    for (const auto& m : model.anchors) {
        add({m.row, m.col}, {m.row + 1, m.col});
        add({m.row, m.col + 1}, {m.row + 1, m.col + 1});
        add({m.row, m.col}, {m.row, m.col + 1});
        add({m.row + 1, m.col}, {m.row + 1, m.col + 1});
    }
    return g;
}

// Decomposition of G_B used by the sufficient statistic:
//   mcrs  - maximal horizontal runs of cells joined by consecutive row edges
//   mccs  - maximal vertical runs, analogously
//   free_cells - cells with no incident edge
//   components - connected components of G_B over the non-free cells
//   corners    - one cell per fully interior component of the complement
//                anchor set (the minors NOT in B, grouped by side-sharing
//                adjacency); each corner is the lex-smallest such anchor cell
struct Decomposition {
    std::vector<std::vector<Cell>> mcrs;
    std::vector<std::vector<Cell>> mccs;
    std::vector<Cell> free_cells;
    std::vector<std::vector<Cell>> components;
    std::vector<Cell> corners;

    int r() const { return static_cast<int>(mcrs.size()); }
    int c() const { return static_cast<int>(mccs.size()); }
    int f() const { return static_cast<int>(free_cells.size()); }
    int k() const { return static_cast<int>(components.size()); }
};

namespace detail {

class UnionFind {
  public:
    explicit UnionFind(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
    int find(int x) {
        while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent_[a] = b;
    }

  private:
    std::vector<int> parent_;
};

}  // namespace detail

inline Decomposition decompose(const MinorSet& model) {
    const Shape shape = model.shape;
    const ModelGraph g = build_graph(model);
    Decomposition d;

    std::vector<int> degree(shape.cell_count(), 0);
    for (const auto& [e, mult] : g.edges) {
        ++degree[shape.index_of(e.first)];
        ++degree[shape.index_of(e.second)];
    }
    for (int idx = 0; idx < shape.cell_count(); ++idx)
        if (degree[idx] == 0) d.free_cells.push_back(shape.cell_at(idx));

    for (int i = 1; i <= shape.rows; ++i) {
        for (int j = 1; j < shape.cols;) {
            if (!g.has_edge({i, j}, {i, j + 1})) {
                ++j;
                continue;
            }
            int j0 = j;
            while (j < shape.cols && g.has_edge({i, j}, {i, j + 1})) ++j;
            std::vector<Cell> run;
            for (int jj = j0; jj <= j; ++jj) run.push_back({i, jj});
            d.mcrs.push_back(std::move(run));
        }
    }
    for (int j = 1; j <= shape.cols; ++j) {
        for (int i = 1; i < shape.rows;) {
            if (!g.has_edge({i, j}, {i + 1, j})) {
                ++i;
                continue;
            }
            int i0 = i;
            while (i < shape.rows && g.has_edge({i, j}, {i + 1, j})) ++i;
            std::vector<Cell> run;
            for (int ii = i0; ii <= i; ++ii) run.push_back({ii, j});
            d.mccs.push_back(std::move(run));
        }
    }

    detail::UnionFind uf(shape.cell_count());
    for (const auto& [e, mult] : g.edges)
        uf.unite(shape.index_of(e.first), shape.index_of(e.second));
    std::map<int, std::vector<Cell>> comps;
    for (int idx = 0; idx < shape.cell_count(); ++idx)
        if (degree[idx] > 0) comps[uf.find(idx)].push_back(shape.cell_at(idx));
    for (auto& [root, cells] : comps) d.components.push_back(std::move(cells));
    std::sort(d.components.begin(), d.components.end(),
              [](const auto& a, const auto& b) { return a.front() < b.front(); });

    // Corners. Group the missing anchors by side-sharing adjacency (anchors at
    // Manhattan distance 1 share two cells, hence a full edge of both minors;
    // diagonal anchors share only one cell and stay separate). A group whose
    // minors never reach the table border contributes one corner: its
    // lex-smallest anchor cell.
    std::vector<MinorAnchor> missing;
    for (const auto& a : all_anchors(shape))
        if (!model.contains(a)) missing.push_back(a);
    if (!missing.empty()) {
        detail::UnionFind auf(static_cast<int>(missing.size()));
        std::map<MinorAnchor, int> pos;
        for (int t = 0; t < static_cast<int>(missing.size()); ++t) pos[missing[t]] = t;
        for (int t = 0; t < static_cast<int>(missing.size()); ++t) {
            for (MinorAnchor nb : {MinorAnchor{missing[t].row + 1, missing[t].col},
                                   MinorAnchor{missing[t].row, missing[t].col + 1}}) {
                auto it = pos.find(nb);
                if (it != pos.end()) auf.unite(t, it->second);
            }
        }
        std::map<int, std::vector<MinorAnchor>> groups;
        for (int t = 0; t < static_cast<int>(missing.size()); ++t)
            groups[auf.find(t)].push_back(missing[t]);
        for (const auto& [root, grp] : groups) {
            // Interior anchors keep all four minor cells off the border.
            bool interior = std::all_of(grp.begin(), grp.end(), [&](MinorAnchor a) {
                return a.row >= 2 && a.row <= shape.rows - 2 && a.col >= 2 &&
                       a.col <= shape.cols - 2;
            });
            if (interior) {
                MinorAnchor lead = *std::min_element(grp.begin(), grp.end());
                d.corners.push_back({lead.row, lead.col});
            }
        }
        std::sort(d.corners.begin(), d.corners.end());
    }
    return d;
}

}  // namespace wim
