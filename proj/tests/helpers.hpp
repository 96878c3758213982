#pragma once

#include <array>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <string>
#include <vector>

#include "wim/wim.hpp"

namespace testutil {

inline std::string data_path(const std::string& name) {
    return std::string(WIM_DATA_DIR) + "/" + name;
}

struct CliResult {
    int code = -1;
    std::string out;
};

// Runs the CLI binary with the given arguments, capturing stdout.
// stderr is folded into the capture when merge_stderr is set.
inline CliResult run_cli(const std::string& args, bool merge_stderr = false) {
    std::string cmd = std::string(WIM_CLI_PATH) + " " + args +
                      (merge_stderr ? " 2>&1" : " 2>/dev/null");
    CliResult res;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return res;
    std::array<char, 4096> buf;
    size_t got;
    while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) res.out.append(buf.data(), got);
    int status = pclose(pipe);
    res.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

inline wim::MinorSet model(int rows, int cols, std::vector<wim::MinorAnchor> anchors) {
    return wim::validate_model({rows, cols}, std::move(anchors));
}

// Random anchor subset: each of the (I-1)(J-1) anchors kept with probability 1/2.
inline std::vector<wim::MinorAnchor> random_anchors(wim::Shape shape, std::mt19937& gen) {
    std::vector<wim::MinorAnchor> out;
    std::bernoulli_distribution keep(0.5);
    for (const auto& a : wim::all_anchors(shape))
        if (keep(gen)) out.push_back(a);
    return out;
}

// Does the integer lattice spanned by `gens` contain `v`? Column-echelon
// reduction over the integers (independent of the library's kernel code).
inline bool lattice_contains(std::vector<std::vector<long long>> gens,
                             std::vector<long long> v) {
    if (gens.empty()) {
        for (long long x : v)
            if (x != 0) return false;
        return true;
    }
    const size_t n = v.size();
    for (size_t row = 0, fixed = 0; row < n && fixed < gens.size(); ++row) {
        while (true) {
            size_t best = gens.size();
            for (size_t j = fixed; j < gens.size(); ++j)
                if (gens[j][row] != 0 &&
                    (best == gens.size() || std::abs(gens[j][row]) < std::abs(gens[best][row])))
                    best = j;
            if (best == gens.size()) break;
            bool clean = true;
            for (size_t j = fixed; j < gens.size(); ++j) {
                if (j == best || gens[j][row] == 0) continue;
                long long q = gens[j][row] / gens[best][row];
                if (q != 0)
                    for (size_t r = 0; r < n; ++r) gens[j][r] -= q * gens[best][r];
                if (gens[j][row] != 0) clean = false;
            }
            if (clean) {
                std::swap(gens[best], gens[fixed]);
                ++fixed;
                break;
            }
        }
    }
    // Reduce v against the echelonized generators.
    for (const auto& g : gens) {
        size_t pivot = 0;
        while (pivot < n && g[pivot] == 0) ++pivot;
        if (pivot == n) continue;
        if (v[pivot] % g[pivot] != 0) continue;
        long long q = v[pivot] / g[pivot];
        for (size_t r = 0; r < n; ++r) v[r] -= q * g[r];
    }
    for (long long x : v)
        if (x != 0) return false;
    return true;
}

// All nonnegative integer tables with the same sufficient statistic as h,
// by depth-first assignment with per-column upper bounds. Independent of the
// Markov-basis machinery, so it can serve as an oracle for it.
inline std::vector<std::vector<long long>> enumerate_fiber(const wim::SuffStatMatrix& a,
                                                           const wim::ContingencyTable& h) {
    const int n = a.shape.cell_count();
    const auto target = a.apply(h.counts);
    std::vector<long long> partial(a.columns.size(), 0);
    std::vector<long long> cur(n, 0);
    std::vector<std::vector<long long>> out;

    // columns_of[i] lists the columns whose support contains cell i.
    std::vector<std::vector<int>> columns_of(n);
    for (size_t s = 0; s < a.columns.size(); ++s)
        for (int idx : a.columns[s].support) columns_of[idx].push_back(static_cast<int>(s));

    auto rec = [&](auto&& self, int cell) -> void {
        if (cell == n) {
            if (partial == target) out.push_back(cur);
            return;
        }
        long long cap = h.total();
        for (int s : columns_of[cell]) cap = std::min(cap, target[s] - partial[s]);
        for (long long v = 0; v <= cap; ++v) {
            cur[cell] = v;
            for (int s : columns_of[cell]) partial[s] += v;
            self(self, cell + 1);
            for (int s : columns_of[cell]) partial[s] -= v;
        }
        cur[cell] = 0;
    };
    rec(rec, 0);
    return out;
}

}  // namespace testutil
