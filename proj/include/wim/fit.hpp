#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "wim/errors.hpp"
#include "wim/suffstat.hpp"

namespace wim {

struct ContingencyTable {
    Shape shape;
    std::vector<long long> counts;  // row-major, nonnegative

    long long total() const {
        long long n = 0;
        for (long long x : counts) n += x;
        return n;
    }
    long long at(Cell c) const { return counts[shape.index_of(c)]; }
};

inline ContingencyTable make_table(Shape shape, std::vector<long long> counts) {
    if (static_cast<int>(counts.size()) != shape.cell_count())
        throw input_error("table has " + std::to_string(counts.size()) + " cells, expected " +
                          std::to_string(shape.cell_count()));
    for (long long x : counts)
        if (x < 0) throw input_error("negative count " + std::to_string(x));
    return ContingencyTable{shape, std::move(counts)};
}

struct FittedTable {
    Shape shape;
    std::vector<double> probs;  // sums to 1
    bool converged = false;
    int iterations = 0;
    double birch_residual = 0.0;  // max |A_B^t (n*p - h)|
};

struct FitOptions {
    double tol = 1e-10;
    int max_iter = 100000;
};

// Iterative proportional scaling over the columns of A_B. Columns with zero
// observed total have their support zeroed up front and are skipped (the MLE
// lives on the model closure). Convergence: birch_residual <= tol * n.
inline FittedTable fit_mle(const SuffStatMatrix& a, const ContingencyTable& h,
                           const FitOptions& opts = {}) {
    if (h.shape != a.shape) throw input_error("table shape does not match the model");
    const int n_cells = a.shape.cell_count();
    const double n = static_cast<double>(h.total());
    if (h.total() < 1) throw input_error("inference requires a positive table total");
    if (opts.tol <= 0 || opts.max_iter < 1) throw input_error("invalid fit parameters");

    const auto observed = a.apply(h.counts);

    FittedTable fit;
    fit.shape = a.shape;
    fit.probs.assign(n_cells, 1.0 / n_cells);
    for (size_t s = 0; s < a.columns.size(); ++s)
        if (observed[s] == 0)
            for (int idx : a.columns[s].support) fit.probs[idx] = 0.0;

    auto residual = [&] {
        double worst = 0.0;
        for (size_t s = 0; s < a.columns.size(); ++s) {
            double tot = 0.0;
            for (int idx : a.columns[s].support) tot += fit.probs[idx];
            worst = std::max(worst, std::abs(n * tot - static_cast<double>(observed[s])));
        }
        return worst;
    };

    for (int iter = 1; iter <= opts.max_iter; ++iter) {
        for (size_t s = 0; s < a.columns.size(); ++s) {
            if (observed[s] == 0) continue;
            double tot = 0.0;
            for (int idx : a.columns[s].support) tot += fit.probs[idx];
            double factor = static_cast<double>(observed[s]) / n / tot;
            for (int idx : a.columns[s].support) fit.probs[idx] *= factor;
        }
        double mass = 0.0;
        for (double p : fit.probs) mass += p;
        for (double& p : fit.probs) p /= mass;

        fit.iterations = iter;
        fit.birch_residual = residual();
        if (fit.birch_residual <= opts.tol * n) {
            fit.converged = true;
            break;
        }
    }
    return fit;
}

// Pearson statistic: n * sum over cells with phat > 0 of (p - phat)^2 / phat.
inline double pearson_c2(const ContingencyTable& h, const FittedTable& fit) {
    const double n = static_cast<double>(h.total());
    double stat = 0.0;
    for (size_t i = 0; i < fit.probs.size(); ++i) {
        if (fit.probs[i] > 0.0) {
            double d = static_cast<double>(h.counts[i]) / n - fit.probs[i];
            stat += d * d / fit.probs[i];
        } else if (h.counts[i] > 0) {
            throw internal_error("fitted probability 0 under a positive count");
        }
    }
    return n * stat;
}

// Log-likelihood ratio statistic: 2n * sum over cells with h > 0 of
// p * log(p / phat).
inline double g2(const ContingencyTable& h, const FittedTable& fit) {
    const double n = static_cast<double>(h.total());
    double stat = 0.0;
    for (size_t i = 0; i < fit.probs.size(); ++i) {
        if (h.counts[i] > 0) {
            if (fit.probs[i] <= 0.0)
                throw internal_error("fitted probability 0 under a positive count");
            double p = static_cast<double>(h.counts[i]) / n;
            stat += p * std::log(p / fit.probs[i]);
        }
    }
    // The sum is a KL divergence, nonnegative in exact arithmetic; rounding
    // can leave a tiny negative residue when the fit matches h exactly.
    return std::max(2.0 * n * stat, 0.0);
}

}  // namespace wim
