#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <future>
#include <random>
#include <string>
#include <vector>

#include "wim/errors.hpp"
#include "wim/fit.hpp"
#include "wim/markov_basis.hpp"

namespace wim {

// All randomness comes from mt19937_64 through the three draws below, so a
// seed fixes the trajectory bit-for-bit on every platform.
inline constexpr const char* rng_algorithm = "mt19937_64";

struct RngSpec {
    std::uint64_t seed = 0;
};

class Rng {
  public:
    explicit Rng(RngSpec spec) : eng_(spec.seed) {}

    std::uint64_t next_u64() { return eng_(); }

    // Uniform in [0,1) with 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform in [0,n) by rejection, bias-free.
    std::uint64_t next_below(std::uint64_t n) {
        const std::uint64_t limit = n * ((~std::uint64_t{0}) / n);
        std::uint64_t x;
        do {
            x = next_u64();
        } while (x >= limit);
        return x % n;
    }

    int next_sign() { return (next_u64() & 1) ? 1 : -1; }

  private:
    std::mt19937_64 eng_;
};

// log H(h) up to the fiber constant: -sum log(h_ij!). The monomial part of
// the hypergeometric weight is constant on a fiber because log p lies in the
// column space of A_B.
inline double log_fiber_weight(const ContingencyTable& h) {
    double s = 0.0;
    for (long long x : h.counts) s -= std::lgamma(static_cast<double>(x) + 1.0);
    return s;
}

enum class TestStat { c2, g2 };

inline const char* stat_name(TestStat s) { return s == TestStat::c2 ? "c2" : "g2"; }

struct McmcOptions {
    long long samples = 10000;
    long long burn_in = 50000;
    long long thinning = 50;
    RngSpec rng;
};

struct ExactTestResult {
    TestStat stat = TestStat::c2;
    double stat_observed = 0.0;
    double p = 1.0;
    double mc_se = 0.0;
    long long exceedances = 0;
    long long samples = 0;
    long long accepted = 0;
    long long steps = 0;
    double acceptance_rate = 0.0;
    McmcOptions options;
};

namespace detail {

// One Metropolis chain over the fiber of its start state. Every step draws a
// move, a sign, and a uniform u in that fixed order whether or not the
// proposal is accepted, so the trajectory is a pure function of the seed.
class FiberWalker {
  public:
    FiberWalker(const std::vector<Move>& basis, std::vector<long long> start, RngSpec spec)
        : basis_(basis), cur_(std::move(start)), rng_(spec) {}

    bool step() {
        const Move& mv = basis_[rng_.next_below(basis_.size())];
        const int sign = rng_.next_sign();
        const double u = rng_.next_unit();
        bool feasible = true;
        double delta_logw = 0.0;
        for (size_t i = 0; i < mv.delta.size() && feasible; ++i) {
            if (mv.delta[i] == 0) continue;
            long long next = cur_[i] + sign * mv.delta[i];
            if (next < 0) {
                feasible = false;
                break;
            }
            delta_logw += std::lgamma(static_cast<double>(cur_[i]) + 1.0) -
                          std::lgamma(static_cast<double>(next) + 1.0);
        }
        ++steps_;
        if (feasible && std::min(1.0, std::exp(delta_logw)) > u) {
            for (size_t i = 0; i < mv.delta.size(); ++i) cur_[i] += sign * mv.delta[i];
            ++accepted_;
            return true;
        }
        return false;
    }

    const std::vector<long long>& state() const { return cur_; }
    long long steps() const { return steps_; }
    long long accepted() const { return accepted_; }

  private:
    const std::vector<Move>& basis_;
    std::vector<long long> cur_;
    Rng rng_;
    long long steps_ = 0;
    long long accepted_ = 0;
};

struct StatEvaluator {
    const FittedTable& fit;
    double n;
    TestStat which;

    double operator()(const std::vector<long long>& counts) const {
        double stat = 0.0;
        if (which == TestStat::c2) {
            for (size_t i = 0; i < fit.probs.size(); ++i) {
                if (fit.probs[i] > 0.0) {
                    double d = static_cast<double>(counts[i]) / n - fit.probs[i];
                    stat += d * d / fit.probs[i];
                }
            }
            return n * stat;
        }
        for (size_t i = 0; i < fit.probs.size(); ++i) {
            if (counts[i] > 0) {
                double p = static_cast<double>(counts[i]) / n;
                stat += p * std::log(p / fit.probs[i]);
            }
        }
        return 2.0 * n * stat;
    }
};

}  // namespace detail

// Diaconis-Sturmfels exact test: a Metropolis walk over the fiber of h with
// the hypergeometric stationary law. One chain per call; every step draws a
// move, a sign, and a uniform u in that fixed order whether or not the
// proposal is accepted. After burn_in steps the state is recorded every
// `thinning` steps, `samples` times, and
//   p = (1 + #{recorded h' : stat(h') >= stat(h) - 1e-12}) / (1 + samples).
inline ExactTestResult mcmc_exact_test(const SuffStatMatrix& a, const std::vector<Move>& basis,
                                       const ContingencyTable& h, TestStat stat,
                                       const McmcOptions& opts = {}) {
    if (opts.samples < 1 || opts.burn_in < 0 || opts.thinning < 1)
        throw input_error("invalid MCMC parameters");
    if (h.shape != a.shape) throw input_error("table shape does not match the model");

    constexpr double kTieTol = 1e-12;
    const int n_cells = a.shape.cell_count();
    const double n = static_cast<double>(h.total());

    FittedTable fit = fit_mle(a, h);
    if (!fit.converged) throw internal_error("MLE did not converge before the exact test");
    detail::StatEvaluator evaluate{fit, n, stat};

    ExactTestResult res;
    res.stat = stat;
    res.options = opts;
    res.stat_observed = evaluate(h.counts);
    res.samples = opts.samples;

    if (basis.empty()) {
        // Singleton fiber: the observed table is the whole fiber.
        res.exceedances = opts.samples;
        res.p = 1.0;
        res.mc_se = 0.0;
        return res;
    }

    for (const Move& mv : basis)
        if (static_cast<int>(mv.delta.size()) != n_cells)
            throw input_error("move length does not match the table");

    detail::FiberWalker walker(basis, h.counts, opts.rng);
    for (long long t = 0; t < opts.burn_in; ++t) walker.step();
    const double threshold = res.stat_observed - kTieTol;
    for (long long s = 0; s < opts.samples; ++s) {
        for (long long t = 0; t < opts.thinning; ++t) walker.step();
        if (evaluate(walker.state()) >= threshold) ++res.exceedances;
    }
    res.accepted = walker.accepted();
    res.steps = walker.steps();

    res.p = static_cast<double>(1 + res.exceedances) / static_cast<double>(1 + opts.samples);
    res.mc_se = std::sqrt(res.p * (1.0 - res.p) / static_cast<double>(opts.samples));
    res.acceptance_rate = static_cast<double>(res.accepted) / static_cast<double>(res.steps);
    return res;
}

// Pools independent chains with seeds seed, seed+1, ... into one estimate.
// Chains share only immutable inputs and run concurrently; the result does
// not depend on scheduling.
inline ExactTestResult pooled_exact_test(const SuffStatMatrix& a, const std::vector<Move>& basis,
                                         const ContingencyTable& h, TestStat stat,
                                         const McmcOptions& opts, int chains) {
    if (chains < 1) throw input_error("chain count must be positive");
    if (chains == 1) return mcmc_exact_test(a, basis, h, stat, opts);

    std::vector<std::future<ExactTestResult>> futures;
    for (int c = 0; c < chains; ++c) {
        McmcOptions chain_opts = opts;
        chain_opts.rng.seed = opts.rng.seed + static_cast<std::uint64_t>(c);
        futures.push_back(std::async(std::launch::async, [&, chain_opts] {
            return mcmc_exact_test(a, basis, h, stat, chain_opts);
        }));
    }
    ExactTestResult pooled;
    for (int c = 0; c < chains; ++c) {
        ExactTestResult r = futures[c].get();
        if (c == 0) {
            pooled = r;
        } else {
            pooled.exceedances += r.exceedances;
            pooled.samples += r.samples;
            pooled.accepted += r.accepted;
            pooled.steps += r.steps;
        }
    }
    pooled.p = static_cast<double>(1 + pooled.exceedances) /
               static_cast<double>(1 + pooled.samples);
    pooled.mc_se = std::sqrt(pooled.p * (1.0 - pooled.p) / static_cast<double>(pooled.samples));
    pooled.acceptance_rate = static_cast<double>(pooled.accepted) /
                             static_cast<double>(pooled.steps);
    return pooled;
}

}  // namespace wim
