// Command-line front end: suffstat | basis | fit | exact | report.
// Exit codes: 0 success, 2 input error, 3 non-convergence, 4 resource limit.

#include <cstdint>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "wim/wim.hpp"

namespace {

using wim::json;

std::string n_str(double x) { return wim::num_str(x); }

void print_grid(std::ostream& os, wim::Shape shape, const std::vector<double>& v,
                const std::string& indent) {
    for (int i = 0; i < shape.rows; ++i) {
        os << indent;
        for (int j = 0; j < shape.cols; ++j)
            os << (j ? " " : "") << n_str(v[i * shape.cols + j]);
        os << "\n";
    }
}

struct SuffStatCmd {
    std::string model_path;
    bool as_json = false;

    int run() const {
        const wim::MinorSet model = wim::read_model_json(model_path);
        const wim::Decomposition dec = wim::decompose(model);
        const wim::SuffStatMatrix a = wim::generators(model, dec);
        const wim::Parametrization par = wim::parametrize(a);

        if (as_json) {
            json out{{"model", wim::model_to_json(model)},
                     {"decomposition", wim::decomposition_json(dec)},
                     {"suffstat", wim::suffstat_json(a)},
                     {"parametrization", wim::parametrization_json(par)}};
            std::cout << out.dump(2) << "\n";
            return 0;
        }
        std::cout << "model: " << model.shape.rows << "x" << model.shape.cols << ", "
                  << model.anchors.size() << " minors\n";
        std::cout << "decomposition: r=" << dec.r() << " c=" << dec.c() << " f=" << dec.f()
                  << " k=" << dec.k() << "\n";
        std::cout << "corners:";
        if (dec.corners.empty()) std::cout << " none";
        for (wim::Cell c : dec.corners) std::cout << " " << wim::cell_str(c);
        std::cout << "\n";
        std::cout << "columns: " << a.columns.size() << ", rank " << a.rank << ", df "
                  << a.df() << "\n";
        for (size_t k = 0; k < a.columns.size(); ++k) {
            const auto& col = a.columns[k];
            std::cout << "  z" << k + 1 << " " << wim::column_kind_name(col.kind) << " "
                      << wim::cell_str(col.label) << ":";
            for (wim::Cell c : col.cells) std::cout << " " << wim::cell_str(c);
            std::cout << "\n";
        }
        std::cout << "parametrization:\n";
        for (int idx = 0; idx < model.shape.cell_count(); ++idx) {
            wim::Cell c = model.shape.cell_at(idx);
            std::cout << "  p" << wim::cell_str(c) << " = " << par.monomial(c) << "\n";
        }
        return 0;
    }
};

struct BasisCmd {
    std::string model_path;
    bool as_json = false;
    int verify_n = 0;
    int degree_cap = 20;
    long long node_budget = 1'000'000;

    int run() const {
        const wim::MinorSet model = wim::read_model_json(model_path);
        const wim::SuffStatMatrix a = wim::generators(model);
        wim::BasisOptions opts;
        opts.degree_cap = degree_cap;
        const std::vector<wim::Move> basis = wim::compute_basis(a, opts);

        wim::ConnectivityReport verify;
        if (verify_n > 0)
            verify = wim::verify_connectivity(basis, a, verify_n, {node_budget});

        if (as_json) {
            json out{{"model", wim::model_to_json(model)},
                     {"basis", wim::basis_json(basis, model.shape)}};
            if (verify_n > 0)
                out["verify"] = {{"n_max", verify_n},
                                 {"connected", verify.connected},
                                 {"fibers_checked", verify.fibers_checked},
                                 {"tables_checked", verify.tables_checked}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "basis: " << basis.size() << " moves\n";
            for (size_t k = 0; k < basis.size(); ++k)
                std::cout << "  " << k + 1 << ": " << wim::move_text(basis[k], model.shape)
                          << "\n";
            if (verify_n > 0)
                std::cout << "verify n<=" << verify_n << ": "
                          << (verify.connected ? "connected" : "NOT CONNECTED") << " ("
                          << verify.fibers_checked << " fibers, " << verify.tables_checked
                          << " tables)\n";
        }
        return verify.connected ? 0 : 1;
    }
};

struct FitCmd {
    std::string model_path;
    std::string table_path;
    bool as_json = false;
    double tol = 1e-10;
    int max_iter = 100000;

    int run() const {
        const wim::MinorSet model = wim::read_model_json(model_path);
        const wim::ContingencyTable h = wim::read_table_csv(table_path);
        const wim::SuffStatMatrix a = wim::generators(model);
        const wim::FittedTable fit = wim::fit_mle(a, h, {tol, max_iter});

        double c2_stat = 0.0, g2_stat = 0.0;
        if (fit.converged) {
            c2_stat = wim::pearson_c2(h, fit);
            g2_stat = wim::g2(h, fit);
        }

        if (as_json) {
            json out{{"model", wim::model_to_json(model)},
                     {"table", wim::table_json(h)},
                     {"fit", wim::fit_json(h, fit)}};
            if (fit.converged)
                out["tests"] = {{"asymptotic", wim::asymptotic_json(c2_stat, g2_stat, a.df())}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "n = " << h.total() << "\n";
            if (fit.converged)
                std::cout << "converged in " << fit.iterations << " iterations, ";
            else
                std::cout << "NOT converged after " << fit.iterations << " iterations, ";
            std::cout << "birch_residual = " << n_str(fit.birch_residual) << "\n";
            std::vector<double> fitted(fit.probs.size());
            for (size_t i = 0; i < fitted.size(); ++i)
                fitted[i] = fit.probs[i] * static_cast<double>(h.total());
            std::cout << "fitted counts:\n";
            print_grid(std::cout, h.shape, fitted, "  ");
            if (fit.converged) {
                std::cout << "c2 = " << n_str(c2_stat) << ", g2 = " << n_str(g2_stat)
                          << ", df = " << a.df() << "\n";
                double pc = a.df() > 0 ? wim::chisq_sf(c2_stat, a.df()) : 1.0;
                double pg = a.df() > 0 ? wim::chisq_sf(g2_stat, a.df()) : 1.0;
                std::cout << "p_asymptotic_c2 = " << n_str(pc) << "\n";
                std::cout << "p_asymptotic_g2 = " << n_str(pg) << "\n";
            }
        }
        if (!fit.converged) {
            std::cerr << "error: fit did not converge within " << max_iter << " iterations\n";
            return 3;
        }
        return 0;
    }
};

struct ExactCmd {
    std::string model_path;
    std::string table_path;
    bool as_json = false;
    std::string stat = "c2";
    long long samples = 10000;
    long long burn_in = 50000;
    long long thinning = 50;
    std::uint64_t seed = 0;
    int chains = 1;
    int degree_cap = 20;

    int run() const {
        const wim::MinorSet model = wim::read_model_json(model_path);
        const wim::ContingencyTable h = wim::read_table_csv(table_path);
        const wim::SuffStatMatrix a = wim::generators(model);
        if (!wim::fit_mle(a, h).converged) {
            std::cerr << "error: MLE did not converge; exact test aborted\n";
            return 3;
        }
        wim::BasisOptions bopts;
        bopts.degree_cap = degree_cap;
        const std::vector<wim::Move> basis = wim::compute_basis(a, bopts);
        const wim::TestStat which = stat == "g2" ? wim::TestStat::g2 : wim::TestStat::c2;
        wim::McmcOptions opts{samples, burn_in, thinning, {seed}};
        const wim::ExactTestResult res =
            wim::pooled_exact_test(a, basis, h, which, opts, chains);

        if (as_json) {
            json out{{"model", wim::model_to_json(model)},
                     {"table", wim::table_json(h)},
                     {"exact", wim::exact_json(res, chains)}};
            std::cout << out.dump(2) << "\n";
        } else {
            std::cout << "stat = " << wim::stat_name(res.stat)
                      << ", observed = " << n_str(res.stat_observed) << "\n";
            std::cout << "p_exact = " << n_str(res.p) << ", mc_se = " << n_str(res.mc_se)
                      << " (" << res.exceedances << "/" << res.samples << " samples at or above)\n";
            std::cout << "acceptance_rate = " << n_str(res.acceptance_rate) << " over "
                      << res.steps << " steps\n";
            std::cout << "params: samples=" << samples << " burnin=" << burn_in
                      << " thin=" << thinning << " seed=" << seed << " chains=" << chains
                      << " rng=" << wim::rng_algorithm << "\n";
        }
        return 0;
    }
};

struct ReportCmd {
    std::string model_path;
    std::string table_path;
    double tol = 1e-10;
    int max_iter = 100000;
    std::string stat = "c2";
    long long samples = 10000;
    long long burn_in = 50000;
    long long thinning = 50;
    std::uint64_t seed = 0;
    int chains = 1;
    int degree_cap = 20;

    int run() const {
        const wim::MinorSet model = wim::read_model_json(model_path);
        const wim::ContingencyTable h = wim::read_table_csv(table_path);
        const wim::Decomposition dec = wim::decompose(model);
        const wim::SuffStatMatrix a = wim::generators(model, dec);
        const wim::Parametrization par = wim::parametrize(a);
        wim::BasisOptions bopts;
        bopts.degree_cap = degree_cap;
        const std::vector<wim::Move> basis = wim::compute_basis(a, bopts);
        const wim::FittedTable fit = wim::fit_mle(a, h, {tol, max_iter});
        if (!fit.converged) {
            std::cerr << "error: fit did not converge within " << max_iter << " iterations\n";
            return 3;
        }
        const double c2_stat = wim::pearson_c2(h, fit);
        const double g2_stat = wim::g2(h, fit);
        const wim::TestStat which = stat == "g2" ? wim::TestStat::g2 : wim::TestStat::c2;
        wim::McmcOptions opts{samples, burn_in, thinning, {seed}};
        const wim::ExactTestResult res =
            wim::pooled_exact_test(a, basis, h, which, opts, chains);

        json out = wim::report_header();
        out["model"] = wim::model_to_json(model);
        out["decomposition"] = wim::decomposition_json(dec);
        out["suffstat"] = wim::suffstat_json(a);
        out["parametrization"] = wim::parametrization_json(par);
        out["basis"] = wim::basis_json(basis, model.shape);
        out["table"] = wim::table_json(h);
        out["fit"] = wim::fit_json(h, fit);
        out["tests"] = json::object();
        out["tests"]["asymptotic"] = wim::asymptotic_json(c2_stat, g2_stat, a.df());
        out["tests"]["exact"] = wim::exact_json(res, chains);
        std::cout << out.dump(2) << "\n";
        return 0;
    }
};

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"weakened independence models for two-way contingency tables"};
    app.require_subcommand(1);

    SuffStatCmd suffstat;
    auto* sub_suffstat =
        app.add_subcommand("suffstat", "decomposition, sufficient statistic, parametrization");
    sub_suffstat->add_option("--model", suffstat.model_path, "model JSON file")->required();
    sub_suffstat->add_flag("--json", suffstat.as_json, "emit JSON");

    BasisCmd basis;
    auto* sub_basis = app.add_subcommand("basis", "Markov basis of the model");
    sub_basis->add_option("--model", basis.model_path, "model JSON file")->required();
    sub_basis->add_flag("--json", basis.as_json, "emit JSON");
    sub_basis->add_option("--verify", basis.verify_n,
                          "check fiber connectivity for all totals up to N");
    sub_basis->add_option("--degree-cap", basis.degree_cap, "binomial degree cap");
    sub_basis->add_option("--node-budget", basis.node_budget, "fiber enumeration budget");

    FitCmd fit;
    auto* sub_fit = app.add_subcommand("fit", "maximum-likelihood fit and asymptotic tests");
    sub_fit->add_option("--model", fit.model_path, "model JSON file")->required();
    sub_fit->add_option("--table", fit.table_path, "table CSV file")->required();
    sub_fit->add_flag("--json", fit.as_json, "emit JSON");
    sub_fit->add_option("--tol", fit.tol, "Birch residual tolerance (relative to n)");
    sub_fit->add_option("--max-iter", fit.max_iter, "iteration cap");

    ExactCmd exact;
    auto* sub_exact = app.add_subcommand("exact", "MCMC exact goodness-of-fit test");
    sub_exact->add_option("--model", exact.model_path, "model JSON file")->required();
    sub_exact->add_option("--table", exact.table_path, "table CSV file")->required();
    sub_exact->add_flag("--json", exact.as_json, "emit JSON");
    sub_exact->add_option("--stat", exact.stat, "test statistic")
        ->check(CLI::IsMember({"c2", "g2"}));
    sub_exact->add_option("--samples", exact.samples, "recorded states per chain");
    sub_exact->add_option("--burnin", exact.burn_in, "burn-in steps");
    sub_exact->add_option("--thin", exact.thinning, "steps between recorded states");
    sub_exact->add_option("--seed", exact.seed, "64-bit RNG seed (decimal)");
    sub_exact->add_option("--chains", exact.chains, "independent pooled chains");
    sub_exact->add_option("--degree-cap", exact.degree_cap, "binomial degree cap");

    ReportCmd report;
    auto* sub_report = app.add_subcommand("report", "full JSON report");
    sub_report->add_option("--model", report.model_path, "model JSON file")->required();
    sub_report->add_option("--table", report.table_path, "table CSV file")->required();
    sub_report->add_option("--tol", report.tol, "Birch residual tolerance (relative to n)");
    sub_report->add_option("--max-iter", report.max_iter, "iteration cap");
    sub_report->add_option("--stat", report.stat, "exact-test statistic")
        ->check(CLI::IsMember({"c2", "g2"}));
    sub_report->add_option("--samples", report.samples, "recorded states per chain");
    sub_report->add_option("--burnin", report.burn_in, "burn-in steps");
    sub_report->add_option("--thin", report.thinning, "steps between recorded states");
    sub_report->add_option("--seed", report.seed, "64-bit RNG seed (decimal)");
    sub_report->add_option("--chains", report.chains, "independent pooled chains");
    sub_report->add_option("--degree-cap", report.degree_cap, "binomial degree cap");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*sub_suffstat) return suffstat.run();
        if (*sub_basis) return basis.run();
        if (*sub_fit) return fit.run();
        if (*sub_exact) return exact.run();
        if (*sub_report) return report.run();
    } catch (const wim::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const wim::resource_limit& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
