#pragma once

#include <cstdlib>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "wim/chisq.hpp"
#include "wim/errors.hpp"
#include "wim/fit.hpp"
#include "wim/markov_basis.hpp"
#include "wim/mcmc.hpp"
#include "wim/model.hpp"
#include "wim/suffstat.hpp"
#include "wim/version.hpp"

namespace wim {

using nlohmann::json;

// ---------------------------------------------------------------------------
// Table CSV: I lines of J comma-separated nonnegative integers, no header.

inline ContingencyTable parse_table_csv(std::istream& in) {
    std::vector<long long> counts;
    int cols = -1;
    int rows = 0;
    int line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;

        std::vector<long long> row;
        std::stringstream fields(line);
        std::string field;
        int field_no = 0;
        while (std::getline(fields, field, ',')) {
            ++field_no;
            const auto where = "line " + std::to_string(line_no) + ", field " +
                               std::to_string(field_no);
            size_t b = field.find_first_not_of(" \t");
            size_t e = field.find_last_not_of(" \t");
            if (b == std::string::npos) throw input_error("csv: empty field at " + where);
            field = field.substr(b, e - b + 1);
            size_t used = 0;
            long long v = 0;
            try {
                v = std::stoll(field, &used);
            } catch (const std::exception&) {
                throw input_error("csv: cannot parse '" + field + "' at " + where);
            }
            if (used != field.size())
                throw input_error("csv: cannot parse '" + field + "' at " + where);
            if (v < 0) throw input_error("csv: negative count " + field + " at " + where);
            row.push_back(v);
        }
        if (line.back() == ',')
            throw input_error("csv: empty field at line " + std::to_string(line_no) +
                              ", field " + std::to_string(field_no + 1));
        if (cols < 0) {
            cols = static_cast<int>(row.size());
        } else if (static_cast<int>(row.size()) != cols) {
            throw input_error("csv: ragged rows: line " + std::to_string(line_no) + " has " +
                              std::to_string(row.size()) + " fields, expected " +
                              std::to_string(cols));
        }
        ++rows;
        counts.insert(counts.end(), row.begin(), row.end());
    }
    if (rows == 0) throw input_error("csv: no data rows");
    return make_table(Shape{rows, cols}, std::move(counts));
}

inline ContingencyTable read_table_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open table file " + path);
    return parse_table_csv(in);
}

// ---------------------------------------------------------------------------
// Model JSON: {"rows": I, "cols": J, "minors": <spec>} where <spec> is the
// literal string "all", a list of [i,j] anchors, or {"all_except": [[i,j],..]}.

inline MinorSet model_from_json(const json& j) {
    if (!j.is_object()) throw input_error("model must be a JSON object");
    for (const char* key : {"rows", "cols", "minors"})
        if (!j.contains(key))
            throw input_error(std::string("model is missing the field '") + key + "'");
    if (!j["rows"].is_number_integer() || !j["cols"].is_number_integer())
        throw input_error("model rows and cols must be integers");
    Shape shape{j["rows"].get<int>(), j["cols"].get<int>()};
    if (shape.rows > 512 || shape.cols > 512)
        throw input_error("table shape too large (limit 512 per side)");

    auto anchor_of = [](const json& e) -> MinorAnchor {
        if (!e.is_array() || e.size() != 2 || !e[0].is_number_integer() ||
            !e[1].is_number_integer())
            throw input_error("minor anchors must be [i,j] integer pairs, got " + e.dump());
        return MinorAnchor{e[0].get<int>(), e[1].get<int>()};
    };

    const json& m = j["minors"];
    std::vector<MinorAnchor> anchors;
    if (m.is_string()) {
        if (m.get<std::string>() != "all")
            throw input_error("unknown minors keyword '" + m.get<std::string>() +
                              "' (expected \"all\")");
        anchors = all_anchors(shape);
    } else if (m.is_array()) {
        for (const auto& e : m) anchors.push_back(anchor_of(e));
    } else if (m.is_object() && m.contains("all_except") && m.size() == 1) {
        if (!m["all_except"].is_array())
            throw input_error("all_except must be a list of [i,j] anchors");
        std::vector<MinorAnchor> removed;
        for (const auto& e : m["all_except"]) removed.push_back(anchor_of(e));
        MinorSet rm = validate_model(shape, std::move(removed));
        for (const auto& a : all_anchors(shape))
            if (!rm.contains(a)) anchors.push_back(a);
    } else {
        throw input_error(
            "minors must be \"all\", a list of [i,j], or {\"all_except\": [...]}");
    }
    return validate_model(shape, std::move(anchors));
}

inline MinorSet read_model_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open model file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw input_error("model file " + path + ": " + e.what());
    }
    return model_from_json(j);
}

inline json model_to_json(const MinorSet& model) {
    json minors = json::array();
    for (const auto& a : model.anchors) minors.push_back({a.row, a.col});
    return {{"rows", model.shape.rows}, {"cols", model.shape.cols}, {"minors", minors}};
}

// ---------------------------------------------------------------------------
// Report pieces. Numbers are formatted once through num_str so that text and
// JSON output carry the identical value.

inline std::string num_str(double x) { return json(x).dump(); }

inline json cell_json(Cell c) { return json::array({c.row, c.col}); }

inline json cells_json(const std::vector<Cell>& cells) {
    json a = json::array();
    for (Cell c : cells) a.push_back(cell_json(c));
    return a;
}

template <typename T>
inline json grid_json(Shape shape, const std::vector<T>& v) {
    json rows = json::array();
    for (int i = 0; i < shape.rows; ++i) {
        json row = json::array();
        for (int j = 0; j < shape.cols; ++j) row.push_back(v[i * shape.cols + j]);
        rows.push_back(std::move(row));
    }
    return rows;
}

inline json runs_json(const std::vector<std::vector<Cell>>& runs) {
    json a = json::array();
    for (const auto& run : runs) a.push_back(cells_json(run));
    return a;
}

inline json decomposition_json(const Decomposition& d) {
    json out{{"r", d.r()}, {"c", d.c()}, {"f", d.f()}, {"k", d.k()}};
    out["mcrs"] = runs_json(d.mcrs);
    out["mccs"] = runs_json(d.mccs);
    out["free_cells"] = cells_json(d.free_cells);
    out["components"] = runs_json(d.components);
    out["corners"] = cells_json(d.corners);
    return out;
}

inline json suffstat_json(const SuffStatMatrix& a) {
    json cols = json::array();
    for (const auto& col : a.columns)
        cols.push_back({{"kind", column_kind_name(col.kind)},
                        {"label", cell_json(col.label)},
                        {"cells", cells_json(col.cells)}});
    return {{"rank", a.rank},
            {"df", a.df()},
            {"column_count", static_cast<int>(a.columns.size())},
            {"columns", std::move(cols)}};
}

inline json parametrization_json(const Parametrization& par) {
    json cells = json::array();
    for (int idx = 0; idx < par.shape.cell_count(); ++idx) {
        Cell c = par.shape.cell_at(idx);
        json factors = json::array();
        for (int k : par.factors[idx]) factors.push_back(k + 1);
        cells.push_back(
            {{"cell", cell_json(c)}, {"factors", factors}, {"monomial", par.monomial(c)}});
    }
    return {{"cells", std::move(cells)}};
}

// Text form of a move: signed cells in row-major order, e.g. "+(1,1) -(1,2)".
inline std::string move_text(const Move& mv, Shape shape) {
    std::string s;
    for (int idx = 0; idx < shape.cell_count(); ++idx) {
        int v = mv.delta[idx];
        if (v == 0) continue;
        if (!s.empty()) s += " ";
        s += v > 0 ? "+" : "-";
        if (std::abs(v) > 1) s += std::to_string(std::abs(v));
        s += cell_str(shape.cell_at(idx));
    }
    return s;
}

inline json basis_json(const std::vector<Move>& basis, Shape shape) {
    json moves = json::array();
    for (const auto& mv : basis) moves.push_back(grid_json(shape, mv.delta));
    return {{"count", static_cast<int>(basis.size())}, {"moves", std::move(moves)}};
}

inline json table_json(const ContingencyTable& h) {
    return {{"rows", h.shape.rows},
            {"cols", h.shape.cols},
            {"counts", grid_json(h.shape, h.counts)},
            {"total", h.total()}};
}

inline json fit_json(const ContingencyTable& h, const FittedTable& fit) {
    const double n = static_cast<double>(h.total());
    std::vector<double> fitted(fit.probs.size());
    for (size_t i = 0; i < fit.probs.size(); ++i) fitted[i] = n * fit.probs[i];
    return {{"converged", fit.converged},
            {"iterations", fit.iterations},
            {"birch_residual", fit.birch_residual},
            {"fitted_probs", grid_json(fit.shape, fit.probs)},
            {"fitted_counts", grid_json(fit.shape, fitted)}};
}

inline json asymptotic_json(double c2_stat, double g2_stat, int df) {
    return {{"c2", c2_stat},
            {"g2", g2_stat},
            {"df", df},
            {"p_asymptotic_c2", df > 0 ? chisq_sf(c2_stat, df) : 1.0},
            {"p_asymptotic_g2", df > 0 ? chisq_sf(g2_stat, df) : 1.0}};
}

inline json exact_json(const ExactTestResult& r, int chains) {
    return {{"stat", stat_name(r.stat)},
            {"stat_observed", r.stat_observed},
            {"p_exact", r.p},
            {"mc_se", r.mc_se},
            {"exceedances", r.exceedances},
            {"samples", r.samples},
            {"accepted", r.accepted},
            {"steps", r.steps},
            {"acceptance_rate", r.acceptance_rate},
            {"params",
             {{"samples_per_chain", r.options.samples},
              {"burn_in", r.options.burn_in},
              {"thinning", r.options.thinning},
              {"seed", r.options.rng.seed},
              {"chains", chains},
              {"rng", rng_algorithm}}}};
}

inline json report_header() {
    return {{"schema_version", report_schema_version},
            {"provenance", {{"tool", "wim"}, {"version", version}, {"rng", rng_algorithm}}}};
}

}  // namespace wim
