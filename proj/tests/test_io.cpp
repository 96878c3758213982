#include <catch2/catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "helpers.hpp"
#include "wim/wim.hpp"

using namespace wim;
using testutil::data_path;
using testutil::model;

namespace {

ContingencyTable parse(const std::string& text) {
    std::istringstream in(text);
    return parse_table_csv(in);
}

}  // namespace

TEST_CASE("CSV tables parse") {
    ContingencyTable h = parse("7,5,0\n4,5,2\n1,5,5\n");
    CHECK(h.shape.rows == 3);
    CHECK(h.shape.cols == 3);
    CHECK(h.counts == std::vector<long long>{7, 5, 0, 4, 5, 2, 1, 5, 5});
    CHECK(h.total() == 34);
    CHECK(h.at({2, 3}) == 2);

    // Windows line endings, surrounding spaces, and blank lines are accepted.
    ContingencyTable w = parse("\n 1 , 2 \r\n3,4\r\n\n");
    CHECK(w.shape.rows == 2);
    CHECK(w.counts == std::vector<long long>{1, 2, 3, 4});

    ContingencyTable one = parse("5,6");
    CHECK(one.shape.rows == 1);
    CHECK(one.shape.cols == 2);
}

TEST_CASE("CSV tables reject malformed input") {
    CHECK_THROWS_AS(parse("1,2\n3\n"), input_error);       // ragged
    CHECK_THROWS_AS(parse("1,-2\n3,4\n"), input_error);    // negative
    CHECK_THROWS_AS(parse("1,a\n3,4\n"), input_error);     // not a number
    CHECK_THROWS_AS(parse("1,2.5\n3,4\n"), input_error);   // not an integer
    CHECK_THROWS_AS(parse("1,2,\n3,4,\n"), input_error);   // trailing comma
    CHECK_THROWS_AS(parse("1,,2\n"), input_error);         // empty field
    CHECK_THROWS_AS(parse(""), input_error);               // no rows
    CHECK_THROWS_AS(parse("\n\n"), input_error);           // no rows
    CHECK_THROWS_AS(read_table_csv("/nonexistent/table.csv"), input_error);
}

TEST_CASE("bundled CSV files load") {
    CHECK(read_table_csv(data_path("biostat.csv")).total() == 34);
    CHECK(read_table_csv(data_path("chol.csv")).total() == 103);
    CHECK(read_table_csv(data_path("swiss.csv")).total() == 40);
}

TEST_CASE("model JSON accepts the three minor-set forms") {
    MinorSet listed = model_from_json(
        json{{"rows", 3}, {"cols", 3}, {"minors", json::array({{1, 1}, {2, 2}})}});
    CHECK(listed.anchors == std::vector<MinorAnchor>{{1, 1}, {2, 2}});

    MinorSet full = model_from_json(json{{"rows", 3}, {"cols", 4}, {"minors", "all"}});
    CHECK(full.anchors.size() == 6);

    MinorSet holed = model_from_json(
        json{{"rows", 4},
             {"cols", 4},
             {"minors", json{{"all_except", json::array({{2, 2}})}}}});
    CHECK(holed.anchors.size() == 8);
    CHECK_FALSE(holed.contains({2, 2}));
}

TEST_CASE("model JSON rejects malformed input") {
    auto bad = [](json j) { CHECK_THROWS_AS(model_from_json(j), input_error); };
    bad(json{{"rows", 3}, {"cols", 3}});                                   // missing minors
    bad(json{{"rows", 3}, {"minors", "all"}});                             // missing cols
    bad(json{{"rows", 3.5}, {"cols", 3}, {"minors", "all"}});              // float rows
    bad(json{{"rows", 1}, {"cols", 3}, {"minors", "all"}});                // too small
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", "everything"}});         // bad keyword
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", json::array({{1}})}});   // bad pair
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", json::array({{0, 1}})}});
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", json::array({{3, 1}})}});  // row > I-1
    bad(json{{"rows", 3}, {"cols", 3},
             {"minors", json::array({{1, 1}, {1, 1}})}});                  // duplicate
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", json{{"all_except", "x"}}}});
    bad(json{{"rows", 3}, {"cols", 3},
             {"minors", json{{"all_except", json::array()}, {"extra", 1}}}});
    bad(json{{"rows", 3}, {"cols", 3}, {"minors", 7}});                    // wrong type
    CHECK_THROWS_AS(read_model_json("/nonexistent/model.json"), input_error);
}

TEST_CASE("bundled model files load with the expected anchor counts") {
    CHECK(read_model_json(data_path("ex3per3.json")).anchors.size() == 2);
    CHECK(read_model_json(data_path("patexample.json")).anchors.size() == 8);
    CHECK(read_model_json(data_path("chol.json")).anchors.size() == 6);
    CHECK(read_model_json(data_path("m1.json")).anchors.size() == 8);
    CHECK(read_model_json(data_path("m2.json")).anchors.size() == 6);
    CHECK(read_model_json(data_path("full_3x3.json")).anchors.size() == 4);
}

TEST_CASE("model JSON round-trips") {
    for (const char* name : {"ex3per3.json", "patexample.json", "chol.json"}) {
        MinorSet m = read_model_json(data_path(name));
        MinorSet back = model_from_json(model_to_json(m));
        CHECK(back.shape == m.shape);
        CHECK(back.anchors == m.anchors);
    }
}

TEST_CASE("report numbers survive a dump-parse cycle losslessly") {
    for (double x : {0.1, 1.0 / 3.0, 0.9863319621274046, 1e-300, 0.0, 123456.75}) {
        json j = json::parse(num_str(x));
        CHECK(j.get<double>() == x);
    }
}

TEST_CASE("moves render in anchored text form") {
    Move mv;
    mv.delta = {1, -1, 0, -1, 1, 0, 0, 0, 0};
    CHECK(move_text(mv, {3, 3}) == "+(1,1) -(1,2) -(2,1) +(2,2)");
    Move twice;
    twice.delta = {2, -2, 0, 0, -2, 2, 0, 0, 0};
    CHECK(move_text(twice, {3, 3}) == "+2(1,1) -2(1,2) -2(2,2) +2(2,3)");
}

TEST_CASE("grid serialization is row-major and nested") {
    json g = grid_json<long long>({2, 3}, {1, 2, 3, 4, 5, 6});
    CHECK(g == json::parse("[[1,2,3],[4,5,6]]"));
}

TEST_CASE("decomposition and generator reports carry the advertised fields") {
    MinorSet m = read_model_json(data_path("ex3per3.json"));
    json d = decomposition_json(decompose(m));
    CHECK(d["r"] == 3);
    CHECK(d["c"] == 3);
    CHECK(d["f"] == 2);
    CHECK(d["k"] == 1);
    CHECK(d["free_cells"] == json::parse("[[1,3],[3,1]]"));
    CHECK(d["corners"] == json::array());

    SuffStatMatrix a = generators(m);
    json s = suffstat_json(a);
    CHECK(s["rank"] == 7);
    CHECK(s["df"] == 2);
    CHECK(s["column_count"] == 8);
    CHECK(s["columns"].size() == 8);
    for (const auto& col : s["columns"]) {
        CHECK(col.contains("kind"));
        CHECK(col.contains("label"));
        CHECK(col.contains("cells"));
    }

    json par = parametrization_json(parametrize(a));
    CHECK(par["cells"].size() == 9);
    CHECK(par["cells"][0].contains("monomial"));
}

TEST_CASE("report documents validate against the bundled schema") {
    // Minimal draft-07 subset validator: $ref into #/definitions, type,
    // required, properties, items.
    struct Validator {
        const json& schema_root;
        const json& resolve(const json& schema) const {
            if (!schema.contains("$ref")) return schema;
            std::string ref = schema["$ref"].get<std::string>();
            REQUIRE(ref.rfind("#/definitions/", 0) == 0);
            return schema_root["definitions"][ref.substr(14)];
        }
        bool check_type(const json& inst, const std::string& t) const {
            if (t == "object") return inst.is_object();
            if (t == "array") return inst.is_array();
            if (t == "string") return inst.is_string();
            if (t == "integer") return inst.is_number_integer();
            if (t == "number") return inst.is_number();
            if (t == "boolean") return inst.is_boolean();
            return false;
        }
        bool validate(const json& inst, const json& raw, std::string path) const {
            const json& schema = resolve(raw);
            if (schema.contains("type") &&
                !check_type(inst, schema["type"].get<std::string>())) {
                UNSCOPED_INFO("type mismatch at " << path);
                return false;
            }
            if (schema.contains("required"))
                for (const auto& key : schema["required"]) {
                    if (!inst.contains(key.get<std::string>())) {
                        UNSCOPED_INFO("missing " << key << " at " << path);
                        return false;
                    }
                }
            if (schema.contains("properties") && inst.is_object())
                for (auto it = schema["properties"].begin();
                     it != schema["properties"].end(); ++it)
                    if (inst.contains(it.key()) &&
                        !validate(inst[it.key()], it.value(), path + "/" + it.key()))
                        return false;
            if (schema.contains("items") && inst.is_array())
                for (size_t i = 0; i < inst.size(); ++i)
                    if (!validate(inst[i], schema["items"],
                                  path + "/" + std::to_string(i)))
                        return false;
            return true;
        }
    };

    std::ifstream schema_in(std::string(WIM_DOCS_DIR) + "/report.schema.json");
    REQUIRE(schema_in.good());
    json schema = json::parse(schema_in);
    Validator v{schema};

    MinorSet m = read_model_json(data_path("ex3per3.json"));
    ContingencyTable h = read_table_csv(data_path("biostat.csv"));
    SuffStatMatrix a = generators(m);
    auto basis = compute_basis(a);
    FittedTable fit = fit_mle(a, h);
    McmcOptions opts;
    opts.samples = 500;
    opts.burn_in = 200;
    opts.thinning = 5;
    ExactTestResult exact = mcmc_exact_test(a, basis, h, TestStat::g2, opts);

    json report = report_header();
    report["model"] = model_to_json(m);
    report["decomposition"] = decomposition_json(decompose(m));
    report["suffstat"] = suffstat_json(a);
    report["parametrization"] = parametrization_json(parametrize(a));
    report["basis"] = basis_json(basis, m.shape);
    report["table"] = table_json(h);
    report["fit"] = fit_json(h, fit);
    report["tests"] = json::object();
    report["tests"]["asymptotic"] = asymptotic_json(pearson_c2(h, fit), g2(h, fit),
                                                    a.df());
    report["tests"]["exact"] = exact_json(exact, 1);

    CHECK(v.validate(report, schema, ""));

    // The document survives serialization byte-for-byte.
    json reparsed = json::parse(report.dump());
    CHECK(reparsed == report);
    CHECK(reparsed.dump() == report.dump());
}
