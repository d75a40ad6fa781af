#include <doctest.h>

#include <algorithm>
#include <set>

#include "neurochaos/data_pipeline.hpp"
#include "neurochaos/errors.hpp"
#include "neurochaos/random.hpp"

using namespace nl;

namespace {

DatasetSchema small_schema() {
    DatasetSchema s;
    s.name = "small";
    s.feature_columns = {"a", "b"};
    s.label_column = "label";
    s.positive_label = "fire";
    s.negative_label = "not fire";
    return s;
}

DatasetSchema area_schema() {
    DatasetSchema s;
    s.name = "area";
    s.feature_columns = {"t", "w"};
    s.binarize_rule = BinarizeRule{"area", 0.0, ">"};
    return s;
}

std::vector<int> labels_with(std::size_t zeros, std::size_t ones) {
    std::vector<int> y(zeros, 0);
    y.insert(y.end(), ones, 1);
    return y;
}

}  // namespace

TEST_CASE("synthetic fixture loads with padded names and labels") {
    const auto schema = load_schema(NL_TEST_DATA_DIR "/synthetic_schema.json");
    LoadReport rep;
    const auto ds = load_csv(NL_TEST_DATA_DIR "/synthetic_fire.csv", schema, {}, &rep);
    CHECK(ds.size() == 120);
    CHECK(ds.X.cols() == 5);
    CHECK(ds.attribute_names == std::vector<std::string>{"Temperature", "RH", "Ws", "Rain", "FFMC"});
    const auto counts = ds.class_counts();
    CHECK(counts[0] == 36);
    CHECK(counts[1] == 84);
    CHECK(rep.skipped_lines >= 1);
    CHECK(ds.content_hash != 0);
}

TEST_CASE("parse_csv skips titles and repeated headers") {
    const std::string text =
        "Region A\n"
        "a,b,label\n"
        "1,2,fire\n"
        "3,4,not fire\n"
        "\n"
        "Region B\n"
        "a,b,label\n"
        "5,6, fire \n";
    LoadReport rep;
    const auto ds = parse_csv(text, small_schema(), {}, &rep);
    CHECK(ds.size() == 3);
    CHECK(ds.y == std::vector<int>{1, 0, 1});
    CHECK(ds.X(2, 1) == 6.0);
    CHECK(rep.skipped_lines == 4);
}

TEST_CASE("parse_csv corrupt row: strict fails with line, lenient skips") {
    const std::string text = "a,b,label\n1,2,fire\n14.6 9,4,fire\n3,4,not fire\n";
    try {
        parse_csv(text, small_schema());
        FAIL("expected error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    LoadReport rep;
    const auto ds = parse_csv(text, small_schema(), LoadOptions{true}, &rep);
    CHECK(ds.size() == 2);
    REQUIRE(rep.rejected.size() == 1);
    CHECK(rep.rejected[0].line == 3);
}

TEST_CASE("parse_csv label and column errors") {
    CHECK_THROWS_AS(parse_csv("a,b,label\n1,2,maybe\n", small_schema()), InputError);
    CHECK_THROWS_AS(parse_csv("a,label\n1,fire\n", small_schema()), InputError);
    CHECK_THROWS_AS(parse_csv("", small_schema()), InputError);
    CHECK_THROWS_AS(parse_csv("a,b,label\n", small_schema()), InputError);
    CHECK_THROWS_AS(load_csv("/nonexistent/file.csv", small_schema()), InputError);
}

TEST_CASE("binarize rule boundary") {
    const auto ds = parse_csv("t,w,area\n1,2,0\n3,4,0.01\n5,6,12\n7,8,0.0\n", area_schema());
    CHECK(ds.y == std::vector<int>{0, 1, 1, 0});
    CHECK(BinarizeRule{"x", 1.0, ">="}.apply(1.0));
    CHECK_FALSE(BinarizeRule{"x", 1.0, "<"}.apply(1.0));
}

TEST_CASE("split_csv_record handles quotes") {
    CHECK(split_csv_record("a,\"b,c\",\"d\"\"e\"") == std::vector<std::string>{"a", "b,c", "d\"e"});
    CHECK(split_csv_record("1,,3") == std::vector<std::string>{"1", "", "3"});
}

TEST_CASE("normalizer examples") {
    Matrix x(3, 2);
    x(0, 0) = 0, x(1, 0) = 5, x(2, 0) = 10;
    x(0, 1) = 7, x(1, 1) = 7, x(2, 1) = 7;
    const std::vector<std::size_t> idx{0, 1, 2};
    const auto st = fit_normalizer(x, idx);
    const auto z = apply_normalizer(st, x);
    CHECK(z(0, 0) == 0.0);
    CHECK(z(1, 0) == 0.5);
    CHECK(z(2, 0) == 1.0);
    for (std::size_t r = 0; r < 3; ++r) CHECK(z(r, 1) == 0.5);

    Matrix probe(2, 2);
    probe(0, 0) = -5, probe(1, 0) = 20, probe(0, 1) = 7, probe(1, 1) = 8;
    const auto zp = apply_normalizer(st, probe);
    CHECK(zp(0, 0) == 0.0);
    CHECK(zp(1, 0) == 1.0);

    CHECK_THROWS_AS(fit_normalizer(x, std::vector<std::size_t>{}), InputError);
    CHECK_THROWS_AS(apply_normalizer(st, Matrix(1, 3)), InputError);
}

TEST_CASE("normalizer against a column scan and leakage sentinel") {
    Rng rng(77);
    Matrix x(60, 4);
    for (std::size_t r = 0; r < 60; ++r)
        for (std::size_t c = 0; c < 4; ++c) x(r, c) = rng.uniform(-50, 50);
    std::vector<std::size_t> train;
    for (std::size_t r = 0; r < 60; r += 2) train.push_back(r);
    const auto st = fit_normalizer(x, train);
    for (std::size_t c = 0; c < 4; ++c) {
        double lo = 1e300, hi = -1e300;
        for (auto r : train) lo = std::min(lo, x(r, c)), hi = std::max(hi, x(r, c));
        CHECK(st.min[c] == lo);
        CHECK(st.max[c] == hi);
    }
    // perturbing non-training rows must not change the fit
    Matrix y = x;
    for (std::size_t r = 1; r < 60; r += 2) y(r, 0) = 1e9;
    CHECK(fit_normalizer(y, train) == st);
}

TEST_CASE("stratified split sizes") {
    const auto y = labels_with(106, 138);
    const auto plan = stratified_split(y, 42);
    CHECK(plan.train.size() == 194);
    CHECK(plan.test.size() == 50);
    std::size_t ones = 0;
    for (auto i : plan.train) ones += y[i];
    CHECK(ones == 110);

    const auto small = stratified_split(labels_with(2, 3), 1);
    CHECK(small.train.size() == 3);
    CHECK(small.test.size() == 2);
}

TEST_CASE("stratified split partitions, is deterministic and depends on seed") {
    const auto y = labels_with(40, 61);
    const auto a = stratified_split(y, 7), b = stratified_split(y, 7), c = stratified_split(y, 8);
    CHECK(a.train == b.train);
    CHECK(a.test == b.test);
    CHECK(a.train != c.train);
    std::set<std::size_t> all(a.train.begin(), a.train.end());
    for (auto i : a.test) CHECK(all.insert(i).second);
    CHECK(all.size() == y.size());
    CHECK(std::is_sorted(a.train.begin(), a.train.end()));
    CHECK(std::is_sorted(a.test.begin(), a.test.end()));
}

TEST_CASE("stratified split errors") {
    const auto y = labels_with(10, 10);
    CHECK_THROWS_AS(stratified_split(y, 1, 1.0), InputError);
    CHECK_THROWS_AS(stratified_split(y, 1, 0.0), InputError);
    CHECK_THROWS_AS(stratified_split(labels_with(1, 10), 1), InputError);
}

TEST_CASE("lstr_draw") {
    const auto y = labels_with(30, 30);
    std::vector<std::size_t> pool;
    for (std::size_t i = 0; i < 60; i += 1) pool.push_back(i);

    const auto one = lstr_draw(y, pool, 1, 5);
    REQUIRE(one.size() == 2);
    CHECK(y[one[0]] + y[one[1]] == 1);

    const auto a = lstr_draw(y, pool, 5, 100), b = lstr_draw(y, pool, 5, 101), a2 = lstr_draw(y, pool, 5, 100);
    CHECK(a == a2);
    CHECK(a != b);
    std::set<std::size_t> uniq(a.begin(), a.end());
    CHECK(uniq.size() == 10);
    for (auto i : a) CHECK(std::find(pool.begin(), pool.end(), i) != pool.end());

    const std::vector<std::size_t> short_pool{0, 1, 30};
    CHECK_THROWS_AS(lstr_draw(y, short_pool, 2, 1), InputError);
    CHECK_THROWS_AS(lstr_draw(y, pool, 0, 1), InputError);
}

TEST_CASE("schema JSON round trip and validation") {
    const auto s = small_schema();
    const nlohmann::json j = s;
    const auto back = j.get<DatasetSchema>();
    CHECK(back.feature_columns == s.feature_columns);
    CHECK(back.negative_label == s.negative_label);
    auto bad = s;
    bad.feature_columns.push_back("label");
    CHECK_THROWS_AS(bad.validate(), InputError);
}
