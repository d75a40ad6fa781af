#include <doctest.h>

#include <json.hpp>

#include "neurochaos/errors.hpp"
#include "neurochaos/nl_layer.hpp"
#include "neurochaos/random.hpp"
#include "oracles.hpp"

using namespace nl;

namespace {

Matrix random_matrix(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = rng.uniform();
    return m;
}

}  // namespace

TEST_CASE("build_layer logistic counts") {
    const NeuronConfig cfg{0.3, 0.4, 0.05};
    // enumeration oracle for round-half-up of fraction * n
    for (std::size_t n = 1; n <= 40; ++n)
        for (double f : {0.0, 0.25, 0.5, 0.75, 1.0}) {
            std::size_t expected = 0;
            while (static_cast<double>(expected) + 0.5 <= f * static_cast<double>(n)) ++expected;
            const auto layer = build_layer(n, cfg, f, n * 31);
            REQUIRE(layer.n_logistic() == expected);
            REQUIRE(layer.assignment.size() == n);
        }
    CHECK(build_layer(10, cfg, 0.25, 1).n_logistic() == 3);
    CHECK(build_layer(10, cfg, 0.25, 99).n_logistic() == 3);
    const auto chaosnet = build_layer(4, cfg, 0.0, 5);
    for (auto k : chaosnet.assignment) CHECK(k == MapKind::SkewTentGLS);
    CHECK(build_layer(4, cfg, 0.5, 7) == build_layer(4, cfg, 0.5, 7));
}

TEST_CASE("build_layer errors") {
    const NeuronConfig cfg{0.3, 0.4, 0.05};
    CHECK_THROWS_AS(build_layer(0, cfg, 0.5, 1), InputError);
    CHECK_THROWS_AS(build_layer(4, cfg, -0.1, 1), InputError);
    CHECK_THROWS_AS(build_layer(4, cfg, 1.5, 1), InputError);
    CHECK(build_layer(4, {1.0, 0.4, 0.05}, 0.0, 1).cfg.q == 0.999);
}

TEST_CASE("placement histogram is uniform") {
    const NeuronConfig cfg{0.3, 0.4, 0.05};
    std::vector<int> hits(8, 0);
    const int layers = 10000;
    for (int s = 0; s < layers; ++s) {
        const auto layer = build_layer(8, cfg, 0.5, static_cast<std::uint64_t>(s));
        for (std::size_t i = 0; i < 8; ++i) hits[i] += layer.assignment[i] == MapKind::Logistic;
    }
    for (int h : hits) CHECK(std::abs(h / double(layers) - 0.5) <= 0.03);
}

TEST_CASE("transform_sample examples") {
    const auto layer = build_layer(1, {0.3, 0.5, 0.01}, 0.0, 0);
    const auto v = transform_sample(layer, std::vector<double>{0.3});
    REQUIRE(v.size() == 4);
    CHECK(v[0] == 0.0);
    CHECK(v[1] == 0.0);
    CHECK(v[2] == doctest::Approx(0.09));
    CHECK(v[3] == 0.0);

    const auto l3 = build_layer(3, {0.21, 0.37, 0.02}, 0.5, 4);
    const std::vector<double> s{0.1, 0.6, 0.95};
    CHECK(transform_sample(l3, s) == transform_sample(l3, s));

    CHECK_THROWS_AS(transform_sample(l3, std::vector<double>{0.1, 0.2}), InputError);
    CHECK_THROWS_AS(transform_sample(l3, std::vector<double>{0.1, 0.2, 1.1}), InputError);
    CHECK_NOTHROW(transform_sample(l3, std::vector<double>{0.1, 0.2, 1.0 + 1e-10}));
}

TEST_CASE("transform_sample equals per-attribute composition") {
    Rng rng(91);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(9);
        const NeuronConfig cfg{rng.uniform(0.001, 0.999), rng.uniform(0.01, 0.99), rng.uniform(0.001, 0.4)};
        const double frac = std::vector<double>{0.0, 0.25, 0.5, 0.75}[rng.below(4)];
        const auto layer = build_layer(n, cfg, frac, rng.next());
        std::vector<double> sample(n);
        for (auto& x : sample) x = rng.uniform();
        const auto v = transform_sample(layer, sample);
        for (std::size_t i = 0; i < n; ++i) {
            const bool logistic = layer.assignment[i] == MapKind::Logistic;
            const auto o = oracle::naive_fire(logistic, layer.cfg.q, cfg.b, cfg.epsilon, sample[i]);
            REQUIRE(v[i] == o.firing_rate);
            REQUIRE(v[n + i] == static_cast<double>(o.firing_time));
            REQUIRE(v[2 * n + i] == o.energy);
            REQUIRE(std::abs(v[3 * n + i] - o.entropy) <= 1e-12);
        }
    }
}

TEST_CASE("ChaosNet layer equals a GLS-only implementation") {
    const NeuronConfig cfg{0.93, 0.49, 0.166};
    const auto layer = build_layer(5, cfg, 0.0, 123);
    const Matrix x = random_matrix(20, 5, 8);
    const Matrix f = transform_dataset(layer, x);
    for (std::size_t r = 0; r < x.rows(); ++r)
        for (std::size_t i = 0; i < 5; ++i) {
            const auto o = oracle::naive_fire(false, cfg.q, cfg.b, cfg.epsilon, x(r, i));
            REQUIRE(f(r, 5 + i) == static_cast<double>(o.firing_time));
            REQUIRE(f(r, 10 + i) == o.energy);
        }
}

TEST_CASE("transform_dataset") {
    const auto layer = build_layer(6, {0.4, 0.3, 0.03}, 0.5, 17);
    CHECK(transform_dataset(layer, Matrix(0, 6)).rows() == 0);

    Matrix twice(2, 6, 0.42);
    const auto f2 = transform_dataset(layer, twice);
    CHECK(std::equal(f2.row(0).begin(), f2.row(0).end(), f2.row(1).begin()));

    const Matrix x = random_matrix(57, 6, 3);
    const auto seq = transform_dataset(layer, x, 1);
    for (std::size_t r = 0; r < x.rows(); ++r) {
        const auto row = transform_sample(layer, x.row(r));
        REQUIRE(std::equal(row.begin(), row.end(), seq.row(r).begin()));
    }
    for (unsigned t : {2u, 3u, 8u}) CHECK(transform_dataset(layer, x, t) == seq);

    Matrix bad = x;
    bad(13, 2) = 1.5;
    try {
        transform_dataset(layer, bad, 4);
        FAIL("expected InputError");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("row 13") != std::string::npos);
    }
}

TEST_CASE("LayerSpec JSON round trip") {
    const auto layer = build_layer(7, {0.12, 0.34, 0.056}, 0.75, 0xdeadbeefcafeULL);
    const nlohmann::json j = layer;
    CHECK(j.at("assignment").size() == 7);
    CHECK(j.get<LayerSpec>() == layer);
    nlohmann::json broken = j;
    broken["assignment"].erase(0);
    CHECK_THROWS_AS(broken.get<LayerSpec>(), InputError);
}
