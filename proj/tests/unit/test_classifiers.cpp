#include <doctest.h>

#include <cmath>

#include "neurochaos/cosine.hpp"
#include "neurochaos/errors.hpp"
#include "neurochaos/random.hpp"
#include "neurochaos/svm.hpp"
#include "oracles.hpp"

using namespace nl;

namespace {

Matrix rows_to_matrix(const std::vector<std::vector<double>>& rows) {
    Matrix m;
    for (const auto& r : rows) m.append_row(r);
    return m;
}

// two Gaussian blobs in d dimensions, separated by `gap`
void blobs(Rng& rng, std::size_t n, std::size_t d, double gap, Matrix& x, std::vector<int>& y) {
    x = Matrix(n, d);
    y.assign(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        y[i] = i % 2;
        for (std::size_t c = 0; c < d; ++c) {
            const double u1 = std::max(rng.uniform(), 1e-300), u2 = rng.uniform();
            const double g = std::sqrt(-2 * std::log(u1)) * std::cos(2 * M_PI * u2);
            x(i, c) = g + (y[i] ? gap : 0.0) * (c == 0 ? 1.0 : 0.5);
        }
    }
}

std::vector<oracle::Row> to_rows(const Matrix& m) {
    std::vector<oracle::Row> out;
    for (std::size_t r = 0; r < m.rows(); ++r) out.emplace_back(m.row(r).begin(), m.row(r).end());
    return out;
}

oracle::KernelFn linear_kernel(const std::vector<oracle::Row>&) {
    return [](const oracle::Row& a, const oracle::Row& b) {
        double s = 0;
        for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
        return s;
    };
}

}  // namespace

TEST_CASE("cosine_fit examples") {
    const Matrix x = rows_to_matrix({{1, 0}, {0, 1}});
    const std::vector<int> y{0, 1};
    const auto m = cosine_fit(x, y);
    CHECK(m.centroids[0] == std::vector<double>{1, 0});
    CHECK(m.centroids[1] == std::vector<double>{0, 1});

    const Matrix x2 = rows_to_matrix({{1, 2}, {3, 4}, {5, 1}, {1, 2}, {3, 4}, {5, 1}});
    const auto d1 = cosine_fit(x2.select_rows(std::vector<std::size_t>{0, 1, 2}), std::vector<int>{0, 0, 1});
    const auto d2 = cosine_fit(x2, std::vector<int>{0, 0, 1, 0, 0, 1});
    CHECK(d1.centroids == d2.centroids);

    Rng rng(4);
    Matrix r(20, 8);
    std::vector<int> labels(20);
    for (std::size_t i = 0; i < 20; ++i) {
        labels[i] = static_cast<int>(rng.below(2));
        for (std::size_t c = 0; c < 8; ++c) r(i, c) = rng.uniform(-3, 3);
    }
    labels[0] = 0;
    labels[1] = 1;
    const auto rm = cosine_fit(r, labels);
    for (int cls = 0; cls < 2; ++cls)
        for (std::size_t c = 0; c < 8; ++c) {
            double sum = 0;
            int cnt = 0;
            for (std::size_t i = 0; i < 20; ++i)
                if (labels[i] == cls) sum += r(i, c), ++cnt;
            CHECK(rm.centroids[cls][c] == doctest::Approx(sum / cnt).epsilon(1e-14));
        }
}

TEST_CASE("cosine_fit errors") {
    const Matrix x = rows_to_matrix({{1, 0}, {0, 1}});
    CHECK_THROWS_AS(cosine_fit(x, std::vector<int>{0}), InputError);
    try {
        cosine_fit(rows_to_matrix({{1, 0}, {0, 1}}), std::vector<int>{0, 2});
        FAIL("expected error");
    } catch (const InputError& e) {
        CHECK(std::string(e.what()).find("class 1") != std::string::npos);
    }
    CHECK_THROWS_AS(cosine_fit(x, std::vector<int>{0, 0}), InputError);
}

TEST_CASE("cosine_predict examples and ties") {
    const auto m = cosine_fit(rows_to_matrix({{1, 0}, {0, 1}}), std::vector<int>{0, 1});
    CHECK(cosine_predict(m, std::vector<double>{0.9, 0.1}) == 0);
    CHECK(cosine_predict(m, std::vector<double>{0.1, 0.9}) == 1);
    CHECK(cosine_predict(m, std::vector<double>{1, 1}) == 0);
    CHECK(cosine_predict(m, std::vector<double>{0, 0}) == 0);
    CHECK_THROWS_AS(cosine_predict(m, std::vector<double>{1, 1, 1}), InputError);

    CosineModel zero = m;
    zero.centroids[1] = {0, 0};
    CHECK_THROWS_AS(cosine_predict(zero, std::vector<double>{1, 0}), NumericError);
}

TEST_CASE("cosine_predict against dot-product oracle and scale invariance") {
    Rng rng(12);
    for (int inst = 0; inst < 50; ++inst) {
        const std::size_t n = 2 + rng.below(29), d = 1 + rng.below(8);
        Matrix x(n, d);
        std::vector<int> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = i < 2 ? static_cast<int>(i) : static_cast<int>(rng.below(2));
            for (std::size_t c = 0; c < d; ++c) x(i, c) = rng.uniform(-1, 2);
        }
        const auto m = cosine_fit(x, y);
        for (int probe = 0; probe < 20; ++probe) {
            std::vector<double> v(d);
            for (auto& e : v) e = rng.uniform(-1, 2);
            double sims[2];
            for (int c = 0; c < 2; ++c) {
                double dot = 0, nv = 0, nc = 0;
                for (std::size_t j = 0; j < d; ++j) {
                    dot += v[j] * m.centroids[c][j];
                    nv += v[j] * v[j];
                    nc += m.centroids[c][j] * m.centroids[c][j];
                }
                sims[c] = dot / std::sqrt(nv * nc);
            }
            if (std::abs(sims[0] - sims[1]) < 1e-12) continue;
            const int best = sims[1] > sims[0] ? 1 : 0;
            REQUIRE(cosine_predict(m, v) == best);
            std::vector<double> scaled(v);
            for (auto& e : scaled) e *= 3.7;
            REQUIRE(cosine_predict(m, scaled) == best);
        }
    }
}

TEST_CASE("centroid idempotence") {
    const auto m = cosine_fit(rows_to_matrix({{1, 0.2, 0}, {0.1, 1, 0.3}, {0.9, 0.1, 0.1}}), std::vector<int>{0, 1, 0});
    CHECK(cosine_predict(m, m.centroids[0]) == 0);
    CHECK(cosine_predict(m, m.centroids[1]) == 1);
}

TEST_CASE("cosine model JSON round trip") {
    const auto m = cosine_fit(rows_to_matrix({{1, 0.5}, {0.25, 1}}), std::vector<int>{0, 1});
    const nlohmann::json j = m;
    const auto back = j.get<CosineModel>();
    CHECK(back.centroids == m.centroids);
}

TEST_CASE("svm_fit separable pair") {
    const Matrix x = rows_to_matrix({{0.0}, {1.0}});
    SVMConfig cfg;
    cfg.kernel = Kernel::Linear;
    cfg.C = 100;
    const auto m = svm_fit(x, std::vector<int>{0, 1}, cfg);
    CHECK(svm_predict(m, std::vector<double>{0.0}) == 0);
    CHECK(svm_predict(m, std::vector<double>{1.0}) == 1);
    CHECK(m.converged);
}

TEST_CASE("svm label flip symmetry") {
    Rng rng(8);
    Matrix x;
    std::vector<int> y;
    blobs(rng, 30, 3, 2.5, x, y);
    std::vector<int> flipped(y.size());
    for (std::size_t i = 0; i < y.size(); ++i) flipped[i] = 1 - y[i];
    for (Kernel k : {Kernel::Linear, Kernel::Rbf}) {
        SVMConfig cfg;
        cfg.kernel = k;
        cfg.C = 1;
        cfg.tol = 1e-9;
        const auto a = svm_fit(x, y, cfg);
        const auto b = svm_fit(x, flipped, cfg);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const double da = svm_decision(a, x.row(i)), db = svm_decision(b, x.row(i));
            CHECK(da == doctest::Approx(-db).epsilon(1e-6));
            if (std::abs(da) > 1e-6) CHECK(svm_predict(a, x.row(i)) == 1 - svm_predict(b, x.row(i)));
        }
    }
}

TEST_CASE("svm support vectors of a separable fit keep their labels") {
    Rng rng(21);
    Matrix x;
    std::vector<int> y;
    blobs(rng, 40, 2, 6.0, x, y);
    SVMConfig cfg;
    cfg.kernel = Kernel::Linear;
    cfg.C = 100;
    const auto m = svm_fit(x, y, cfg);
    REQUIRE(!m.support_indices.empty());
    for (auto i : m.support_indices) CHECK(svm_predict(m, x.row(i)) == y[i]);
}

TEST_CASE("svm decision values agree with a dense QP oracle") {
    Rng rng(1234);
    for (int inst = 0; inst < 6; ++inst) {
        Matrix x;
        std::vector<int> y;
        blobs(rng, 40, 3, 2.0 + inst * 0.5, x, y);
        SVMConfig cfg;
        cfg.kernel = Kernel::Linear;
        cfg.C = 1.0;
        const auto m = svm_fit(x, y, cfg);
        const auto sol = oracle::solve_dual(to_rows(x), y, cfg.C, linear_kernel);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            const oracle::Row r(x.row(i).begin(), x.row(i).end());
            REQUIRE(std::abs(svm_decision(m, x.row(i)) - sol.decision(r)) <= 1e-2);
        }
    }
}

TEST_CASE("svm KKT conditions hold after fit") {
    Rng rng(55);
    for (Kernel k : {Kernel::Linear, Kernel::Rbf, Kernel::Poly, Kernel::Sigmoid}) {
        Matrix x;
        std::vector<int> y;
        blobs(rng, 36, 4, 1.5, x, y);
        SVMConfig cfg;
        cfg.kernel = k;
        cfg.C = 2.0;
        if (k == Kernel::Sigmoid || k == Kernel::Poly) cfg.gamma = 0.1;
        const auto m = svm_fit(x, y, cfg);
        REQUIRE(m.converged);
        std::vector<double> alpha(x.rows(), 0.0);
        for (std::size_t s = 0; s < m.support_indices.size(); ++s)
            alpha[m.support_indices[s]] = std::abs(m.dual_coef[s]);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            REQUIRE((alpha[i] >= 0.0 && alpha[i] <= cfg.C));
            const double yf = (y[i] ? 1.0 : -1.0) * svm_decision(m, x.row(i));
            if (alpha[i] == 0.0)
                REQUIRE(yf >= 1.0 - cfg.tol - 1e-9);
            else if (alpha[i] == cfg.C)
                REQUIRE(yf <= 1.0 + cfg.tol + 1e-9);
            else
                REQUIRE(std::abs(yf - 1.0) <= cfg.tol + 1e-9);
        }
    }
}

TEST_CASE("svm errors and scale gamma") {
    const Matrix x = rows_to_matrix({{0.0, 1.0}, {1.0, 1.0}, {2.0, 1.0}});
    CHECK_THROWS_AS(svm_fit(x, std::vector<int>{1, 1, 1}, SVMConfig{}), InputError);
    CHECK_THROWS_AS(svm_fit(x, std::vector<int>{0, 1, 2}, SVMConfig{}), InputError);
    Matrix bad = x;
    bad(1, 0) = std::nan("");
    CHECK_THROWS_AS(svm_fit(bad, std::vector<int>{0, 1, 1}, SVMConfig{}), NumericError);
    SVMConfig neg;
    neg.C = -1;
    CHECK_THROWS_AS(svm_fit(x, std::vector<int>{0, 1, 1}, neg), InputError);

    // the constant column is centred to zero: var(Z) = (1 + 0) / 2 = 0.5, gamma = 1 / (2 * 0.5)
    const SvmProblem p(x, std::vector<int>{0, 1, 1});
    CHECK(p.scale_gamma() == doctest::Approx(1.0));
    const auto m = p.fit(SVMConfig{});
    CHECK(m.gamma == doctest::Approx(1.0));
    CHECK(m.stats.scale[1] == 1.0);
    CHECK_THROWS_AS(svm_decision(m, std::vector<double>{1.0}), InputError);
}

TEST_CASE("svm model JSON round trip and determinism") {
    Rng rng(9);
    Matrix x;
    std::vector<int> y;
    blobs(rng, 24, 3, 2.0, x, y);
    SVMConfig cfg;
    cfg.kernel = Kernel::Rbf;
    const auto a = svm_fit(x, y, cfg);
    const auto b = svm_fit(x, y, cfg);
    CHECK(a.dual_coef == b.dual_coef);
    CHECK(a.bias == b.bias);
    const nlohmann::json j = a;
    const auto back = j.get<SVMModel>();
    for (std::size_t i = 0; i < x.rows(); ++i) CHECK(svm_decision(back, x.row(i)) == svm_decision(a, x.row(i)));
}
