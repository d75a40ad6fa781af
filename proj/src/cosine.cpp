#include "neurochaos/cosine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "neurochaos/errors.hpp"

namespace nl {

CosineModel cosine_fit(const Matrix& features, std::span<const int> labels) {
    if (features.rows() != labels.size())
        throw InputError("cosine_fit: " + std::to_string(features.rows()) + " rows but " +
                         std::to_string(labels.size()) + " labels");
    if (labels.empty()) throw InputError("cosine_fit: no training samples");
    const int max_label = *std::max_element(labels.begin(), labels.end());
    if (*std::min_element(labels.begin(), labels.end()) < 0) throw InputError("cosine_fit: negative label");

    CosineModel m;
    m.n_classes = static_cast<std::size_t>(std::max(max_label + 1, 2));
    m.feature_dim = features.cols();
    m.centroids.assign(m.n_classes, std::vector<double>(m.feature_dim, 0.0));
    std::vector<std::size_t> counts(m.n_classes, 0);
    for (std::size_t r = 0; r < features.rows(); ++r) {
        const auto c = static_cast<std::size_t>(labels[r]);
        auto row = features.row(r);
        for (std::size_t j = 0; j < m.feature_dim; ++j) m.centroids[c][j] += row[j];
        ++counts[c];
    }
    for (std::size_t c = 0; c < m.n_classes; ++c) {
        if (counts[c] == 0) throw InputError("cosine_fit: class " + std::to_string(c) + " has no training samples");
        for (double& v : m.centroids[c]) v /= static_cast<double>(counts[c]);
    }
    return m;
}

int cosine_predict(const CosineModel& model, std::span<const double> x) {
    if (x.size() != model.feature_dim)
        throw InputError("cosine_predict: vector length " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(model.feature_dim));
    double x_norm2 = 0.0;
    for (double v : x) x_norm2 += v * v;
    const double x_norm = std::sqrt(x_norm2);

    int best = 0;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.n_classes; ++c) {
        const auto& mu = model.centroids[c];
        double dot = 0.0, mu_norm2 = 0.0;
        for (std::size_t j = 0; j < x.size(); ++j) {
            dot += x[j] * mu[j];
            mu_norm2 += mu[j] * mu[j];
        }
        if (mu_norm2 == 0.0) throw NumericError("cosine model invalid: centroid " + std::to_string(c) + " has zero norm");
        const double sim = x_norm == 0.0 ? 0.0 : dot / (x_norm * std::sqrt(mu_norm2));
        if (sim > best_sim) {
            best_sim = sim;
            best = static_cast<int>(c);
        }
    }
    return best;
}

std::vector<int> cosine_predict(const CosineModel& model, const Matrix& x) {
    std::vector<int> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = cosine_predict(model, x.row(r));
    return out;
}

void to_json(nlohmann::json& j, const CosineModel& m) {
    j = {{"type", "cosine"}, {"n_classes", m.n_classes}, {"feature_dim", m.feature_dim}, {"centroids", m.centroids}};
}

void from_json(const nlohmann::json& j, CosineModel& m) {
    m.n_classes = j.at("n_classes").get<std::size_t>();
    m.feature_dim = j.at("feature_dim").get<std::size_t>();
    m.centroids = j.at("centroids").get<std::vector<std::vector<double>>>();
    if (m.centroids.size() != m.n_classes) throw InputError("cosine model JSON: centroid count mismatch");
    for (const auto& c : m.centroids)
        if (c.size() != m.feature_dim) throw InputError("cosine model JSON: centroid length mismatch");
}

}  // namespace nl
