#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "neurochaos/matrix.hpp"

namespace nl {

// Nearest-centroid classifier under cosine similarity.
struct CosineModel {
    std::vector<std::vector<double>> centroids;  // indexed by class
    std::size_t n_classes = 0;
    std::size_t feature_dim = 0;
};

/// Class centroids are the arithmetic means of the rows of each class.
/// Every class in [0, max label] needs at least one sample; at least two
/// classes are required.
CosineModel cosine_fit(const Matrix& features, std::span<const int> labels);

/// argmax over classes of cos(x, centroid); ties (including an all-zero x)
/// go to the lowest class index. A zero-norm centroid raises NumericError.
int cosine_predict(const CosineModel& model, std::span<const double> x);

std::vector<int> cosine_predict(const CosineModel& model, const Matrix& x);

void to_json(nlohmann::json& j, const CosineModel& m);
void from_json(const nlohmann::json& j, CosineModel& m);

}  // namespace nl
