#pragma once

// Stratified k-fold cross-validation and exhaustive grid search over
// (q, b, epsilon), jointly with an SVM grid when the head is an SVM.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "neurochaos/model.hpp"

namespace nl {

struct NLGrid {
    std::vector<double> q;
    std::vector<double> b;
    std::vector<double> epsilon;

    std::size_t size() const noexcept { return q.size() * b.size() * epsilon.size(); }

    // lo, lo + step, ... <= hi, rounded to 12 decimals
    static std::vector<double> range(double lo, double hi, double step);
    // q in [.001, 1.0] step .05, b in [.01, .5] step .025, eps in [.001, .5] step .01
    static NLGrid chaosnet_default();
    // q in [.001, .5] step .05, b in [.01, .5] step .025, eps in [.001, .3] step .01
    static NLGrid rhnl_default();
    static NLGrid default_for(LayerKind kind);
    // 3 x 3 x 3 grid for smoke runs
    static NLGrid toy();
};

void to_json(nlohmann::json& j, const NLGrid& g);
// Accepts explicit lists or {"lo","hi","step"} objects per parameter.
void from_json(const nlohmann::json& j, NLGrid& g);

struct SvmGrid {
    std::vector<SVMConfig> configs;

    // kernel in {linear, rbf}, C in {0.1, 1, 10, 100}, gamma in {scale, 1, 0.1, 0.01} (rbf only)
    static SvmGrid hybrid_default();
    // C x {rbf, sigmoid, linear, poly}, gamma {1, .1, .01, .001} for non-linear, degree {2,3,4} for poly
    static SvmGrid full();
    static SvmGrid from_name(std::string_view name);
};

struct CVPlan {
    std::size_t k = 5;
    std::uint64_t seed = 0;
    std::vector<std::size_t> fold_of;  // fold id per sample

    std::vector<std::size_t> train_indices(std::size_t fold) const;
    std::vector<std::size_t> validation_indices(std::size_t fold) const;
};

/// Per class: seeded shuffle, then dealt round-robin into k folds,
/// continuing the deal position across classes.
CVPlan cv_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed);

struct GridRow {
    NeuronConfig neuron;
    std::optional<SVMConfig> svm;
    std::vector<double> fold_scores;
    double mean_score = 0.0;
};

struct TuningResult {
    ModelSpec best;
    double best_score = 0.0;
    std::size_t best_row = 0;
    std::vector<GridRow> rows;
};

/// Exhaustive search. Rows are ordered q outermost, then b, then epsilon,
/// then SVM config; the first row with the maximal mean macro-F1 wins.
/// Min-max normalization is refit on each fold's training rows; the RHNL
/// placement is base.placement_seed for every combination.
TuningResult grid_search(const Matrix& X_raw, std::span<const int> y, const ModelSpec& base, const NLGrid& grid,
                         const SvmGrid& svm_grid, const CVPlan& cv, unsigned threads = 1);

void to_json(nlohmann::json& j, const TuningResult& r);
std::string grid_csv(const TuningResult& r);

}  // namespace nl
