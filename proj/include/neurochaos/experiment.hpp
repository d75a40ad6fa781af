#pragma once

// High-sample (80-20 split) and low-sample (k per class, repeated trials)
// experiment procedures.

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "neurochaos/data_pipeline.hpp"
#include "neurochaos/metrics.hpp"
#include "neurochaos/model.hpp"
#include "neurochaos/tuning.hpp"

namespace nl {

inline constexpr const char* kLibraryVersion = "1.0.0";

struct ExperimentResult {
    ModelSpec model;
    std::uint64_t split_seed = 0;
    std::size_t n_train = 0;
    std::size_t n_test = 0;
    MetricReport metrics;
    ConfusionMatrix confusion;
    std::string dataset_source;
    std::string schema_name;
    std::uint64_t dataset_hash = 0;
    double wall_time_s = 0.0;
};

// Everything except wall time; byte-identical for identical inputs.
nlohmann::json deterministic_json(const ExperimentResult& r);
void to_json(nlohmann::json& j, const ExperimentResult& r);

/// Stratified 80-20 split, normalization on the train rows, fit, evaluate on test.
ExperimentResult run_hstr(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& spec, unsigned threads = 1,
                          double train_fraction = 0.8);

/// Grid search with k-fold CV restricted to the training partition of the split.
TuningResult tune_on_split(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& base, const NLGrid& grid,
                           const SvmGrid& svm_grid, std::size_t folds = 5, std::uint64_t cv_seed = 0,
                           unsigned threads = 1, double train_fraction = 0.8);

struct LstrPoint {
    std::size_t k = 0;
    double mean_macro_f1 = 0.0;
    double std_macro_f1 = 0.0;  // population standard deviation over trials
    std::vector<double> trial_scores;
};

struct LstrCurve {
    ModelSpec model;
    std::uint64_t split_seed = 0;
    std::uint64_t trial_seed = 0;
    std::size_t trials = 0;
    std::vector<LstrPoint> points;
    std::string dataset_source;
    std::uint64_t dataset_hash = 0;
    double wall_time_s = 0.0;
};

// Seed of trial t at k samples per class.
std::uint64_t lstr_trial_seed(std::uint64_t base, std::size_t k, std::size_t trial) noexcept;

/// For each k, `trials` independent draws of k samples per class from the
/// training partition; each is fitted and scored on the fixed test
/// partition. Stimuli are normalized with the training-partition min/max.
LstrCurve run_lstr(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& spec, std::uint64_t trial_seed,
                   std::size_t k_min = 1, std::size_t k_max = 10, std::size_t trials = 100, unsigned threads = 1,
                   double train_fraction = 0.8);

nlohmann::json deterministic_json(const LstrCurve& c);
void to_json(nlohmann::json& j, const LstrCurve& c);
// k,mean_macro_f1,std
std::string curve_csv(const LstrCurve& c);

std::string confusion_csv(const ConfusionMatrix& cm);

}  // namespace nl
