#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace nl {

// counts[i][j]: true class i predicted as j
struct ConfusionMatrix {
    std::size_t n_classes = 2;
    std::vector<std::vector<std::uint64_t>> counts;

    std::uint64_t total() const;
    friend bool operator==(const ConfusionMatrix&, const ConfusionMatrix&) = default;
};

struct MetricReport {
    double accuracy = 0.0;
    double macro_precision = 0.0;
    double macro_recall = 0.0;
    double macro_f1 = 0.0;
    std::vector<double> precision;
    std::vector<double> recall;
    std::vector<double> f1;

    friend bool operator==(const MetricReport&, const MetricReport&) = default;
};

/// n_classes = 0 infers max(label) + 1, at least 2.
ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, std::size_t n_classes = 0);

// Precision, recall and F1 use 0/0 = 0; macro values are unweighted class means.
MetricReport report(const ConfusionMatrix& cm);

inline double macro_f1(std::span<const int> y_true, std::span<const int> y_pred) {
    return report(confusion(y_true, y_pred, 2)).macro_f1;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& cm);
void from_json(const nlohmann::json& j, ConfusionMatrix& cm);
void to_json(nlohmann::json& j, const MetricReport& r);
void from_json(const nlohmann::json& j, MetricReport& r);

std::string csv_header();
// accuracy,macro_precision,macro_recall,macro_f1 with 17 significant digits
std::string csv_row(const MetricReport& r);

}  // namespace nl
