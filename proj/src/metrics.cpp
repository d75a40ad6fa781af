#include "neurochaos/metrics.hpp"

#include <algorithm>
#include <cstdio>

#include "neurochaos/errors.hpp"

namespace nl {

namespace {
double ratio(double num, double den) { return den == 0.0 ? 0.0 : num / den; }
}  // namespace

std::uint64_t ConfusionMatrix::total() const {
    std::uint64_t t = 0;
    for (const auto& row : counts)
        for (auto c : row) t += c;
    return t;
}

ConfusionMatrix confusion(std::span<const int> y_true, std::span<const int> y_pred, std::size_t n_classes) {
    if (y_true.size() != y_pred.size())
        throw InputError("confusion: " + std::to_string(y_true.size()) + " true labels vs " +
                         std::to_string(y_pred.size()) + " predictions");
    if (y_true.empty()) throw InputError("confusion: no samples");
    if (n_classes == 0) {
        int mx = 1;
        for (std::size_t i = 0; i < y_true.size(); ++i) mx = std::max({mx, y_true[i], y_pred[i]});
        n_classes = static_cast<std::size_t>(mx) + 1;
    }
    ConfusionMatrix cm;
    cm.n_classes = n_classes;
    cm.counts.assign(n_classes, std::vector<std::uint64_t>(n_classes, 0));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        const int t = y_true[i], p = y_pred[i];
        if (t < 0 || p < 0 || static_cast<std::size_t>(t) >= n_classes || static_cast<std::size_t>(p) >= n_classes)
            throw InputError("confusion: label out of range at position " + std::to_string(i));
        ++cm.counts[static_cast<std::size_t>(t)][static_cast<std::size_t>(p)];
    }
    return cm;
}

MetricReport report(const ConfusionMatrix& cm) {
    const auto k = cm.n_classes;
    const double total = static_cast<double>(cm.total());
    if (total == 0.0) throw InputError("report: empty confusion matrix");
    MetricReport r;
    r.precision.resize(k);
    r.recall.resize(k);
    r.f1.resize(k);
    double trace = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
        const double tp = static_cast<double>(cm.counts[c][c]);
        double col = 0.0, row = 0.0;
        for (std::size_t o = 0; o < k; ++o) {
            col += static_cast<double>(cm.counts[o][c]);
            row += static_cast<double>(cm.counts[c][o]);
        }
        trace += tp;
        r.precision[c] = ratio(tp, col);
        r.recall[c] = ratio(tp, row);
        r.f1[c] = ratio(2.0 * r.precision[c] * r.recall[c], r.precision[c] + r.recall[c]);
        r.macro_precision += r.precision[c];
        r.macro_recall += r.recall[c];
        r.macro_f1 += r.f1[c];
    }
    r.macro_precision /= static_cast<double>(k);
    r.macro_recall /= static_cast<double>(k);
    r.macro_f1 /= static_cast<double>(k);
    r.accuracy = trace / total;
    return r;
}

void to_json(nlohmann::json& j, const ConfusionMatrix& cm) { j = {{"n_classes", cm.n_classes}, {"counts", cm.counts}}; }

void from_json(const nlohmann::json& j, ConfusionMatrix& cm) {
    cm.n_classes = j.at("n_classes").get<std::size_t>();
    cm.counts = j.at("counts").get<std::vector<std::vector<std::uint64_t>>>();
}

void to_json(nlohmann::json& j, const MetricReport& r) {
    j = {{"accuracy", r.accuracy},   {"macro_precision", r.macro_precision},
         {"macro_recall", r.macro_recall}, {"macro_f1", r.macro_f1},
         {"precision", r.precision}, {"recall", r.recall},
         {"f1", r.f1}};
}

void from_json(const nlohmann::json& j, MetricReport& r) {
    r.accuracy = j.at("accuracy").get<double>();
    r.macro_precision = j.at("macro_precision").get<double>();
    r.macro_recall = j.at("macro_recall").get<double>();
    r.macro_f1 = j.at("macro_f1").get<double>();
    r.precision = j.value("precision", std::vector<double>{});
    r.recall = j.value("recall", std::vector<double>{});
    r.f1 = j.value("f1", std::vector<double>{});
}

std::string csv_header() { return "accuracy,macro_precision,macro_recall,macro_f1"; }

std::string csv_row(const MetricReport& r) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g", r.accuracy, r.macro_precision, r.macro_recall,
                  r.macro_f1);
    return buf;
}

}  // namespace nl
