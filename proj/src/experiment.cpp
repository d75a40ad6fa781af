#include "neurochaos/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>

#include "neurochaos/errors.hpp"
#include "neurochaos/parallel.hpp"
#include "neurochaos/random.hpp"

namespace nl {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string hex64(std::uint64_t v) {
    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace

nlohmann::json deterministic_json(const ExperimentResult& r) {
    return {{"regime", "hstr"},
            {"model", r.model},
            {"split_seed", r.split_seed},
            {"n_train", r.n_train},
            {"n_test", r.n_test},
            {"metrics", r.metrics},
            {"confusion", r.confusion},
            {"dataset", {{"source", r.dataset_source}, {"schema", r.schema_name}, {"hash", hex64(r.dataset_hash)}}},
            {"version", kLibraryVersion}};
}

void to_json(nlohmann::json& j, const ExperimentResult& r) {
    j = deterministic_json(r);
    j["wall_time_s"] = r.wall_time_s;
}

ExperimentResult run_hstr(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& spec, unsigned threads,
                          double train_fraction) {
    const auto t0 = Clock::now();
    const SplitPlan plan = stratified_split(ds.y, split_seed, train_fraction);
    const Matrix X_train = ds.X.select_rows(plan.train);
    const Matrix X_test = ds.X.select_rows(plan.test);
    const auto y_train = select(ds.y, plan.train);
    const auto y_test = select(ds.y, plan.test);

    const TrainedModel model = fit_model(spec, X_train, y_train, threads);
    const auto pred = model.predict(X_test, threads);

    ExperimentResult r;
    r.model = spec;
    r.split_seed = split_seed;
    r.n_train = plan.train.size();
    r.n_test = plan.test.size();
    r.confusion = confusion(y_test, pred, 2);
    r.metrics = report(r.confusion);
    r.dataset_source = ds.source;
    r.schema_name = ds.schema_name;
    r.dataset_hash = ds.content_hash;
    r.wall_time_s = seconds_since(t0);
    return r;
}

TuningResult tune_on_split(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& base, const NLGrid& grid,
                           const SvmGrid& svm_grid, std::size_t folds, std::uint64_t cv_seed, unsigned threads,
                           double train_fraction) {
    const SplitPlan plan = stratified_split(ds.y, split_seed, train_fraction);
    const Matrix X_train = ds.X.select_rows(plan.train);
    const auto y_train = select(ds.y, plan.train);
    const CVPlan cv = cv_folds(y_train, folds, cv_seed);
    return grid_search(X_train, y_train, base, grid, svm_grid, cv, threads);
}

std::uint64_t lstr_trial_seed(std::uint64_t base, std::size_t k, std::size_t trial) noexcept {
    return derive_seed(base, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(trial));
}

LstrCurve run_lstr(const Dataset& ds, std::uint64_t split_seed, const ModelSpec& spec, std::uint64_t trial_seed,
                   std::size_t k_min, std::size_t k_max, std::size_t trials, unsigned threads,
                   double train_fraction) {
    if (k_min < 1 || k_max < k_min) throw InputError("run_lstr: invalid k range");
    if (trials < 1) throw InputError("run_lstr: trials must be positive");
    const auto t0 = Clock::now();
    const SplitPlan plan = stratified_split(ds.y, split_seed, train_fraction);
    const NormalizationStats pool_stats = fit_normalizer(ds.X, plan.train);
    const Matrix X_test = ds.X.select_rows(plan.test);
    const auto y_test = select(ds.y, plan.test);

    // fail fast on an undersized pool
    lstr_draw(ds.y, plan.train, k_max, 0);

    const std::size_t n_k = k_max - k_min + 1;
    std::vector<double> scores(n_k * trials, 0.0);
    parallel_for(n_k * trials, threads, [&](std::size_t unit) {
        const std::size_t k = k_min + unit / trials;
        const std::size_t t = unit % trials;
        const auto train = lstr_draw(ds.y, plan.train, k, lstr_trial_seed(trial_seed, k, t));
        const Matrix X_train = ds.X.select_rows(train);
        const auto y_train = select(ds.y, train);
        const TrainedModel model = fit_model(spec, X_train, y_train, 1, pool_stats);
        scores[unit] = macro_f1(y_test, model.predict(X_test));
    });

    LstrCurve curve;
    curve.model = spec;
    curve.split_seed = split_seed;
    curve.trial_seed = trial_seed;
    curve.trials = trials;
    curve.dataset_source = ds.source;
    curve.dataset_hash = ds.content_hash;
    for (std::size_t ki = 0; ki < n_k; ++ki) {
        LstrPoint p;
        p.k = k_min + ki;
        p.trial_scores.assign(scores.begin() + static_cast<std::ptrdiff_t>(ki * trials),
                              scores.begin() + static_cast<std::ptrdiff_t>((ki + 1) * trials));
        p.mean_macro_f1 = std::accumulate(p.trial_scores.begin(), p.trial_scores.end(), 0.0) /
                          static_cast<double>(trials);
        double ss = 0.0;
        for (double s : p.trial_scores) ss += (s - p.mean_macro_f1) * (s - p.mean_macro_f1);
        p.std_macro_f1 = std::sqrt(ss / static_cast<double>(trials));
        curve.points.push_back(std::move(p));
    }
    curve.wall_time_s = seconds_since(t0);
    return curve;
}

nlohmann::json deterministic_json(const LstrCurve& c) {
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : c.points)
        pts.push_back({{"k", p.k}, {"mean_macro_f1", p.mean_macro_f1}, {"std_macro_f1", p.std_macro_f1}});
    return {{"regime", "lstr"},
            {"model", c.model},
            {"split_seed", c.split_seed},
            {"trial_seed", c.trial_seed},
            {"trials", c.trials},
            {"curve", pts},
            {"dataset", {{"source", c.dataset_source}, {"hash", hex64(c.dataset_hash)}}},
            {"version", kLibraryVersion}};
}

void to_json(nlohmann::json& j, const LstrCurve& c) {
    j = deterministic_json(c);
    j["wall_time_s"] = c.wall_time_s;
}

std::string curve_csv(const LstrCurve& c) {
    std::string out = "k,mean_macro_f1,std\n";
    char buf[96];
    for (const auto& p : c.points) {
        std::snprintf(buf, sizeof buf, "%zu,%.17g,%.17g\n", p.k, p.mean_macro_f1, p.std_macro_f1);
        out += buf;
    }
    return out;
}

std::string confusion_csv(const ConfusionMatrix& cm) {
    std::string out = "true\\pred";
    for (std::size_t c = 0; c < cm.n_classes; ++c) out += "," + std::to_string(c);
    out += "\n";
    for (std::size_t r = 0; r < cm.n_classes; ++r) {
        out += std::to_string(r);
        for (auto v : cm.counts[r]) out += "," + std::to_string(v);
        out += "\n";
    }
    return out;
}

}  // namespace nl
