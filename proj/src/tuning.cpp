#include "neurochaos/tuning.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <sstream>

#include "neurochaos/errors.hpp"
#include "neurochaos/metrics.hpp"
#include "neurochaos/parallel.hpp"
#include "neurochaos/random.hpp"

namespace nl {

std::vector<double> NLGrid::range(double lo, double hi, double step) {
    if (!(step > 0.0) || hi < lo) throw InputError("grid range: need step > 0 and hi >= lo");
    std::vector<double> v;
    for (std::size_t i = 0;; ++i) {
        const double x = std::round((lo + static_cast<double>(i) * step) * 1e12) / 1e12;
        if (x > hi + 1e-12) break;
        v.push_back(x);
    }
    return v;
}

NLGrid NLGrid::chaosnet_default() {
    return {range(0.001, 1.0, 0.05), range(0.01, 0.5, 0.025), range(0.001, 0.5, 0.01)};
}

NLGrid NLGrid::rhnl_default() {
    return {range(0.001, 0.5, 0.05), range(0.01, 0.5, 0.025), range(0.001, 0.3, 0.01)};
}

NLGrid NLGrid::default_for(LayerKind kind) {
    return kind == LayerKind::ChaosNet || kind == LayerKind::None ? chaosnet_default() : rhnl_default();
}

NLGrid NLGrid::toy() { return {{0.1, 0.5, 0.9}, {0.1, 0.3, 0.49}, {0.05, 0.15, 0.25}}; }

void to_json(nlohmann::json& j, const NLGrid& g) { j = {{"q", g.q}, {"b", g.b}, {"epsilon", g.epsilon}}; }

void from_json(const nlohmann::json& j, NLGrid& g) {
    auto axis = [&](const char* key) -> std::vector<double> {
        const auto& a = j.at(key);
        if (a.is_array()) return a.get<std::vector<double>>();
        return NLGrid::range(a.at("lo").get<double>(), a.at("hi").get<double>(), a.at("step").get<double>());
    };
    g.q = axis("q");
    g.b = axis("b");
    g.epsilon = axis("epsilon");
    if (g.size() == 0) throw InputError("NL grid is empty");
}

SvmGrid SvmGrid::hybrid_default() {
    SvmGrid g;
    for (double C : {0.1, 1.0, 10.0, 100.0}) {
        SVMConfig lin;
        lin.C = C;
        lin.kernel = Kernel::Linear;
        g.configs.push_back(lin);
        for (std::optional<double> gamma : {std::optional<double>{}, std::optional<double>{1.0},
                                            std::optional<double>{0.1}, std::optional<double>{0.01}}) {
            SVMConfig rbf;
            rbf.C = C;
            rbf.kernel = Kernel::Rbf;
            rbf.gamma = gamma;
            g.configs.push_back(rbf);
        }
    }
    return g;
}

SvmGrid SvmGrid::full() {
    SvmGrid g;
    for (double C : {0.1, 1.0, 10.0, 100.0})
        for (Kernel k : {Kernel::Rbf, Kernel::Sigmoid, Kernel::Linear, Kernel::Poly}) {
            if (k == Kernel::Linear) {
                SVMConfig c;
                c.C = C;
                c.kernel = k;
                g.configs.push_back(c);
                continue;
            }
            for (double gamma : {1.0, 0.1, 0.01, 0.001}) {
                if (k == Kernel::Poly) {
                    for (int degree : {2, 3, 4}) {
                        SVMConfig c;
                        c.C = C;
                        c.kernel = k;
                        c.gamma = gamma;
                        c.degree = degree;
                        g.configs.push_back(c);
                    }
                } else {
                    SVMConfig c;
                    c.C = C;
                    c.kernel = k;
                    c.gamma = gamma;
                    g.configs.push_back(c);
                }
            }
        }
    return g;
}

SvmGrid SvmGrid::from_name(std::string_view name) {
    if (name == "hybrid" || name == "default") return hybrid_default();
    if (name == "full") return full();
    throw InputError("unknown SVM grid '" + std::string(name) + "' (expected hybrid|full)");
}

std::vector<std::size_t> CVPlan::train_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] != fold) out.push_back(i);
    return out;
}

std::vector<std::size_t> CVPlan::validation_indices(std::size_t fold) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < fold_of.size(); ++i)
        if (fold_of[i] == fold) out.push_back(i);
    return out;
}

CVPlan cv_folds(std::span<const int> labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw InputError("cv_folds: need at least 2 folds");
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
    CVPlan plan;
    plan.k = k;
    plan.seed = seed;
    plan.fold_of.assign(labels.size(), 0);
    std::size_t deal = 0;
    for (auto& [cls, idx] : by_class) {
        if (idx.size() < k)
            throw InputError("cv_folds: class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                             " samples, fewer than " + std::to_string(k) + " folds");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        for (auto i : idx) plan.fold_of[i] = deal++ % k;
    }
    return plan;
}

namespace {

struct FoldData {
    Matrix train;
    std::vector<int> y_train;
    Matrix validation;
    std::vector<int> y_validation;
};

std::string describe(const NeuronConfig& n, const SVMConfig* svm) {
    std::ostringstream os;
    os << "q=" << n.q << " b=" << n.b << " epsilon=" << n.epsilon;
    if (svm) os << " " << svm->describe();
    return os.str();
}

}  // namespace

TuningResult grid_search(const Matrix& X_raw, std::span<const int> y, const ModelSpec& base, const NLGrid& grid,
                         const SvmGrid& svm_grid, const CVPlan& cv, unsigned threads) {
    if (X_raw.rows() != y.size()) throw InputError("grid_search: row/label count mismatch");
    if (cv.fold_of.size() != y.size()) throw InputError("grid_search: CV plan does not match the training set");
    const bool has_layer = base.layer != LayerKind::None;
    const bool svm_head = base.head == Head::Svm;
    if (has_layer && grid.size() == 0) throw InputError("grid_search: NL grid is empty");
    if (svm_head && svm_grid.configs.empty()) throw InputError("grid_search: SVM grid is empty");

    std::vector<FoldData> folds(cv.k);
    for (std::size_t f = 0; f < cv.k; ++f) {
        const auto tr = cv.train_indices(f);
        const auto va = cv.validation_indices(f);
        const Matrix tr_raw = X_raw.select_rows(tr);
        std::vector<std::size_t> all(tr.size());
        std::iota(all.begin(), all.end(), std::size_t{0});
        const auto stats = fit_normalizer(tr_raw, all);
        folds[f].train = apply_normalizer(stats, tr_raw);
        folds[f].validation = apply_normalizer(stats, X_raw.select_rows(va));
        for (auto i : tr) folds[f].y_train.push_back(y[i]);
        for (auto i : va) folds[f].y_validation.push_back(y[i]);
    }

    std::vector<NeuronConfig> combos;
    if (has_layer) {
        for (double q : grid.q)
            for (double b : grid.b)
                for (double e : grid.epsilon) {
                    NeuronConfig c = base.neuron;
                    c.q = q;
                    c.b = b;
                    c.epsilon = e;
                    combos.push_back(c);
                }
    } else {
        combos.push_back(base.neuron);
    }
    const std::size_t per_combo = svm_head ? svm_grid.configs.size() : 1;
    std::vector<GridRow> rows(combos.size() * per_combo);

    parallel_for(combos.size(), threads, [&](std::size_t ci) {
        const NeuronConfig& cfg = combos[ci];
        try {
            std::optional<NeurochaosLayer> layer;
            if (has_layer)
                layer.emplace(build_layer(X_raw.cols(), cfg, logistic_fraction(base.layer), base.placement_seed));
            for (std::size_t s = 0; s < per_combo; ++s) {
                auto& row = rows[ci * per_combo + s];
                row.neuron = cfg;
                if (svm_head) row.svm = svm_grid.configs[s];
                row.fold_scores.assign(cv.k, 0.0);
            }
            for (std::size_t f = 0; f < cv.k; ++f) {
                const auto& fold = folds[f];
                Matrix tr = layer ? layer->transform_dataset(fold.train) : fold.train;
                Matrix va = layer ? layer->transform_dataset(fold.validation) : fold.validation;
                if (layer && base.rescale_firing_time) {
                    const auto scaler = FiringTimeScaler::fit(tr, X_raw.cols());
                    scaler.apply(tr);
                    scaler.apply(va);
                }
                if (!svm_head) {
                    const auto model = cosine_fit(tr, fold.y_train);
                    rows[ci].fold_scores[f] = macro_f1(fold.y_validation, cosine_predict(model, va));
                } else {
                    const SvmProblem problem(tr, fold.y_train);
                    for (std::size_t s = 0; s < per_combo; ++s) {
                        const auto model = problem.fit(svm_grid.configs[s]);
                        rows[ci * per_combo + s].fold_scores[f] =
                            macro_f1(fold.y_validation, svm_predict(model, va));
                    }
                }
            }
        } catch (const InputError& e) {
            throw InputError(std::string("grid combination ") + describe(cfg, nullptr) + ": " + e.what());
        } catch (const NumericError& e) {
            throw NumericError(std::string("grid combination ") + describe(cfg, nullptr) + ": " + e.what());
        } catch (const DomainError& e) {
            throw InputError(std::string("grid combination ") + describe(cfg, nullptr) + ": " + e.what());
        }
    });

    TuningResult result;
    result.best_score = -1.0;
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto& row = rows[r];
        row.mean_score = std::accumulate(row.fold_scores.begin(), row.fold_scores.end(), 0.0) /
                         static_cast<double>(row.fold_scores.size());
        if (row.mean_score > result.best_score) {
            result.best_score = row.mean_score;
            result.best_row = r;
        }
    }
    result.best = base;
    result.best.neuron = rows[result.best_row].neuron;
    if (svm_head) result.best.svm = *rows[result.best_row].svm;
    result.rows = std::move(rows);
    return result;
}

void to_json(nlohmann::json& j, const TuningResult& r) {
    j = {{"best", r.best}, {"best_score", r.best_score}, {"best_row", r.best_row}, {"n_rows", r.rows.size()}};
}

std::string grid_csv(const TuningResult& r) {
    std::string out = "row,q,b,epsilon,kernel,C,gamma,degree";
    const std::size_t k = r.rows.empty() ? 0 : r.rows.front().fold_scores.size();
    for (std::size_t f = 0; f < k; ++f) out += ",fold_" + std::to_string(f + 1);
    out += ",mean_macro_f1\n";
    char buf[64];
    auto num = [&](double v) {
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return std::string(buf);
    };
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
        const auto& row = r.rows[i];
        out += std::to_string(i) + "," + num(row.neuron.q) + "," + num(row.neuron.b) + "," + num(row.neuron.epsilon);
        if (row.svm) {
            out += "," + std::string(to_string(row.svm->kernel)) + "," + num(row.svm->C) + "," +
                   (row.svm->gamma ? num(*row.svm->gamma) : std::string("scale")) + "," +
                   std::to_string(row.svm->degree);
        } else {
            out += ",,,,";
        }
        for (double s : row.fold_scores) out += "," + num(s);
        out += "," + num(row.mean_score) + "\n";
    }
    return out;
}

}  // namespace nl
