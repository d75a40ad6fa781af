#include "neurochaos/model.hpp"

#include <algorithm>
#include <limits>
#include <numeric>

#include "neurochaos/errors.hpp"

namespace nl {

double logistic_fraction(LayerKind kind) noexcept {
    switch (kind) {
        case LayerKind::Rhnl25: return 0.25;
        case LayerKind::Rhnl50: return 0.5;
        case LayerKind::Rhnl75: return 0.75;
        default: return 0.0;
    }
}

std::string_view to_string(LayerKind kind) noexcept {
    switch (kind) {
        case LayerKind::None: return "none";
        case LayerKind::ChaosNet: return "chaosnet";
        case LayerKind::Rhnl25: return "rhnl25";
        case LayerKind::Rhnl50: return "rhnl50";
        case LayerKind::Rhnl75: return "rhnl75";
    }
    return "none";
}

LayerKind layer_kind_from_string(std::string_view name) {
    for (auto k : {LayerKind::None, LayerKind::ChaosNet, LayerKind::Rhnl25, LayerKind::Rhnl50, LayerKind::Rhnl75})
        if (name == to_string(k)) return k;
    throw InputError("unknown layer kind '" + std::string(name) + "' (expected none|chaosnet|rhnl25|rhnl50|rhnl75)");
}

std::string_view to_string(Head head) noexcept { return head == Head::Svm ? "svm" : "cosine"; }

std::string ModelSpec::name() const {
    if (layer == LayerKind::None) return head == Head::Svm ? "svm" : "cosine";
    std::string n(to_string(layer));
    if (head == Head::Svm) n += "+svm";
    return n;
}

ModelSpec ModelSpec::from_name(std::string_view name) {
    ModelSpec m;
    if (name == "svm") {
        m.layer = LayerKind::None;
        m.head = Head::Svm;
        return m;
    }
    if (name == "cosine") {
        m.layer = LayerKind::None;
        m.head = Head::Cosine;
        return m;
    }
    auto plus = name.find('+');
    m.layer = layer_kind_from_string(name.substr(0, plus));
    if (plus != std::string_view::npos) {
        const auto head = name.substr(plus + 1);
        if (head == "svm")
            m.head = Head::Svm;
        else if (head == "cosine")
            m.head = Head::Cosine;
        else
            throw InputError("unknown head '" + std::string(head) + "' in model name '" + std::string(name) + "'");
    }
    return m;
}

void to_json(nlohmann::json& j, const ModelSpec& m) {
    j = {{"name", m.name()},
         {"layer", std::string(to_string(m.layer))},
         {"head", std::string(to_string(m.head))},
         {"placement_seed", m.placement_seed},
         {"rescale_firing_time", m.rescale_firing_time}};
    if (m.layer != LayerKind::None) j["neuron"] = m.neuron;
    if (m.head == Head::Svm) j["svm"] = m.svm;
}

void from_json(const nlohmann::json& j, ModelSpec& m) {
    m = j.contains("name") ? ModelSpec::from_name(j["name"].get<std::string>()) : ModelSpec{};
    if (j.contains("layer")) m.layer = layer_kind_from_string(j["layer"].get<std::string>());
    if (j.contains("head")) {
        const auto h = j["head"].get<std::string>();
        if (h != "svm" && h != "cosine") throw InputError("unknown head '" + h + "'");
        m.head = h == "svm" ? Head::Svm : Head::Cosine;
    }
    if (j.contains("neuron")) m.neuron = j["neuron"].get<NeuronConfig>();
    if (j.contains("svm")) m.svm = j["svm"].get<SVMConfig>();
    m.placement_seed = j.value("placement_seed", m.placement_seed);
    m.rescale_firing_time = j.value("rescale_firing_time", false);
}

FiringTimeScaler FiringTimeScaler::fit(const Matrix& features, std::size_t n_inputs) {
    FiringTimeScaler s;
    s.n_inputs = n_inputs;
    s.min.assign(n_inputs, std::numeric_limits<double>::infinity());
    s.max.assign(n_inputs, -std::numeric_limits<double>::infinity());
    for (std::size_t r = 0; r < features.rows(); ++r)
        for (std::size_t i = 0; i < n_inputs; ++i) {
            const double v = features(r, firing_time_column(n_inputs, i));
            s.min[i] = std::min(s.min[i], v);
            s.max[i] = std::max(s.max[i], v);
        }
    return s;
}

void FiringTimeScaler::apply(Matrix& features) const {
    for (std::size_t r = 0; r < features.rows(); ++r)
        for (std::size_t i = 0; i < n_inputs; ++i) {
            double& v = features(r, firing_time_column(n_inputs, i));
            v = max[i] > min[i] ? (v - min[i]) / (max[i] - min[i]) : 0.0;
        }
}

Matrix TrainedModel::features(const Matrix& X_raw, unsigned threads) const {
    Matrix x = apply_normalizer(normalization, X_raw);
    if (!layer) return x;
    Matrix f = NeurochaosLayer(*layer).transform_dataset(x, threads);
    if (time_scaler) time_scaler->apply(f);
    return f;
}

std::vector<int> TrainedModel::predict(const Matrix& X_raw, unsigned threads) const {
    const Matrix f = features(X_raw, threads);
    if (const auto* cos = std::get_if<CosineModel>(&head)) return cosine_predict(*cos, f);
    return svm_predict(std::get<SVMModel>(head), f);
}

TrainedModel fit_model(const ModelSpec& spec, const Matrix& X_raw, std::span<const int> y, unsigned threads,
                       const std::optional<NormalizationStats>& normalization) {
    if (X_raw.rows() != y.size()) throw InputError("fit_model: row/label count mismatch");
    if (X_raw.rows() == 0) throw InputError("fit_model: no training rows");
    TrainedModel m;
    m.spec = spec;
    if (normalization) {
        m.normalization = *normalization;
    } else {
        std::vector<std::size_t> all(X_raw.rows());
        std::iota(all.begin(), all.end(), std::size_t{0});
        m.normalization = fit_normalizer(X_raw, all);
    }
    Matrix f = apply_normalizer(m.normalization, X_raw);
    if (spec.layer != LayerKind::None) {
        m.layer = build_layer(X_raw.cols(), spec.neuron, logistic_fraction(spec.layer), spec.placement_seed);
        f = NeurochaosLayer(*m.layer).transform_dataset(f, threads);
        if (spec.rescale_firing_time) {
            m.time_scaler = FiringTimeScaler::fit(f, X_raw.cols());
            m.time_scaler->apply(f);
        }
    }
    if (spec.head == Head::Cosine)
        m.head = cosine_fit(f, y);
    else
        m.head = svm_fit(f, y, spec.svm);
    return m;
}

void to_json(nlohmann::json& j, const TrainedModel& m) {
    j = {{"spec", m.spec}, {"normalization", m.normalization}};
    if (m.layer) j["layer"] = *m.layer;
    if (m.time_scaler) j["firing_time_scaler"] = {{"min", m.time_scaler->min}, {"max", m.time_scaler->max}};
    std::visit([&](const auto& h) { j["head"] = h; }, m.head);
}

}  // namespace nl
