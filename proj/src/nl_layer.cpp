#include "neurochaos/nl_layer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include <json.hpp>

#include "neurochaos/errors.hpp"
#include "neurochaos/parallel.hpp"
#include "neurochaos/random.hpp"

namespace nl {

std::size_t LayerSpec::n_logistic() const {
    return static_cast<std::size_t>(std::count(assignment.begin(), assignment.end(), MapKind::Logistic));
}

std::size_t logistic_count(std::size_t n_inputs, double fraction) {
    return static_cast<std::size_t>(std::floor(fraction * static_cast<double>(n_inputs) + 0.5));
}

LayerSpec build_layer(std::size_t n_inputs, const NeuronConfig& cfg, double logistic_fraction,
                      std::uint64_t placement_seed) {
    if (n_inputs == 0) throw InputError("build_layer: n_inputs must be positive");
    if (!(logistic_fraction >= 0.0 && logistic_fraction <= 1.0))
        throw InputError("build_layer: logistic fraction must lie in [0,1], got " +
                         std::to_string(logistic_fraction));
    LayerSpec layer;
    layer.n_inputs = n_inputs;
    layer.cfg = cfg.clamped();
    layer.cfg.validate();
    layer.logistic_fraction = logistic_fraction;
    layer.placement_seed = placement_seed;
    layer.assignment.assign(n_inputs, MapKind::SkewTentGLS);

    const std::size_t m = logistic_count(n_inputs, logistic_fraction);
    if (m > 0) {
        std::vector<std::size_t> positions(n_inputs);
        std::iota(positions.begin(), positions.end(), std::size_t{0});
        Rng rng(placement_seed);
        rng.shuffle(positions);
        for (std::size_t i = 0; i < m; ++i) layer.assignment[positions[i]] = MapKind::Logistic;
    }
    return layer;
}

void to_json(nlohmann::json& j, const NeuronConfig& cfg) {
    j = {{"q", cfg.q}, {"b", cfg.b}, {"epsilon", cfg.epsilon}, {"max_iters", cfg.max_iters}};
}

void from_json(const nlohmann::json& j, NeuronConfig& cfg) {
    cfg.q = j.at("q").get<double>();
    cfg.b = j.at("b").get<double>();
    cfg.epsilon = j.at("epsilon").get<double>();
    cfg.max_iters = j.value("max_iters", kDefaultMaxIters);
}

void to_json(nlohmann::json& j, const LayerSpec& layer) {
    std::vector<std::string> kinds;
    for (auto k : layer.assignment) kinds.emplace_back(to_string(k));
    j = {{"n_inputs", layer.n_inputs},
         {"cfg", layer.cfg},
         {"logistic_fraction", layer.logistic_fraction},
         {"placement_seed", layer.placement_seed},
         {"logistic_r", layer.logistic_r},
         {"assignment", kinds}};
}

void from_json(const nlohmann::json& j, LayerSpec& layer) {
    layer.n_inputs = j.at("n_inputs").get<std::size_t>();
    layer.cfg = j.at("cfg").get<NeuronConfig>();
    layer.logistic_fraction = j.at("logistic_fraction").get<double>();
    layer.placement_seed = j.at("placement_seed").get<std::uint64_t>();
    layer.logistic_r = j.value("logistic_r", 4.0);
    layer.assignment.clear();
    for (const auto& k : j.at("assignment")) layer.assignment.push_back(map_kind_from_string(k.get<std::string>()));
    if (layer.assignment.size() != layer.n_inputs)
        throw InputError("layer JSON: assignment length does not match n_inputs");
    layer.cfg.validate();
}

NeurochaosLayer::NeurochaosLayer(LayerSpec spec)
    : spec_(std::move(spec)),
      gls_(ChaoticMap::skew_tent(spec_.cfg.b), spec_.cfg),
      logistic_(ChaoticMap::logistic(spec_.cfg.b, spec_.logistic_r), spec_.cfg) {
    if (spec_.assignment.size() != spec_.n_inputs)
        throw InputError("layer assignment length does not match n_inputs");
}

void NeurochaosLayer::transform_sample_into(std::span<const double> sample, std::span<double> out) const {
    const std::size_t n = spec_.n_inputs;
    if (sample.size() != n)
        throw InputError("sample has " + std::to_string(sample.size()) + " attributes, layer expects " +
                         std::to_string(n));
    for (std::size_t i = 0; i < n; ++i) {
        double s = sample[i];
        if (!(s >= -kStimulusTolerance && s <= 1.0 + kStimulusTolerance))
            throw InputError("attribute " + std::to_string(i) + " = " + std::to_string(s) + " outside [0,1]");
        s = std::clamp(s, 0.0, 1.0);
        const auto& orbit = spec_.assignment[i] == MapKind::Logistic ? logistic_ : gls_;
        const ChaosFeatures f = orbit.fire(s);
        out[i] = f.firing_rate;
        out[n + i] = static_cast<double>(f.firing_time);
        out[2 * n + i] = f.energy;
        out[3 * n + i] = f.entropy;
    }
}

std::vector<double> NeurochaosLayer::transform_sample(std::span<const double> sample) const {
    std::vector<double> out(feature_dim());
    transform_sample_into(sample, out);
    return out;
}

Matrix NeurochaosLayer::transform_dataset(const Matrix& samples, unsigned threads) const {
    Matrix out(samples.rows(), feature_dim());
    if (samples.rows() > 0 && samples.cols() != spec_.n_inputs)
        throw InputError("dataset has " + std::to_string(samples.cols()) + " columns, layer expects " +
                         std::to_string(spec_.n_inputs));
    parallel_for(samples.rows(), threads, [&](std::size_t r) {
        try {
            transform_sample_into(samples.row(r), out.row(r));
        } catch (const InputError& e) {
            throw InputError("row " + std::to_string(r) + ": " + e.what());
        }
    });
    return out;
}

std::vector<double> transform_sample(const LayerSpec& layer, std::span<const double> sample) {
    return NeurochaosLayer(layer).transform_sample(sample);
}

Matrix transform_dataset(const LayerSpec& layer, const Matrix& samples, unsigned threads) {
    return NeurochaosLayer(layer).transform_dataset(samples, threads);
}

}  // namespace nl
