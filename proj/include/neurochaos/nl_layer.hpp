#pragma once

// Input layer of chaotic neurons. A layer with logistic_fraction = 0 is the
// homogeneous ChaosNet layer; otherwise logistic neurons occupy a seeded
// random subset of input positions (RHNL).

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "neurochaos/chaos_neurons.hpp"
#include "neurochaos/matrix.hpp"

namespace nl {

inline constexpr std::size_t kFeaturesPerNeuron = 4;
inline constexpr double kStimulusTolerance = 1e-9;

struct LayerSpec {
    std::size_t n_inputs = 0;
    NeuronConfig cfg;
    double logistic_fraction = 0.0;
    std::uint64_t placement_seed = 0;
    double logistic_r = 4.0;
    std::vector<MapKind> assignment;

    std::size_t n_logistic() const;
    std::size_t feature_dim() const { return kFeaturesPerNeuron * n_inputs; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

// floor(fraction * n + 1/2)
std::size_t logistic_count(std::size_t n_inputs, double fraction);

/// Assigns round_half_up(fraction * n) positions to logistic neurons,
/// chosen by a seeded Fisher-Yates shuffle of position indices. q is
/// clamped into [0.001, 0.999].
LayerSpec build_layer(std::size_t n_inputs, const NeuronConfig& cfg, double logistic_fraction,
                      std::uint64_t placement_seed);

void to_json(nlohmann::json& j, const LayerSpec& layer);
void from_json(const nlohmann::json& j, LayerSpec& layer);
void to_json(nlohmann::json& j, const NeuronConfig& cfg);
void from_json(const nlohmann::json& j, NeuronConfig& cfg);

/// A built layer ready to transform samples. Holds one precomputed orbit
/// per map kind, so it is cheap to share across threads (read-only).
///
/// Feature layout per sample: [rate_1..rate_n, time_1..time_n,
/// energy_1..energy_n, entropy_1..entropy_n].
class NeurochaosLayer {
public:
    explicit NeurochaosLayer(LayerSpec spec);

    const LayerSpec& spec() const noexcept { return spec_; }
    std::size_t feature_dim() const noexcept { return spec_.feature_dim(); }

    std::vector<double> transform_sample(std::span<const double> sample) const;
    void transform_sample_into(std::span<const double> sample, std::span<double> out) const;

    // Row i of the result is transform_sample(row i); identical for any thread count.
    Matrix transform_dataset(const Matrix& samples, unsigned threads = 1) const;

private:
    LayerSpec spec_;
    NeuronOrbit gls_;
    NeuronOrbit logistic_;
};

std::vector<double> transform_sample(const LayerSpec& layer, std::span<const double> sample);
Matrix transform_dataset(const LayerSpec& layer, const Matrix& samples, unsigned threads = 1);

/// Column indices of the firing-time block for a layer of n inputs.
inline std::size_t firing_time_column(std::size_t n_inputs, std::size_t position) {
    return n_inputs + position;
}

}  // namespace nl
