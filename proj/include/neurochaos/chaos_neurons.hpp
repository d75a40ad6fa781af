#pragma once

// Chaotic 1D neurons: the skew-tent GLS map and the logistic map, the
// fire-until-neighbourhood trajectory, and the four per-neuron features
// (firing rate, firing time, energy, entropy).

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace nl {

enum class MapKind : std::uint8_t { SkewTentGLS, Logistic };

std::string_view to_string(MapKind kind) noexcept;
MapKind map_kind_from_string(std::string_view name);

struct ChaoticMap {
    MapKind kind = MapKind::SkewTentGLS;
    double b = 0.5;  // skew of the tent; symbolization threshold for both kinds
    double r = 4.0;  // logistic growth rate

    static ChaoticMap skew_tent(double b);
    static ChaoticMap logistic(double b, double r = 4.0);

    // Throws DomainError unless 0 < b < 1 and 0 < r <= 4.
    void validate() const;
};

/// Evaluates one application of the map. Inputs more than 1e-12 outside
/// [0,1] are rejected; the result is clamped to [0,1].
double map_step(const ChaoticMap& map, double x);

inline constexpr double kMinInitialActivity = 0.001;
inline constexpr double kMaxInitialActivity = 0.999;
inline constexpr std::size_t kDefaultMaxIters = 10000;

struct NeuronConfig {
    double q = 0.5;        // initial neural activity
    double b = 0.5;        // discrimination threshold
    double epsilon = 0.1;  // neighbourhood half-width
    std::size_t max_iters = kDefaultMaxIters;

    // Throws DomainError when a field is outside its range.
    void validate() const;

    // Copy with q clamped into [0.001, 0.999]; q = 1 is a fixed point of both maps.
    NeuronConfig clamped() const;

    friend bool operator==(const NeuronConfig&, const NeuronConfig&) = default;
};

struct FiringRecord {
    std::vector<double> trajectory;     // x_0 = q .. x_N
    std::vector<std::uint8_t> symbols;  // 1 iff x_i >= b
    std::size_t firing_time = 0;        // N
    bool capped = false;                // max_iters reached before entering the neighbourhood
};

struct ChaosFeatures {
    double firing_rate = 0.0;
    std::size_t firing_time = 0;
    double energy = 0.0;
    double entropy = 0.0;

    friend bool operator==(const ChaosFeatures&, const ChaosFeatures&) = default;
};

/// Iterates `map` from cfg.q until |x_n - stimulus| < cfg.epsilon or
/// n == cfg.max_iters.
FiringRecord fire_neuron(const ChaoticMap& map, const NeuronConfig& cfg, double stimulus);

ChaosFeatures extract_features(const FiringRecord& rec);

// Shannon entropy in bits of a binary source with P(1) = ones / total.
double binary_entropy(std::size_t ones, std::size_t total) noexcept;

/// The orbit of q under one map, precomputed up to max_iters. Since every
/// stimulus starts the same trajectory from q, one orbit serves all stimuli;
/// fire() produces exactly the features extract_features(fire_neuron(...))
/// would, without materialising a FiringRecord.
class NeuronOrbit {
public:
    NeuronOrbit(const ChaoticMap& map, const NeuronConfig& cfg);

    ChaosFeatures fire(double stimulus) const;

    // Index of the first orbit point inside the neighbourhood, or max_iters if none.
    std::size_t firing_time(double stimulus) const;

    const std::vector<double>& orbit() const noexcept { return orbit_; }

private:
    NeuronConfig cfg_;
    std::vector<double> orbit_;
    std::vector<double> energy_prefix_;       // energy_prefix_[n] = sum of x_i^2 for i < n
    std::vector<std::uint32_t> ones_prefix_;  // ones_prefix_[n] = count of x_i >= b for i < n
};

}  // namespace nl
