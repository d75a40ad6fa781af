#include "neurochaos/chaos_neurons.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "neurochaos/errors.hpp"

namespace nl {

namespace {
constexpr double kDomainTolerance = 1e-12;
}

std::string_view to_string(MapKind kind) noexcept {
    return kind == MapKind::Logistic ? "logistic" : "gls";
}

MapKind map_kind_from_string(std::string_view name) {
    if (name == "gls" || name == "skew_tent") return MapKind::SkewTentGLS;
    if (name == "logistic") return MapKind::Logistic;
    throw InputError("unknown map kind '" + std::string(name) + "'");
}

ChaoticMap ChaoticMap::skew_tent(double b) {
    ChaoticMap m{MapKind::SkewTentGLS, b, 4.0};
    m.validate();
    return m;
}

ChaoticMap ChaoticMap::logistic(double b, double r) {
    ChaoticMap m{MapKind::Logistic, b, r};
    m.validate();
    return m;
}

void ChaoticMap::validate() const {
    if (!(b > 0.0 && b < 1.0)) throw DomainError("map parameter b must lie in (0,1), got " + std::to_string(b));
    if (!(r > 0.0 && r <= 4.0)) throw DomainError("logistic rate r must lie in (0,4], got " + std::to_string(r));
}

double map_step(const ChaoticMap& map, double x) {
    if (!(x >= -kDomainTolerance && x <= 1.0 + kDomainTolerance))
        throw DomainError("map_step: x = " + std::to_string(x) + " outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    double y;
    if (map.kind == MapKind::SkewTentGLS)
        y = x < map.b ? x / map.b : (1.0 - x) / (1.0 - map.b);
    else
        y = map.r * x * (1.0 - x);
    return std::clamp(y, 0.0, 1.0);
}

void NeuronConfig::validate() const {
    if (!(q >= kMinInitialActivity && q <= kMaxInitialActivity))
        throw DomainError("initial activity q must lie in [0.001,0.999], got " + std::to_string(q));
    if (!(b > 0.0 && b < 1.0)) throw DomainError("threshold b must lie in (0,1), got " + std::to_string(b));
    if (!(epsilon > 0.0) || !std::isfinite(epsilon))
        throw DomainError("epsilon must be positive, got " + std::to_string(epsilon));
    if (max_iters < 1) throw DomainError("max_iters must be at least 1");
}

NeuronConfig NeuronConfig::clamped() const {
    NeuronConfig c = *this;
    c.q = std::clamp(q, kMinInitialActivity, kMaxInitialActivity);
    return c;
}

FiringRecord fire_neuron(const ChaoticMap& map, const NeuronConfig& cfg, double stimulus) {
    map.validate();
    cfg.validate();
    if (!(stimulus >= 0.0 && stimulus <= 1.0))
        throw DomainError("fire_neuron: stimulus " + std::to_string(stimulus) + " outside [0,1]");

    FiringRecord rec;
    double x = cfg.q;
    std::size_t n = 0;
    for (;;) {
        rec.trajectory.push_back(x);
        rec.symbols.push_back(x >= cfg.b ? 1 : 0);
        if (std::abs(x - stimulus) < cfg.epsilon) break;
        if (n == cfg.max_iters) {
            rec.capped = true;
            break;
        }
        x = map_step(map, x);
        ++n;
    }
    rec.firing_time = n;
    return rec;
}

double binary_entropy(std::size_t ones, std::size_t total) noexcept {
    if (total == 0 || ones == 0 || ones == total) return 0.0;
    const double p1 = static_cast<double>(ones) / static_cast<double>(total);
    const double p0 = static_cast<double>(total - ones) / static_cast<double>(total);
    return -p0 * std::log2(p0) - p1 * std::log2(p1);
}

ChaosFeatures extract_features(const FiringRecord& rec) {
    ChaosFeatures f;
    std::size_t ones = 0;
    for (auto s : rec.symbols) ones += s;
    double energy = 0.0;
    for (double x : rec.trajectory) energy += x * x;
    const std::size_t len = rec.symbols.size();
    f.firing_rate = len ? static_cast<double>(ones) / static_cast<double>(len) : 0.0;
    f.firing_time = rec.firing_time;
    f.energy = energy;
    f.entropy = binary_entropy(ones, len);
    return f;
}

NeuronOrbit::NeuronOrbit(const ChaoticMap& map, const NeuronConfig& cfg) : cfg_(cfg) {
    map.validate();
    cfg_.validate();
    orbit_.reserve(cfg_.max_iters + 1);
    energy_prefix_.reserve(cfg_.max_iters + 2);
    ones_prefix_.reserve(cfg_.max_iters + 2);
    energy_prefix_.push_back(0.0);
    ones_prefix_.push_back(0);
    double x = cfg_.q;
    for (std::size_t n = 0;; ++n) {
        orbit_.push_back(x);
        energy_prefix_.push_back(energy_prefix_.back() + x * x);
        ones_prefix_.push_back(ones_prefix_.back() + (x >= cfg_.b ? 1u : 0u));
        if (n == cfg_.max_iters) break;
        x = map_step(map, x);
    }
}

std::size_t NeuronOrbit::firing_time(double stimulus) const {
    const std::size_t cap = cfg_.max_iters;
    for (std::size_t n = 0; n < cap; ++n)
        if (std::abs(orbit_[n] - stimulus) < cfg_.epsilon) return n;
    return cap;
}

ChaosFeatures NeuronOrbit::fire(double stimulus) const {
    if (!(stimulus >= 0.0 && stimulus <= 1.0))
        throw DomainError("fire: stimulus " + std::to_string(stimulus) + " outside [0,1]");
    const std::size_t n = firing_time(stimulus);
    const std::size_t len = n + 1;
    ChaosFeatures f;
    f.firing_rate = static_cast<double>(ones_prefix_[len]) / static_cast<double>(len);
    f.firing_time = n;
    f.energy = energy_prefix_[len];
    f.entropy = binary_entropy(ones_prefix_[len], len);
    return f;
}

}  // namespace nl
