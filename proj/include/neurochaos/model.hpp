#pragma once

// End-to-end model: min-max normalization, optional neurochaos layer, and a
// cosine or SVM head.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "neurochaos/cosine.hpp"
#include "neurochaos/data_pipeline.hpp"
#include "neurochaos/nl_layer.hpp"
#include "neurochaos/svm.hpp"

namespace nl {

enum class LayerKind { None, ChaosNet, Rhnl25, Rhnl50, Rhnl75 };
enum class Head { Cosine, Svm };

double logistic_fraction(LayerKind kind) noexcept;
std::string_view to_string(LayerKind kind) noexcept;
LayerKind layer_kind_from_string(std::string_view name);
std::string_view to_string(Head head) noexcept;

struct ModelSpec {
    LayerKind layer = LayerKind::ChaosNet;
    Head head = Head::Cosine;
    NeuronConfig neuron;
    SVMConfig svm;
    std::uint64_t placement_seed = 0;
    bool rescale_firing_time = false;

    // "chaosnet", "rhnl50", "rhnl75+svm", "chaosnet+svm", "svm"
    std::string name() const;
    static ModelSpec from_name(std::string_view name);

    friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

void to_json(nlohmann::json& j, const ModelSpec& m);
void from_json(const nlohmann::json& j, ModelSpec& m);

// Per-column min-max of the firing-time block, fitted on training features.
struct FiringTimeScaler {
    std::size_t n_inputs = 0;
    std::vector<double> min;
    std::vector<double> max;

    static FiringTimeScaler fit(const Matrix& features, std::size_t n_inputs);
    void apply(Matrix& features) const;
};

struct TrainedModel {
    ModelSpec spec;
    NormalizationStats normalization;
    std::optional<LayerSpec> layer;
    std::optional<FiringTimeScaler> time_scaler;
    std::variant<CosineModel, SVMModel> head;

    // raw attribute rows -> class indices
    std::vector<int> predict(const Matrix& X_raw, unsigned threads = 1) const;
    // raw rows -> head input features
    Matrix features(const Matrix& X_raw, unsigned threads = 1) const;
};

/// Fits normalization (unless given), builds the layer, transforms, fits the head.
TrainedModel fit_model(const ModelSpec& spec, const Matrix& X_raw, std::span<const int> y, unsigned threads = 1,
                       const std::optional<NormalizationStats>& normalization = std::nullopt);

void to_json(nlohmann::json& j, const TrainedModel& m);

}  // namespace nl
