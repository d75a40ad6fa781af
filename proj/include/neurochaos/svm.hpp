#pragma once

// Binary soft-margin SVM trained by sequential minimal optimization.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "neurochaos/matrix.hpp"

namespace nl {

enum class Kernel { Linear, Rbf, Poly, Sigmoid };

std::string_view to_string(Kernel k) noexcept;
Kernel kernel_from_string(std::string_view name);

struct SVMConfig {
    double C = 1.0;
    Kernel kernel = Kernel::Rbf;
    std::optional<double> gamma;  // empty means "scale"
    int degree = 3;
    double coef0 = 0.0;
    double tol = 1e-3;
    std::size_t max_passes = 200;

    void validate() const;
    std::string describe() const;

    friend bool operator==(const SVMConfig&, const SVMConfig&) = default;
};

void to_json(nlohmann::json& j, const SVMConfig& c);
void from_json(const nlohmann::json& j, SVMConfig& c);

// Per-column z-score statistics; constant columns keep scale 1.
struct Standardizer {
    std::vector<double> mean;
    std::vector<double> scale;

    static Standardizer fit(const Matrix& x);
    void apply(std::span<const double> in, std::span<double> out) const;
    Matrix apply(const Matrix& x) const;
};

struct SVMModel {
    SVMConfig config;
    double gamma = 1.0;  // resolved value actually used
    Standardizer stats;
    Matrix support_vectors;               // standardized rows
    std::vector<double> dual_coef;        // alpha_i * y_i, y in {-1,+1}
    std::vector<std::size_t> support_indices;  // rows of the training matrix
    double bias = 0.0;
    // solver diagnostics
    bool converged = true;
    std::size_t iterations = 0;
    double kkt_gap = 0.0;

    std::size_t feature_dim() const noexcept { return stats.mean.size(); }
};

/// Standardized training data plus its Gram matrix, shared by fits that
/// differ only in SVMConfig (C, kernel, gamma...).
class SvmProblem {
public:
    SvmProblem(const Matrix& features, std::span<const int> labels);

    SVMModel fit(const SVMConfig& cfg) const;

    std::size_t size() const noexcept { return y_.size(); }
    // gamma = 1 / (d * var(Z)) over all standardized entries
    double scale_gamma() const noexcept { return scale_gamma_; }

private:
    Standardizer stats_;
    Matrix z_;
    std::vector<double> gram_;  // n x n dot products of standardized rows
    std::vector<double> y_;     // -1 / +1
    double scale_gamma_ = 1.0;
};

/// Standardizes columns with training statistics, maps labels {0,1} to
/// {-1,+1} and solves the dual to KKT gap <= tol.
SVMModel svm_fit(const Matrix& features, std::span<const int> labels, const SVMConfig& cfg);

// sum_i alpha_i y_i K(x_i, x) + bias, x in raw (unstandardized) units
double svm_decision(const SVMModel& model, std::span<const double> x);

// 1 if the decision value is > 0, else 0
int svm_predict(const SVMModel& model, std::span<const double> x);
std::vector<int> svm_predict(const SVMModel& model, const Matrix& x);

void to_json(nlohmann::json& j, const SVMModel& m);
void from_json(const nlohmann::json& j, SVMModel& m);

// Kernel value from a dot product and the two squared norms.
double kernel_value(Kernel k, double gamma, int degree, double coef0, double dot, double sq_a, double sq_b);

}  // namespace nl
