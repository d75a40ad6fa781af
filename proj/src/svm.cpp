#include "neurochaos/svm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "neurochaos/errors.hpp"

namespace nl {

namespace {

constexpr double kTau = 1e-12;

bool finite_all(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

}  // namespace

std::string_view to_string(Kernel k) noexcept {
    switch (k) {
        case Kernel::Linear: return "linear";
        case Kernel::Rbf: return "rbf";
        case Kernel::Poly: return "poly";
        case Kernel::Sigmoid: return "sigmoid";
    }
    return "linear";
}

Kernel kernel_from_string(std::string_view name) {
    if (name == "linear") return Kernel::Linear;
    if (name == "rbf") return Kernel::Rbf;
    if (name == "poly") return Kernel::Poly;
    if (name == "sigmoid") return Kernel::Sigmoid;
    throw InputError("unknown kernel '" + std::string(name) + "'");
}

void SVMConfig::validate() const {
    if (!(C > 0.0) || !std::isfinite(C)) throw InputError("SVM: C must be positive");
    if (gamma && !(*gamma > 0.0)) throw InputError("SVM: gamma must be positive");
    if (kernel == Kernel::Poly && degree < 2) throw InputError("SVM: poly degree must be >= 2");
    if (!(tol > 0.0)) throw InputError("SVM: tol must be positive");
    if (max_passes < 1) throw InputError("SVM: max_passes must be positive");
}

std::string SVMConfig::describe() const {
    std::ostringstream os;
    os << "kernel=" << to_string(kernel) << " C=" << C << " gamma=";
    if (gamma)
        os << *gamma;
    else
        os << "scale";
    if (kernel == Kernel::Poly) os << " degree=" << degree;
    return os.str();
}

void to_json(nlohmann::json& j, const SVMConfig& c) {
    j = {{"C", c.C},
         {"kernel", std::string(to_string(c.kernel))},
         {"degree", c.degree},
         {"coef0", c.coef0},
         {"tol", c.tol},
         {"max_passes", c.max_passes}};
    if (c.gamma)
        j["gamma"] = *c.gamma;
    else
        j["gamma"] = "scale";
}

void from_json(const nlohmann::json& j, SVMConfig& c) {
    c = SVMConfig{};
    c.C = j.value("C", 1.0);
    c.kernel = kernel_from_string(j.value("kernel", std::string("rbf")));
    if (j.contains("gamma") && j["gamma"].is_number())
        c.gamma = j["gamma"].get<double>();
    else
        c.gamma.reset();
    c.degree = j.value("degree", 3);
    c.coef0 = j.value("coef0", 0.0);
    c.tol = j.value("tol", 1e-3);
    c.max_passes = j.value("max_passes", std::size_t{200});
    c.validate();
}

Standardizer Standardizer::fit(const Matrix& x) {
    Standardizer s;
    const std::size_t n = x.rows(), d = x.cols();
    s.mean.assign(d, 0.0);
    s.scale.assign(d, 1.0);
    if (n == 0) return s;
    for (std::size_t r = 0; r < n; ++r)
        for (std::size_t c = 0; c < d; ++c) s.mean[c] += x(r, c);
    for (double& m : s.mean) m /= static_cast<double>(n);
    for (std::size_t c = 0; c < d; ++c) {
        double ss = 0.0;
        for (std::size_t r = 0; r < n; ++r) {
            const double dv = x(r, c) - s.mean[c];
            ss += dv * dv;
        }
        const double sd = std::sqrt(ss / static_cast<double>(n));
        s.scale[c] = sd > 1e-12 * std::max(1.0, std::abs(s.mean[c])) ? sd : 1.0;
    }
    return s;
}

void Standardizer::apply(std::span<const double> in, std::span<double> out) const {
    for (std::size_t c = 0; c < in.size(); ++c) out[c] = (in[c] - mean[c]) / scale[c];
}

Matrix Standardizer::apply(const Matrix& x) const {
    Matrix z(x.rows(), x.cols());
    for (std::size_t r = 0; r < x.rows(); ++r) apply(x.row(r), z.row(r));
    return z;
}

double kernel_value(Kernel k, double gamma, int degree, double coef0, double dot, double sq_a, double sq_b) {
    switch (k) {
        case Kernel::Linear: return dot;
        case Kernel::Rbf: return std::exp(-gamma * std::max(0.0, sq_a + sq_b - 2.0 * dot));
        case Kernel::Poly: return std::pow(gamma * dot + coef0, degree);
        case Kernel::Sigmoid: return std::tanh(gamma * dot + coef0);
    }
    return dot;
}

SvmProblem::SvmProblem(const Matrix& features, std::span<const int> labels) {
    if (features.rows() != labels.size())
        throw InputError("svm_fit: " + std::to_string(features.rows()) + " rows but " +
                         std::to_string(labels.size()) + " labels");
    if (!finite_all(features.values())) throw NumericError("svm_fit: non-finite feature values");
    bool has0 = false, has1 = false;
    for (int l : labels) {
        if (l == 0)
            has0 = true;
        else if (l == 1)
            has1 = true;
        else
            throw InputError("svm_fit: labels must be binary {0,1}, got " + std::to_string(l));
    }
    if (!(has0 && has1)) throw InputError("svm_fit: training labels contain a single class");

    stats_ = Standardizer::fit(features);
    z_ = stats_.apply(features);
    const std::size_t n = z_.rows(), d = z_.cols();
    y_.resize(n);
    for (std::size_t i = 0; i < n; ++i) y_[i] = labels[i] == 1 ? 1.0 : -1.0;

    gram_.assign(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto zi = z_.row(i);
        for (std::size_t j = i; j < n; ++j) {
            auto zj = z_.row(j);
            double s = 0.0;
            for (std::size_t c = 0; c < d; ++c) s += zi[c] * zj[c];
            gram_[i * n + j] = gram_[j * n + i] = s;
        }
    }

    double mean = 0.0;
    for (double v : z_.values()) mean += v;
    const double total = static_cast<double>(z_.values().size());
    mean /= total;
    double var = 0.0;
    for (double v : z_.values()) var += (v - mean) * (v - mean);
    var /= total;
    scale_gamma_ = var > 0.0 ? 1.0 / (static_cast<double>(d) * var) : 1.0;
}

SVMModel SvmProblem::fit(const SVMConfig& cfg) const {
    cfg.validate();
    const std::size_t n = y_.size();
    const double C = cfg.C;
    const double gamma = cfg.gamma ? *cfg.gamma : scale_gamma_;

    // Q_ij = y_i y_j K_ij
    std::vector<double> Q(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double k = kernel_value(cfg.kernel, gamma, cfg.degree, cfg.coef0, gram_[i * n + j],
                                          gram_[i * n + i], gram_[j * n + j]);
            Q[i * n + j] = y_[i] * y_[j] * k;
        }

    std::vector<double> alpha(n, 0.0);
    std::vector<double> G(n, -1.0);
    auto in_up = [&](std::size_t t) { return y_[t] > 0 ? alpha[t] < C : alpha[t] > 0.0; };
    auto in_low = [&](std::size_t t) { return y_[t] > 0 ? alpha[t] > 0.0 : alpha[t] < C; };

    const std::size_t max_iter = std::max<std::size_t>(cfg.max_passes * n, 1);
    std::size_t iter = 0;
    double gap = 0.0;
    bool converged = false;
    for (;;) {
        // maximal violating i, second-order j
        std::ptrdiff_t i = -1;
        double gmax = -std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t)
            if (in_up(t) && -y_[t] * G[t] > gmax) {
                gmax = -y_[t] * G[t];
                i = static_cast<std::ptrdiff_t>(t);
            }
        double gmax2 = -std::numeric_limits<double>::infinity();
        std::ptrdiff_t j = -1;
        double obj_min = std::numeric_limits<double>::infinity();
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low(t)) continue;
            gmax2 = std::max(gmax2, y_[t] * G[t]);
            if (i < 0) continue;
            const double grad_diff = gmax + y_[t] * G[t];
            if (grad_diff > 0.0) {
                const auto ii = static_cast<std::size_t>(i);
                double quad = Q[ii * n + ii] + Q[t * n + t] - 2.0 * y_[ii] * y_[t] * Q[ii * n + t];
                if (quad <= 0.0) quad = kTau;
                const double obj = -(grad_diff * grad_diff) / quad;
                if (obj < obj_min) {
                    obj_min = obj;
                    j = static_cast<std::ptrdiff_t>(t);
                }
            }
        }
        gap = (i < 0 || gmax2 == -std::numeric_limits<double>::infinity()) ? 0.0 : gmax + gmax2;
        if (i < 0 || j < 0 || gap < cfg.tol) {
            converged = true;
            break;
        }
        if (iter >= max_iter) break;
        ++iter;

        const auto a = static_cast<std::size_t>(i);
        const auto b = static_cast<std::size_t>(j);
        const double old_a = alpha[a], old_b = alpha[b];
        if (y_[a] != y_[b]) {
            double quad = Q[a * n + a] + Q[b * n + b] + 2.0 * Q[a * n + b];
            if (quad <= 0.0) quad = kTau;
            const double delta = (-G[a] - G[b]) / quad;
            const double diff = alpha[a] - alpha[b];
            alpha[a] += delta;
            alpha[b] += delta;
            if (diff > 0.0) {
                if (alpha[b] < 0.0) {
                    alpha[b] = 0.0;
                    alpha[a] = diff;
                }
            } else if (alpha[a] < 0.0) {
                alpha[a] = 0.0;
                alpha[b] = -diff;
            }
            if (diff > 0.0) {
                if (alpha[a] > C) {
                    alpha[a] = C;
                    alpha[b] = C - diff;
                }
            } else if (alpha[b] > C) {
                alpha[b] = C;
                alpha[a] = C + diff;
            }
        } else {
            double quad = Q[a * n + a] + Q[b * n + b] - 2.0 * Q[a * n + b];
            if (quad <= 0.0) quad = kTau;
            const double delta = (G[a] - G[b]) / quad;
            const double sum = alpha[a] + alpha[b];
            alpha[a] -= delta;
            alpha[b] += delta;
            if (sum > C) {
                if (alpha[a] > C) {
                    alpha[a] = C;
                    alpha[b] = sum - C;
                }
            } else if (alpha[b] < 0.0) {
                alpha[b] = 0.0;
                alpha[a] = sum;
            }
            if (sum > C) {
                if (alpha[b] > C) {
                    alpha[b] = C;
                    alpha[a] = sum - C;
                }
            } else if (alpha[a] < 0.0) {
                alpha[a] = 0.0;
                alpha[b] = sum;
            }
        }
        const double da = alpha[a] - old_a, db = alpha[b] - old_b;
        for (std::size_t t = 0; t < n; ++t) G[t] += Q[a * n + t] * da + Q[b * n + t] * db;
    }

    // rho: mean of y*G over free vectors, else midpoint of the feasible interval
    double ub = std::numeric_limits<double>::infinity(), lb = -ub, sum_free = 0.0;
    std::size_t n_free = 0;
    for (std::size_t t = 0; t < n; ++t) {
        const double yG = y_[t] * G[t];
        if (alpha[t] >= C) {
            if (y_[t] < 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else if (alpha[t] <= 0.0) {
            if (y_[t] > 0) ub = std::min(ub, yG);
            else lb = std::max(lb, yG);
        } else {
            ++n_free;
            sum_free += yG;
        }
    }
    const double rho = n_free > 0 ? sum_free / static_cast<double>(n_free) : (ub + lb) / 2.0;

    SVMModel m;
    m.config = cfg;
    m.gamma = gamma;
    m.stats = stats_;
    m.bias = -rho;
    m.converged = converged;
    m.iterations = iter;
    m.kkt_gap = gap;
    for (std::size_t t = 0; t < n; ++t)
        if (alpha[t] > 0.0) {
            m.support_vectors.append_row(z_.row(t));
            m.dual_coef.push_back(alpha[t] * y_[t]);
            m.support_indices.push_back(t);
        }
    if (!std::isfinite(m.bias)) throw NumericError("svm_fit: non-finite bias");
    return m;
}

SVMModel svm_fit(const Matrix& features, std::span<const int> labels, const SVMConfig& cfg) {
    return SvmProblem(features, labels).fit(cfg);
}

double svm_decision(const SVMModel& model, std::span<const double> x) {
    const std::size_t d = model.feature_dim();
    if (x.size() != d)
        throw InputError("svm_predict: vector length " + std::to_string(x.size()) + ", model expects " +
                         std::to_string(d));
    std::vector<double> z(d);
    model.stats.apply(x, z);
    double zz = 0.0;
    for (double v : z) zz += v * v;
    const auto& cfg = model.config;
    double f = model.bias;
    for (std::size_t s = 0; s < model.dual_coef.size(); ++s) {
        auto sv = model.support_vectors.row(s);
        double dot = 0.0, ss = 0.0;
        for (std::size_t c = 0; c < d; ++c) {
            dot += sv[c] * z[c];
            ss += sv[c] * sv[c];
        }
        f += model.dual_coef[s] * kernel_value(cfg.kernel, model.gamma, cfg.degree, cfg.coef0, dot, ss, zz);
    }
    return f;
}

int svm_predict(const SVMModel& model, std::span<const double> x) { return svm_decision(model, x) > 0.0 ? 1 : 0; }

std::vector<int> svm_predict(const SVMModel& model, const Matrix& x) {
    std::vector<int> out(x.rows());
    for (std::size_t r = 0; r < x.rows(); ++r) out[r] = svm_predict(model, x.row(r));
    return out;
}

void to_json(nlohmann::json& j, const SVMModel& m) {
    std::vector<std::vector<double>> svs;
    for (std::size_t s = 0; s < m.support_vectors.rows(); ++s) {
        auto r = m.support_vectors.row(s);
        svs.emplace_back(r.begin(), r.end());
    }
    j = {{"type", "svm"},
         {"config", m.config},
         {"gamma", m.gamma},
         {"mean", m.stats.mean},
         {"scale", m.stats.scale},
         {"support_vectors", svs},
         {"dual_coef", m.dual_coef},
         {"support_indices", m.support_indices},
         {"bias", m.bias},
         {"converged", m.converged},
         {"iterations", m.iterations},
         {"kkt_gap", m.kkt_gap}};
}

void from_json(const nlohmann::json& j, SVMModel& m) {
    m = SVMModel{};
    m.config = j.at("config").get<SVMConfig>();
    m.gamma = j.at("gamma").get<double>();
    m.stats.mean = j.at("mean").get<std::vector<double>>();
    m.stats.scale = j.at("scale").get<std::vector<double>>();
    for (const auto& r : j.at("support_vectors")) m.support_vectors.append_row(r.get<std::vector<double>>());
    m.dual_coef = j.at("dual_coef").get<std::vector<double>>();
    m.support_indices = j.value("support_indices", std::vector<std::size_t>{});
    m.bias = j.at("bias").get<double>();
    m.converged = j.value("converged", true);
    m.iterations = j.value("iterations", std::size_t{0});
    m.kkt_gap = j.value("kkt_gap", 0.0);
    if (m.dual_coef.size() != m.support_vectors.rows()) throw InputError("SVM model JSON: dual/support mismatch");
    if (m.stats.scale.size() != m.stats.mean.size()) throw InputError("SVM model JSON: statistics mismatch");
}

}  // namespace nl
