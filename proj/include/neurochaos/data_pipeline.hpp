#pragma once

// CSV ingestion, min-max normalization, stratified splits and the
// low-sample training draws.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "neurochaos/matrix.hpp"

namespace nl {

struct BinarizeRule {
    std::string column;
    double threshold = 0.0;
    std::string comparator = ">";  // one of > >= < <=

    bool apply(double value) const;
};

struct DatasetSchema {
    std::string name;
    std::vector<std::string> feature_columns;
    std::string label_column;
    std::string positive_label;
    std::optional<std::string> negative_label;  // when set, other labels are rejected
    std::vector<std::string> drop_columns;
    std::optional<BinarizeRule> binarize_rule;

    void validate() const;
};

void to_json(nlohmann::json& j, const DatasetSchema& s);
void from_json(const nlohmann::json& j, DatasetSchema& s);

DatasetSchema load_schema(const std::filesystem::path& path);

struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> attribute_names;
    std::string source;
    std::string schema_name;
    std::uint64_t content_hash = 0;

    std::size_t size() const noexcept { return y.size(); }
    std::vector<std::size_t> class_counts() const;
};

struct RejectedRow {
    std::size_t line = 0;
    std::string reason;
};

struct LoadOptions {
    bool lenient = false;  // skip bad rows instead of failing
};

struct LoadReport {
    std::vector<RejectedRow> rejected;
    std::size_t skipped_lines = 0;  // preamble, blank, title or repeated header lines
};

// FNV-1a over the file bytes.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;

/// Reads an RFC-4180 CSV with a header row. Lines before the header, blank
/// lines, single-cell title lines and repeated header rows are skipped.
/// Bad numerics or unknown labels fail with the line number unless
/// options.lenient, in which case they are listed in the report.
Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema, const LoadOptions& options = {},
                 LoadReport* report = nullptr);

Dataset parse_csv(std::string_view text, const DatasetSchema& schema, const LoadOptions& options = {},
                  LoadReport* report = nullptr);

// Splits one CSV record; handles quoted fields with embedded commas and "" escapes.
std::vector<std::string> split_csv_record(std::string_view line);

struct NormalizationStats {
    std::vector<double> min;
    std::vector<double> max;

    friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

NormalizationStats fit_normalizer(const Matrix& X, std::span<const std::size_t> train_idx);
inline NormalizationStats fit_normalizer(const Dataset& ds, std::span<const std::size_t> train_idx) {
    return fit_normalizer(ds.X, train_idx);
}

/// (x - min) / (max - min) clipped to [0,1]; constant columns map to 0.5.
Matrix apply_normalizer(const NormalizationStats& stats, const Matrix& X);

void to_json(nlohmann::json& j, const NormalizationStats& s);
void from_json(const nlohmann::json& j, NormalizationStats& s);

struct SplitPlan {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
    std::uint64_t seed = 0;
    double train_fraction = 0.8;
    bool stratified = true;
};

/// Per class: seeded shuffle, floor(fraction * count) into train, the rest
/// into test. Index lists are returned sorted.
SplitPlan stratified_split(std::span<const int> labels, std::uint64_t seed, double train_fraction = 0.8);
inline SplitPlan stratified_split(const Dataset& ds, std::uint64_t seed, double train_fraction = 0.8) {
    return stratified_split(ds.y, seed, train_fraction);
}

/// Exactly k samples of each class from the pool, without replacement.
std::vector<std::size_t> lstr_draw(std::span<const int> labels, std::span<const std::size_t> pool, std::size_t k,
                                   std::uint64_t trial_seed);

}  // namespace nl
