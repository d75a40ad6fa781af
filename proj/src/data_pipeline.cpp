#include "neurochaos/data_pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include "neurochaos/errors.hpp"
#include "neurochaos/random.hpp"

namespace nl {

namespace {

std::string trim(std::string_view s) {
    const auto ws = " \t\r\n\v\f";
    const auto first = s.find_first_not_of(ws);
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(ws);
    return std::string(s.substr(first, last - first + 1));
}

std::optional<double> parse_number(std::string_view cell) {
    const std::string t = trim(cell);
    if (t.empty()) return std::nullopt;
    const char* begin = t.data();
    if (*begin == '+') ++begin;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, t.data() + t.size(), v);
    if (ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

struct Record {
    std::size_t line = 0;  // 1-based line where the record starts
    std::vector<std::string> cells;
};

// Splits text into CSV records, honouring quoted newlines.
std::vector<Record> read_records(std::string_view text) {
    std::vector<Record> out;
    std::size_t line = 1;
    std::size_t pos = 0;
    if (text.substr(0, 3) == "\xEF\xBB\xBF") pos = 3;
    while (pos < text.size()) {
        Record rec;
        rec.line = line;
        std::string cell;
        bool in_quotes = false;
        bool done = false;
        while (pos < text.size() && !done) {
            const char ch = text[pos];
            if (in_quotes) {
                if (ch == '"') {
                    if (pos + 1 < text.size() && text[pos + 1] == '"') {
                        cell += '"';
                        ++pos;
                    } else {
                        in_quotes = false;
                    }
                } else {
                    if (ch == '\n') ++line;
                    cell += ch;
                }
            } else if (ch == '"') {
                in_quotes = true;
            } else if (ch == ',') {
                rec.cells.push_back(std::move(cell));
                cell.clear();
            } else if (ch == '\n') {
                ++line;
                done = true;
            } else if (ch != '\r') {
                cell += ch;
            }
            ++pos;
        }
        rec.cells.push_back(std::move(cell));
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace

bool BinarizeRule::apply(double value) const {
    if (comparator == ">") return value > threshold;
    if (comparator == ">=") return value >= threshold;
    if (comparator == "<") return value < threshold;
    if (comparator == "<=") return value <= threshold;
    throw InputError("binarize rule: unknown comparator '" + comparator + "'");
}

void DatasetSchema::validate() const {
    if (feature_columns.empty()) throw InputError("schema '" + name + "': feature_columns is empty");
    if (label_column.empty() && !binarize_rule) throw InputError("schema '" + name + "': no label column");
    auto contains = [](const std::vector<std::string>& v, const std::string& s) {
        return std::find(v.begin(), v.end(), s) != v.end();
    };
    for (const auto& f : feature_columns) {
        if (f == label_column) throw InputError("schema '" + name + "': feature '" + f + "' is also the label");
        if (contains(drop_columns, f)) throw InputError("schema '" + name + "': feature '" + f + "' is also dropped");
        if (binarize_rule && f == binarize_rule->column)
            throw InputError("schema '" + name + "': feature '" + f + "' is the binarized label source");
    }
    if (binarize_rule) binarize_rule->apply(0.0);  // validates the comparator
}

void to_json(nlohmann::json& j, const DatasetSchema& s) {
    j = {{"name", s.name},
         {"feature_columns", s.feature_columns},
         {"label_column", s.label_column},
         {"positive_label", s.positive_label},
         {"drop_columns", s.drop_columns}};
    if (s.negative_label) j["negative_label"] = *s.negative_label;
    if (s.binarize_rule)
        j["binarize_rule"] = {{"column", s.binarize_rule->column},
                              {"threshold", s.binarize_rule->threshold},
                              {"comparator", s.binarize_rule->comparator}};
}

void from_json(const nlohmann::json& j, DatasetSchema& s) {
    s = DatasetSchema{};
    s.name = j.value("name", std::string("dataset"));
    s.feature_columns = j.at("feature_columns").get<std::vector<std::string>>();
    s.label_column = j.value("label_column", std::string());
    s.positive_label = j.value("positive_label", std::string());
    if (j.contains("negative_label") && !j["negative_label"].is_null())
        s.negative_label = j["negative_label"].get<std::string>();
    s.drop_columns = j.value("drop_columns", std::vector<std::string>{});
    if (j.contains("binarize_rule") && !j["binarize_rule"].is_null()) {
        const auto& r = j["binarize_rule"];
        s.binarize_rule = BinarizeRule{r.at("column").get<std::string>(), r.at("threshold").get<double>(),
                                       r.value("comparator", std::string(">"))};
    }
    s.validate();
}

DatasetSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open schema file " + path.string());
    try {
        return nlohmann::json::parse(in).get<DatasetSchema>();
    } catch (const nlohmann::json::exception& e) {
        throw InputError("schema file " + path.string() + ": " + e.what());
    }
}

std::vector<std::size_t> Dataset::class_counts() const {
    std::vector<std::size_t> counts;
    for (int l : y) {
        if (static_cast<std::size_t>(l) >= counts.size()) counts.resize(static_cast<std::size_t>(l) + 1, 0);
        ++counts[static_cast<std::size_t>(l)];
    }
    return counts;
}

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::vector<std::string> split_csv_record(std::string_view line) {
    auto recs = read_records(line);
    return recs.empty() ? std::vector<std::string>{""} : recs.front().cells;
}

Dataset parse_csv(std::string_view text, const DatasetSchema& schema, const LoadOptions& options,
                  LoadReport* report) {
    schema.validate();
    LoadReport local;
    LoadReport& rep = report ? *report : local;

    const auto records = read_records(text);
    if (records.empty()) throw InputError("empty CSV input");

    std::vector<std::string> required = schema.feature_columns;
    const std::string label_source = schema.binarize_rule ? schema.binarize_rule->column : schema.label_column;
    required.push_back(label_source);

    // header = first record naming every required column
    std::size_t header_pos = records.size();
    std::map<std::string, std::size_t> column_index;
    for (std::size_t r = 0; r < records.size() && header_pos == records.size(); ++r) {
        std::map<std::string, std::size_t> idx;
        for (std::size_t c = 0; c < records[r].cells.size(); ++c) idx.emplace(trim(records[r].cells[c]), c);
        if (std::all_of(required.begin(), required.end(), [&](const auto& col) { return idx.count(col) > 0; })) {
            header_pos = r;
            column_index = std::move(idx);
        }
    }
    if (header_pos == records.size()) {
        std::string missing;
        std::map<std::string, std::size_t> first;
        for (std::size_t c = 0; c < records.front().cells.size(); ++c) first.emplace(trim(records.front().cells[c]), c);
        for (const auto& col : required)
            if (!first.count(col)) missing += (missing.empty() ? "" : ", ") + col;
        throw InputError("CSV header is missing column(s): " + missing);
    }
    rep.skipped_lines += header_pos;

    std::vector<std::string> header_cells;
    for (const auto& c : records[header_pos].cells) header_cells.push_back(trim(c));
    const std::size_t width = header_cells.size();

    std::vector<std::size_t> feature_idx;
    for (const auto& f : schema.feature_columns) feature_idx.push_back(column_index.at(f));
    const std::size_t label_idx = column_index.at(label_source);

    Dataset ds;
    ds.attribute_names = schema.feature_columns;
    ds.schema_name = schema.name;
    ds.content_hash = fnv1a64(text);
    std::vector<double> row(feature_idx.size());

    auto reject = [&](std::size_t line, const std::string& reason) {
        if (!options.lenient) throw InputError("line " + std::to_string(line) + ": " + reason);
        rep.rejected.push_back({line, reason});
    };

    for (std::size_t r = header_pos + 1; r < records.size(); ++r) {
        const auto& rec = records[r];
        std::vector<std::string> cells;
        cells.reserve(rec.cells.size());
        for (const auto& c : rec.cells) cells.push_back(trim(c));
        const auto non_empty = std::count_if(cells.begin(), cells.end(), [](const auto& c) { return !c.empty(); });
        if (non_empty == 0) {
            ++rep.skipped_lines;
            continue;
        }
        if (cells == header_cells) {
            ++rep.skipped_lines;
            continue;
        }
        if (non_empty == 1 && cells.size() < width) {
            const auto& only = *std::find_if(cells.begin(), cells.end(), [](const auto& c) { return !c.empty(); });
            if (!parse_number(only)) {
                ++rep.skipped_lines;
                continue;
            }
        }
        if (cells.size() != width) {
            reject(rec.line, "expected " + std::to_string(width) + " fields, found " + std::to_string(cells.size()));
            continue;
        }
        bool ok = true;
        for (std::size_t f = 0; f < feature_idx.size(); ++f) {
            const auto v = parse_number(cells[feature_idx[f]]);
            if (!v) {
                reject(rec.line, "column '" + schema.feature_columns[f] + "': cannot parse '" + cells[feature_idx[f]] +
                                     "' as a number");
                ok = false;
                break;
            }
            row[f] = *v;
        }
        if (!ok) continue;

        int label = 0;
        const std::string& raw = cells[label_idx];
        if (schema.binarize_rule) {
            const auto v = parse_number(raw);
            if (!v) {
                reject(rec.line, "column '" + label_source + "': cannot parse '" + raw + "' as a number");
                continue;
            }
            label = schema.binarize_rule->apply(*v) ? 1 : 0;
        } else if (raw == schema.positive_label) {
            label = 1;
        } else if (raw.empty() || (schema.negative_label && raw != *schema.negative_label)) {
            reject(rec.line, "unknown label '" + raw + "'");
            continue;
        }
        ds.X.append_row(row);
        ds.y.push_back(label);
    }
    if (ds.y.empty()) throw InputError("no data rows left after cleaning");
    return ds;
}

Dataset load_csv(const std::filesystem::path& path, const DatasetSchema& schema, const LoadOptions& options,
                 LoadReport* report) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset file " + path.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    if (text.empty()) throw InputError("dataset file " + path.string() + " is empty");
    try {
        Dataset ds = parse_csv(text, schema, options, report);
        ds.source = path.string();
        return ds;
    } catch (const InputError& e) {
        throw InputError(path.string() + ": " + e.what());
    }
}

NormalizationStats fit_normalizer(const Matrix& X, std::span<const std::size_t> train_idx) {
    if (train_idx.empty()) throw InputError("fit_normalizer: empty training index set");
    NormalizationStats s;
    s.min.assign(X.cols(), std::numeric_limits<double>::infinity());
    s.max.assign(X.cols(), -std::numeric_limits<double>::infinity());
    for (auto r : train_idx) {
        auto row = X.row(r);
        for (std::size_t c = 0; c < X.cols(); ++c) {
            s.min[c] = std::min(s.min[c], row[c]);
            s.max[c] = std::max(s.max[c], row[c]);
        }
    }
    return s;
}

Matrix apply_normalizer(const NormalizationStats& stats, const Matrix& X) {
    if (X.cols() != stats.min.size() && X.rows() > 0)
        throw InputError("apply_normalizer: matrix has " + std::to_string(X.cols()) + " columns, stats have " +
                         std::to_string(stats.min.size()));
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) {
            const double lo = stats.min[c], hi = stats.max[c];
            out(r, c) = hi > lo ? std::clamp((X(r, c) - lo) / (hi - lo), 0.0, 1.0) : 0.5;
        }
    return out;
}

void to_json(nlohmann::json& j, const NormalizationStats& s) { j = {{"min", s.min}, {"max", s.max}}; }

void from_json(const nlohmann::json& j, NormalizationStats& s) {
    s.min = j.at("min").get<std::vector<double>>();
    s.max = j.at("max").get<std::vector<double>>();
    if (s.min.size() != s.max.size()) throw InputError("normalization JSON: min/max length mismatch");
}

namespace {

std::map<int, std::vector<std::size_t>> group_by_class(std::span<const int> labels,
                                                       std::span<const std::size_t> indices) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (auto i : indices) by_class[labels[i]].push_back(i);
    return by_class;
}

}  // namespace

SplitPlan stratified_split(std::span<const int> labels, std::uint64_t seed, double train_fraction) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InputError("stratified_split: train fraction must lie in (0,1), got " + std::to_string(train_fraction));
    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    SplitPlan plan;
    plan.seed = seed;
    plan.train_fraction = train_fraction;
    for (auto& [cls, idx] : group_by_class(labels, all)) {
        if (idx.size() < 2)
            throw InputError("stratified_split: class " + std::to_string(cls) + " has fewer than 2 samples");
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        auto n_train = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(idx.size()) + 1e-9));
        n_train = std::clamp<std::size_t>(n_train, 1, idx.size() - 1);
        plan.train.insert(plan.train.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n_train));
        plan.test.insert(plan.test.end(), idx.begin() + static_cast<std::ptrdiff_t>(n_train), idx.end());
    }
    std::sort(plan.train.begin(), plan.train.end());
    std::sort(plan.test.begin(), plan.test.end());
    return plan;
}

std::vector<std::size_t> lstr_draw(std::span<const int> labels, std::span<const std::size_t> pool, std::size_t k,
                                   std::uint64_t trial_seed) {
    if (k == 0) throw InputError("lstr_draw: k must be positive");
    std::vector<std::size_t> out;
    for (auto& [cls, idx] : group_by_class(labels, pool)) {
        if (idx.size() < k)
            throw InputError("lstr_draw: class " + std::to_string(cls) + " has " + std::to_string(idx.size()) +
                             " samples in the pool, need " + std::to_string(k));
        Rng rng(derive_seed(trial_seed, static_cast<std::uint64_t>(cls)));
        rng.shuffle(idx);
        out.insert(out.end(), idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k));
    }
    return out;
}

}  // namespace nl
