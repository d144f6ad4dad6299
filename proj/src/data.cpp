#include "amsom/data.hpp"

#include "amsom/error.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>

namespace amsom {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string_view::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const char* first = s.data();
    if (*first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::optional<int> parse_int(const std::string& s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

bool is_missing(const std::string& s) { return s.empty() || s == "?" || s == "NA" || s == "NaN" || s == "nan"; }

std::string where(const std::filesystem::path& path, std::size_t line) {
    return path.string() + ":" + std::to_string(line);
}

}  // namespace

CsvLoad load_csv(const std::filesystem::path& path, const CsvOptions& options) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open " + path.string());

    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;
    std::string line;
    for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
        if (trim(line).empty()) continue;
        rows.emplace_back(lineno, split_row(line));
    }
    if (rows.empty()) throw DataError(path.string() + " is empty");

    const std::size_t width = rows.front().second.size();
    std::optional<std::size_t> label_col;
    bool named_label = false;
    if (options.label_column) {
        if (auto idx = parse_int(*options.label_column)) {
            const long w = static_cast<long>(width);
            const long i = *idx < 0 ? w + *idx : *idx;
            if (i < 0 || i >= w) throw ConfigError("label column " + *options.label_column + " out of range");
            label_col = static_cast<std::size_t>(i);
        } else {
            named_label = true;
        }
    }

    // Header detection: any non-numeric cell outside the label column.
    bool has_header = named_label;
    for (std::size_t c = 0; c < width && !has_header; ++c) {
        if (label_col && c == *label_col) continue;
        const std::string& cell = rows.front().second[c];
        if (!is_missing(cell) && !parse_double(cell)) has_header = true;
    }

    CsvLoad out;
    std::vector<std::string> header;
    if (has_header) {
        header = rows.front().second;
        rows.erase(rows.begin());
        if (named_label) {
            const auto it = std::find(header.begin(), header.end(), *options.label_column);
            if (it == header.end()) throw ConfigError("no column named '" + *options.label_column + "'");
            label_col = static_cast<std::size_t>(it - header.begin());
        }
    }
    if (rows.empty()) throw DataError(path.string() + " has no data rows");

    const std::size_t dim = width - (label_col ? 1 : 0);
    if (dim < 1) throw DataError(path.string() + " has no feature columns");
    for (std::size_t c = 0; c < width; ++c) {
        if (label_col && c == *label_col) continue;
        out.feature_names.push_back(has_header ? header[c] : "x" + std::to_string(out.feature_names.size()));
    }

    std::vector<std::vector<double>> features;
    std::vector<std::string> raw_labels;
    for (const auto& [lineno, cells] : rows) {
        if (cells.size() != width) {
            throw DataError(where(path, lineno) + ": expected " + std::to_string(width) + " cells, found " +
                            std::to_string(cells.size()));
        }
        if (std::any_of(cells.begin(), cells.end(), is_missing)) {
            ++out.rejected_rows;
            continue;
        }
        std::vector<double> row;
        row.reserve(dim);
        for (std::size_t c = 0; c < width; ++c) {
            if (label_col && c == *label_col) continue;
            const auto v = parse_double(cells[c]);
            if (!v) throw DataError(where(path, lineno) + ": cannot parse '" + cells[c] + "' as a number");
            row.push_back(*v);
        }
        features.push_back(std::move(row));
        if (label_col) raw_labels.push_back(cells[*label_col]);
    }
    if (features.empty()) throw DataError(path.string() + ": every row has missing values");

    RowMatrix x(static_cast<Index>(features.size()), static_cast<Index>(dim));
    for (std::size_t r = 0; r < features.size(); ++r)
        for (std::size_t c = 0; c < dim; ++c) x(static_cast<Index>(r), static_cast<Index>(c)) = features[r][c];

    std::optional<std::vector<int>> labels;
    if (label_col) {
        auto& ids = labels.emplace();
        const bool numeric = std::all_of(raw_labels.begin(), raw_labels.end(),
                                         [](const std::string& s) { return parse_int(s).has_value(); });
        if (numeric) {
            for (const auto& s : raw_labels) ids.push_back(*parse_int(s));
        } else {
            std::map<std::string, int> seen;
            for (const auto& s : raw_labels) {
                auto [it, fresh] = seen.try_emplace(s, static_cast<int>(out.class_names.size()));
                if (fresh) out.class_names.push_back(s);
                ids.push_back(it->second);
            }
        }
    }
    out.data = Dataset(std::move(x), std::move(labels));
    return out;
}

Dataset generate_cluster_dataset(std::uint64_t seed) {
    constexpr int kPerBlob = 250;
    constexpr double kSpread = 0.08;
    const std::array<std::array<double, 2>, 4> centers{{{0.0, 0.0}, {1.0, 0.0}, {0.0, 1.0}, {1.0, 1.0}}};

    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, kSpread);
    RowMatrix x(4 * kPerBlob, 2);
    std::vector<int> labels;
    labels.reserve(4 * kPerBlob);
    Index row = 0;
    for (int blob = 0; blob < 4; ++blob) {
        for (int k = 0; k < kPerBlob; ++k, ++row) {
            x(row, 0) = centers[blob][0] + noise(rng);
            x(row, 1) = centers[blob][1] + noise(rng);
            labels.push_back(blob);
        }
    }
    return Dataset(std::move(x), std::move(labels));
}

std::array<Index, 3> split_sizes(Index n, const SplitFractions& fractions) {
    double total = 0.0;
    for (double f : fractions) {
        if (!(f >= 0.0)) throw ConfigError("split fractions must be non-negative");
        total += f;
    }
    if (std::abs(total - 1.0) > 1e-9) throw ConfigError("split fractions must sum to 1");
    // Small epsilon so 0.6 * 150 lands on 90 rather than 89.
    const auto share = [&](double f) { return static_cast<Index>(std::floor(f * static_cast<double>(n) + 1e-9)); };
    const Index train = share(fractions[0]);
    const Index test = share(fractions[1]);
    const Index validation = n - train - test;
    if (train < 1 || test < 1 || validation < 1)
        throw ConfigError("split of " + std::to_string(n) + " patterns leaves an empty part");
    return {train, test, validation};
}

Split split_dataset(const Dataset& data, const SplitFractions& fractions, std::uint64_t seed) {
    const auto sizes = split_sizes(data.size(), fractions);
    std::vector<Index> order(static_cast<std::size_t>(data.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    const auto part = [&](std::size_t from, Index count) {
        return data.subset(std::span<const Index>(order).subspan(from, static_cast<std::size_t>(count)));
    };
    const auto n0 = static_cast<std::size_t>(sizes[0]);
    const auto n1 = static_cast<std::size_t>(sizes[1]);
    return Split{part(0, sizes[0]), part(n0, sizes[1]), part(n0 + n1, sizes[2])};
}

MinMaxScaler MinMaxScaler::fit(const Dataset& data) {
    MinMaxScaler s;
    s.lo_ = data.patterns().colwise().minCoeff();
    s.span_ = data.patterns().colwise().maxCoeff() - s.lo_;
    for (Index k = 0; k < s.span_.size(); ++k)
        if (s.span_(k) <= 0.0) s.span_(k) = 1.0;
    return s;
}

Dataset MinMaxScaler::apply(const Dataset& data) const {
    if (data.dim() != lo_.size()) throw_dimension_mismatch(data.dim(), lo_.size());
    RowMatrix x = (data.patterns().rowwise() - lo_).array().rowwise() / span_.array();
    if (data.has_labels()) return Dataset(std::move(x), data.labels());
    return Dataset(std::move(x));
}

}  // namespace amsom
