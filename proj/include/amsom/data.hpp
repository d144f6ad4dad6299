#pragma once

// Dataset ingestion, the synthetic CLUSTER generator, train/test/validation
// splitting and feature scaling.

#include "amsom/core.hpp"

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace amsom {

struct CsvOptions {
    /// Class column: a zero-based index ("4", "-1" for the last column) or a
    /// header name. Unset means every column is a feature.
    std::optional<std::string> label_column;
};

struct CsvLoad {
    Dataset data;
    std::vector<std::string> feature_names;
    /// Distinct label strings in first-seen order when labels were not integer.
    std::vector<std::string> class_names;
    std::size_t rejected_rows = 0;  // rows with missing values
};

/// Comma-separated numeric features with an optional header line (detected
/// when the first row holds a non-numeric feature cell). Rows with empty, "?"
/// or "NA" cells are skipped and counted; any other unparseable cell throws
/// DataError naming the line.
[[nodiscard]] CsvLoad load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

/// 1000 two-dimensional points in four well separated Gaussian blobs of 250,
/// centred on a 2x2 arrangement; labels are the blob ids.
[[nodiscard]] Dataset generate_cluster_dataset(std::uint64_t seed);

struct Split {
    Dataset train;
    Dataset test;
    Dataset validation;
};

using SplitFractions = std::array<double, 3>;
inline constexpr SplitFractions kDefaultSplit{0.6, 0.2, 0.2};

/// Row counts for each split: floor of the train and test shares, the
/// remainder going to validation. Throws ConfigError if any part is empty.
[[nodiscard]] std::array<Index, 3> split_sizes(Index n, const SplitFractions& fractions);

/// Seeded uniform shuffle followed by contiguous slicing.
[[nodiscard]] Split split_dataset(const Dataset& data, const SplitFractions& fractions, std::uint64_t seed);

/// Per-feature min-max scaling fitted on one dataset and applied to others.
class MinMaxScaler {
public:
    static MinMaxScaler fit(const Dataset& data);
    [[nodiscard]] Dataset apply(const Dataset& data) const;

private:
    Eigen::RowVectorXd lo_;
    Eigen::RowVectorXd span_;
};

}  // namespace amsom
