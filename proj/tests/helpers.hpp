#pragma once

#include "amsom/core.hpp"

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <string>
#include <random>
#include <vector>

#include <unistd.h>

namespace testutil {

using amsom::Index;

inline amsom::RowMatrix rows(std::initializer_list<std::initializer_list<double>> values) {
    const auto n = static_cast<Index>(values.size());
    const auto d = static_cast<Index>(values.begin()->size());
    amsom::RowMatrix m(n, d);
    Index i = 0;
    for (const auto& row : values) {
        Index k = 0;
        for (double v : row) m(i, k++) = v;
        ++i;
    }
    return m;
}

inline amsom::Dataset dataset(std::initializer_list<std::initializer_list<double>> values) {
    return amsom::Dataset(rows(values));
}

/// Map from full E and A matrices given row by row; weights zero of dim 2.
inline amsom::MapState map_from(const std::vector<std::vector<int>>& e, const std::vector<std::vector<int>>& a) {
    const auto m = static_cast<Index>(e.size());
    amsom::MapState map = amsom::MapState::empty(m, 2);
    for (Index p = 0; p < m; ++p) {
        for (Index q = 0; q < m; ++q) {
            map.edges(p, q) = e[p][q];
            map.ages(p, q) = a[p][q];
        }
        map.positions(p, 0) = static_cast<double>(p);
    }
    return map;
}

inline amsom::Dataset random_dataset(Index n, Index d, std::uint64_t seed, double lo = 0.0, double hi = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(lo, hi);
    amsom::RowMatrix x(n, d);
    for (Index i = 0; i < n; ++i)
        for (Index k = 0; k < d; ++k) x(i, k) = u(rng);
    return amsom::Dataset(std::move(x));
}

/// Four tight blobs at the corners of the unit square, `per` points each,
/// labelled by blob.
inline amsom::Dataset corner_blobs(int per, double spread, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, spread);
    amsom::RowMatrix x(4 * per, 2);
    std::vector<int> labels;
    for (int b = 0; b < 4; ++b) {
        for (int k = 0; k < per; ++k) {
            const Index row = b * per + k;
            x(row, 0) = (b % 2) + noise(rng);
            x(row, 1) = (b / 2) + noise(rng);
            labels.push_back(b);
        }
    }
    return amsom::Dataset(std::move(x), std::move(labels));
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        static int counter = 0;
        path_ = std::filesystem::temp_directory_path() /
                ("amsom-test-" + tag + "-" + std::to_string(::getpid()) + "-" + std::to_string(counter++));
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    [[nodiscard]] const std::filesystem::path& path() const { return path_; }

    std::filesystem::path write(const std::string& name, const std::string& text) const {
        const auto p = path_ / name;
        std::ofstream(p) << text;
        return p;
    }

private:
    std::filesystem::path path_;
};

}  // namespace testutil
