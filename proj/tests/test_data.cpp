#include "amsom/data.hpp"
#include "amsom/error.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <algorithm>
#include <set>

using namespace amsom;

#ifndef AMSOM_TEST_DATA
#error "AMSOM_TEST_DATA must point at tests/data"
#endif

TEST_CASE("load_csv: the bundled iris file") {
    const CsvLoad iris = load_csv(std::filesystem::path(AMSOM_TEST_DATA) / "iris.csv", {"species"});
    CHECK(iris.data.size() == 150);
    CHECK(iris.data.dim() == 4);
    CHECK(iris.feature_names.front() == "sepal_length");
    CHECK(iris.class_names.empty());
    std::vector<int> count(3, 0);
    for (int l : iris.data.labels()) ++count.at(static_cast<std::size_t>(l));
    CHECK(count == std::vector<int>{50, 50, 50});
    CHECK(iris.data.pattern(0)(0) == 5.1);
}

TEST_CASE("load_csv: header, label columns and missing values") {
    const testutil::TempDir dir("csv");
    const auto headed = dir.write("a.csv", "a, b ,class\n1,2,x\n3,4,y\n\n5,?,x\n6,7,x\n");
    const auto bare = dir.write("b.csv", "1,2,0\n3,4,1\n");

    SUBCASE("label by name with string classes") {
        const CsvLoad r = load_csv(headed, {"class"});
        CHECK(r.data.size() == 3);
        CHECK(r.rejected_rows == 1);
        CHECK(r.feature_names == std::vector<std::string>{"a", "b"});
        CHECK(r.class_names == std::vector<std::string>{"x", "y"});
        CHECK(r.data.labels() == std::vector<int>{0, 1, 0});
        CHECK(r.data.pattern(2)(1) == 7.0);
    }
    SUBCASE("label by negative index") {
        const CsvLoad r = load_csv(headed, {"-1"});
        CHECK(r.data.dim() == 2);
        CHECK(r.data.has_labels());
    }
    SUBCASE("no header, integer labels") {
        const CsvLoad r = load_csv(bare, {"2"});
        CHECK(r.data.size() == 2);
        CHECK(r.data.labels() == std::vector<int>{0, 1});
        CHECK(r.feature_names == std::vector<std::string>{"x0", "x1"});
    }
    SUBCASE("no label column keeps every column") {
        const CsvLoad r = load_csv(bare);
        CHECK(r.data.dim() == 3);
        CHECK_FALSE(r.data.has_labels());
    }
    SUBCASE("errors") {
        CHECK_THROWS_AS((void)load_csv(dir.path() / "absent.csv"), DataError);
        CHECK_THROWS_AS((void)load_csv(dir.write("e.csv", "")), DataError);
        CHECK_THROWS_AS((void)load_csv(dir.write("r.csv", "1,2\n3\n")), DataError);
        CHECK_THROWS_AS((void)load_csv(dir.write("n.csv", "1,2\n3,abc\n")), DataError);
        CHECK_THROWS_AS((void)load_csv(headed, {"nope"}), ConfigError);
        CHECK_THROWS_AS((void)load_csv(bare, {"7"}), ConfigError);
    }
}

TEST_CASE("synthetic cluster data") {
    const Dataset d = generate_cluster_dataset(7);
    REQUIRE(d.size() == 1000);
    CHECK(d.dim() == 2);
    std::vector<int> count(4, 0);
    for (int l : d.labels()) ++count.at(static_cast<std::size_t>(l));
    CHECK(count == std::vector<int>{250, 250, 250, 250});

    // Separability oracle: a few Lloyd iterations from the blob means must
    // leave every point with the centre of its own blob.
    RowMatrix centre = RowMatrix::Zero(4, 2);
    for (Index p = 0; p < d.size(); ++p) centre.row(d.labels()[std::size_t(p)]) += d.pattern(p) / 250.0;
    for (int it = 0; it < 5; ++it) {
        RowMatrix sum = RowMatrix::Zero(4, 2);
        std::vector<int> n(4, 0);
        for (Index p = 0; p < d.size(); ++p) {
            Index best = 0;
            for (Index k = 1; k < 4; ++k)
                if ((d.pattern(p) - centre.row(k)).squaredNorm() < (d.pattern(p) - centre.row(best)).squaredNorm())
                    best = k;
            sum.row(best) += d.pattern(p);
            ++n[std::size_t(best)];
        }
        for (Index k = 0; k < 4; ++k) centre.row(k) = sum.row(k) / n[std::size_t(k)];
    }
    int agree = 0;
    for (Index p = 0; p < d.size(); ++p) {
        Index best = 0;
        for (Index k = 1; k < 4; ++k)
            if ((d.pattern(p) - centre.row(k)).squaredNorm() < (d.pattern(p) - centre.row(best)).squaredNorm())
                best = k;
        agree += best == d.labels()[std::size_t(p)];
    }
    CHECK(agree == 1000);

    CHECK(generate_cluster_dataset(7).patterns() == d.patterns());
    CHECK(generate_cluster_dataset(8).patterns() != d.patterns());
}

TEST_CASE("split sizes and shuffling") {
    CHECK(split_sizes(150, kDefaultSplit) == std::array<Index, 3>{90, 30, 30});
    CHECK(split_sizes(1000, kDefaultSplit) == std::array<Index, 3>{600, 200, 200});
    CHECK(split_sizes(7, kDefaultSplit) == std::array<Index, 3>{4, 1, 2});
    CHECK_THROWS_AS((void)split_sizes(3, {0.5, 0.2, 0.3}), ConfigError);
    CHECK_THROWS_AS((void)split_sizes(100, {0.5, 0.2, 0.2}), ConfigError);
    CHECK_THROWS_AS((void)split_sizes(100, {1.2, -0.1, -0.1}), ConfigError);

    RowMatrix x(20, 1);
    for (Index i = 0; i < 20; ++i) x(i, 0) = double(i);
    const Dataset d(x, std::vector<int>(20, 1));
    const Split s = split_dataset(d, kDefaultSplit, 3);
    CHECK(s.train.size() == 12);
    CHECK(s.test.size() == 4);
    CHECK(s.validation.size() == 4);
    std::multiset<double> seen;
    for (const Dataset* part : {&s.train, &s.test, &s.validation})
        for (Index i = 0; i < part->size(); ++i) seen.insert(part->pattern(i)(0));
    CHECK(seen.size() == 20);
    CHECK(std::set<double>(seen.begin(), seen.end()).size() == 20);
    CHECK(s.train.has_labels());

    const Split again = split_dataset(d, kDefaultSplit, 3);
    CHECK(again.train.patterns() == s.train.patterns());
    CHECK(split_dataset(d, kDefaultSplit, 4).train.patterns() != s.train.patterns());
}

TEST_CASE("MinMaxScaler") {
    const Dataset train = testutil::dataset({{1, 5, 2}, {3, 5, 6}, {2, 5, 4}});
    const MinMaxScaler s = MinMaxScaler::fit(train);
    const Dataset t = s.apply(train);
    CHECK(t.patterns().col(0).minCoeff() == 0.0);
    CHECK(t.patterns().col(0).maxCoeff() == 1.0);
    CHECK(t.patterns().col(1).isZero());
    CHECK(t.pattern(2)(2) == doctest::Approx(0.5));
    const Dataset outside = s.apply(testutil::dataset({{5, 6, 0}}));
    CHECK(outside.pattern(0)(0) == doctest::Approx(2.0));
    CHECK(outside.pattern(0)(2) == doctest::Approx(-0.5));
    CHECK_THROWS_AS((void)s.apply(testutil::dataset({{1, 2}})), DataError);
}
