#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "test_util.hpp"
#include "texclass/errors.hpp"
#include "texclass/selection.hpp"

using namespace texclass;

namespace {

// rows alternate per class in blocks of two; population sigma inside a
// class comes out exact for pairs {m-d, m+d}
FeatureMatrix two_class(const std::vector<std::vector<double>>& cols,
                        const std::vector<std::string>& names) {
    FeatureMatrix m;
    m.feature_names = names;
    const int rows = static_cast<int>(cols.front().size());
    for (int r = 0; r < rows; ++r) {
        m.labels.push_back(r < rows / 2 ? "a" : "b");
        m.groups.push_back("g" + std::to_string(r));
        m.row_ids.push_back("r" + std::to_string(r));
    }
    m.values.resize(static_cast<size_t>(rows) * cols.size());
    for (int r = 0; r < rows; ++r)
        for (size_t c = 0; c < cols.size(); ++c)
            m.values[static_cast<size_t>(r) * cols.size() + c] = cols[c][r];
    m.validate();
    return m;
}

}  // namespace

TEST_SUITE("selection") {

TEST_CASE("pairwise disparity closed forms") {
    // class a holds {0,2} (sigma 1); class b holds {0,4} (sigma 2)
    const FeatureMatrix m = two_class({{0, 2, 0, 4}}, {"f"});
    const DivergenceRanking r = divergence(m);
    REQUIRE(r.divergence.size() == 1);
    CHECK_FALSE(r.degenerate[0]);
    CHECK(std::abs(r.divergence[0] - 1.0) <= 1e-12);

    // equal sigmas, different means: no disparity at all
    const FeatureMatrix eq = two_class({{0, 2, 10, 12}}, {"f"});
    CHECK(divergence(eq).divergence[0] == 0.0);
}

TEST_CASE("four classes with sigmas 1,1,1,2 score 3") {
    FeatureMatrix m;
    m.feature_names = {"f"};
    const char* labs[4] = {"c1", "c2", "c3", "c4"};
    for (int k = 0; k < 4; ++k) {
        m.labels.push_back(labs[k]);
        m.labels.push_back(labs[k]);
        m.groups.push_back("g" + std::to_string(2 * k));
        m.groups.push_back("g" + std::to_string(2 * k + 1));
        m.row_ids.push_back("");
        m.row_ids.push_back("");
        m.values.push_back(0.0);
        m.values.push_back(k == 3 ? 4.0 : 2.0);
    }
    m.validate();
    const DivergenceRanking r = divergence(m);
    CHECK(std::abs(r.divergence[0] - 3.0) <= 1e-12);
}

TEST_CASE("a class-constant feature is degenerate and unranked") {
    const FeatureMatrix m = two_class({{0, 2, 0, 4}, {5, 5, 1, 3}}, {"good", "flat"});
    const DivergenceRanking r = divergence(m);
    CHECK_FALSE(r.degenerate[0]);
    CHECK(r.degenerate[1] == 1);
    CHECK(std::isnan(r.divergence[1]));
    CHECK(r.order == std::vector<int>{0});

    const SelectionResult sel = prune(m, r, 0.8);
    CHECK(sel.kept == std::vector<std::string>{"good"});
    REQUIRE(sel.dropped.size() == 1);
    CHECK(sel.dropped[0].name == "flat");
    CHECK(sel.dropped[0].reason == "degenerate");
}

TEST_CASE("input validation") {
    FeatureMatrix one_class = two_class({{0, 2, 0, 4}}, {"f"});
    for (auto& lab : one_class.labels) lab = "a";
    CHECK_THROWS_AS(divergence(one_class), DataError);

    FeatureMatrix thin = two_class({{0, 2, 0, 4}}, {"f"});
    thin.labels = {"a", "a", "a", "b"};
    CHECK_THROWS_AS(divergence(thin), DataError);
}

TEST_CASE("ties rank in column order") {
    const FeatureMatrix m =
        two_class({{0, 2, 0, 4}, {0, 2, 0, 4}, {1, 3, 1, 5}}, {"x", "y", "z"});
    const DivergenceRanking r = divergence(m);
    CHECK(r.divergence[0] == r.divergence[1]);
    CHECK(r.divergence[1] == r.divergence[2]);
    CHECK(r.order == std::vector<int>{0, 1, 2});
}

TEST_CASE("shifting a column by a power of two changes nothing, bitwise") {
    const FeatureMatrix m = two_class({{0, 2, 0, 4}}, {"f"});
    FeatureMatrix shifted = m;
    for (auto& v : shifted.values) v += 64.0;
    CHECK(divergence(m).divergence[0] == divergence(shifted).divergence[0]);
}

TEST_CASE("pruning drops duplicates and keeps a boundary correlation") {
    // p: the score-1 column; q: orthogonal to p with nonzero class sigmas;
    // dup: a literal copy of p; edge: r(edge_a, edge_b) = 0.8 exactly
    const FeatureMatrix m = two_class(
        {{0, 2, 0, 4}, {1, 3, -2.5, -1.5}, {0, 2, 0, 4}}, {"p", "q", "dup"});
    const DivergenceRanking r = divergence(m);
    const SelectionResult sel = prune(m, r, 0.8);
    CHECK(sel.kept == std::vector<std::string>{"p"});
    REQUIRE(sel.dropped.size() == 2);
    CHECK(sel.dropped[0].name == "dup");
    CHECK(sel.dropped[0].reason == "correlated-with:p");
    CHECK(sel.dropped[1].name == "q");
    CHECK(sel.dropped[1].reason == "zero-correlation");
}

TEST_CASE("a Pearson magnitude exactly at the threshold is kept") {
    const FeatureMatrix m = two_class({{2, 1, -2, -1}, {1, 2, -1, -2}}, {"a", "b"});
    CHECK(std::abs(pearson(m, 0, 1) - 0.8) <= 1e-15);
    DivergenceRanking rank;
    rank.divergence = {1.0, 0.5};
    rank.degenerate = {0, 0};
    rank.order = {0, 1};
    const SelectionResult sel = prune(m, rank, 0.8);
    CHECK(sel.kept == std::vector<std::string>{"a", "b"});
    CHECK(sel.dropped.empty());
}

TEST_CASE("the 37-column fixture keeps exactly its four generators") {
    const FeatureMatrix m = fixtures::selection_fixture();
    REQUIRE(m.cols() == 37);
    const DivergenceRanking rank = divergence(m);
    CHECK(rank.order.size() == 37);  // nothing degenerate
    const SelectionResult sel = prune(m, rank, 0.8);

    const std::set<std::string> kept(sel.kept.begin(), sel.kept.end());
    CHECK(kept == std::set<std::string>{"gen1", "gen2", "gen3", "gen4"});
    CHECK(sel.dropped.size() == 33);

    // the kept generators really are mutually compatible with the walk
    std::vector<int> kept_cols;
    for (const auto& n : sel.kept) kept_cols.push_back(m.find_feature(n));
    for (size_t i = 0; i < kept_cols.size(); ++i)
        for (size_t j = i + 1; j < kept_cols.size(); ++j) {
            const double r = std::abs(pearson(m, kept_cols[i], kept_cols[j]));
            CHECK(r <= 0.8);
            CHECK(r >= 1e-12);
        }

    // membership is stable under a global rescale of the data
    FeatureMatrix scaled = m;
    for (auto& v : scaled.values) v *= 3.0;
    const SelectionResult sel3 = prune(scaled, divergence(scaled), 0.8);
    CHECK(std::set<std::string>(sel3.kept.begin(), sel3.kept.end()) == kept);
}

TEST_CASE("selection report lists ranked rows then degenerate ones") {
    testutil::TempDir dir;
    const FeatureMatrix m = two_class({{0, 2, 0, 4}, {5, 5, 1, 3}}, {"good", "flat"});
    const DivergenceRanking r = divergence(m);
    const SelectionResult sel = prune(m, r, 0.8);
    const std::string path = dir.file("selection.csv");
    write_selection_csv(path, m, r, sel);
    const std::string text = testutil::read_file(path);
    CHECK(text.rfind("name,divergence,status,reason\n", 0) == 0);
    CHECK(text.find("good,1,kept,") != std::string::npos);
    CHECK(text.find("flat,nan,dropped,degenerate") != std::string::npos);
}

}  // TEST_SUITE
