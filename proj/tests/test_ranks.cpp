#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>
#include <random>

#include "depfn/copulas.hpp"
#include "depfn/estimator.hpp"
#include "depfn/ranks.hpp"
#include "helpers.hpp"

using namespace depfn;

namespace {

bool is_permutation_of_1_to_n(const std::vector<int>& ranks) {
    std::vector<int> sorted = ranks;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (sorted[i] != static_cast<int>(i) + 1) return false;
    return true;
}

}  // namespace

TEST_CASE("compute_ranks orders strictly increasing values") {
    const std::vector<double> y{3.1, 1.2, 2.7};
    CHECK(compute_ranks(y) == std::vector<int>{3, 1, 2});
}

TEST_CASE("compute_ranks breaks ties by index under ByIndex") {
    const std::vector<double> y{5.0, 5.0, 1.0};
    CHECK(compute_ranks(y) == std::vector<int>{2, 3, 1});
}

TEST_CASE("compute_ranks with Random tie rule is seeded and deterministic") {
    std::vector<double> y(100);
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = static_cast<double>(i / 10);  // 10 tied blocks
    const auto r1 = compute_ranks(y, TieRule::random(7));
    const auto r2 = compute_ranks(y, TieRule::random(7));
    CHECK(is_permutation_of_1_to_n(r1));
    CHECK(r1 == r2);
    CHECK(r1 != compute_ranks(y, TieRule::random(8)));
    // block structure preserved: block b gets ranks 10b+1 .. 10b+10
    for (std::size_t i = 0; i < y.size(); ++i) {
        CHECK(r1[i] > static_cast<int>(i / 10) * 10);
        CHECK(r1[i] <= (static_cast<int>(i / 10) + 1) * 10);
    }
}

TEST_CASE("compute_ranks rejects bad input") {
    CHECK_THROWS_AS(compute_ranks(std::vector<double>{1.0}), input_error);
    CHECK_THROWS_AS(compute_ranks(std::vector<double>{1.0, std::nan("")}), input_error);
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(compute_ranks(std::vector<double>{1.0, inf}), input_error);
}

TEST_CASE("compute_ranks always yields a permutation consistent with the order") {
    std::mt19937 gen(123);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = 2 + gen() % 49;
        std::vector<double> y(n);
        std::uniform_int_distribution<int> values(0, 5);  // plenty of ties
        for (auto& v : y) v = values(gen);
        for (TieRule rule : {TieRule::by_index(), TieRule::random(gen())}) {
            const auto ranks = compute_ranks(y, rule);
            REQUIRE(is_permutation_of_1_to_n(ranks));
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j)
                    if (y[i] < y[j]) REQUIRE(ranks[i] < ranks[j]);
        }
    }
}

TEST_CASE("nearest_neighbors on a 1-d line") {
    const std::vector<double> x{0.0, 1.0, 10.0};
    CHECK(nearest_neighbors(x.data(), 3, 1) == std::vector<std::size_t>{1, 0, 1});
}

TEST_CASE("nearest_neighbors breaks distance ties to the smallest index") {
    const std::vector<double> x{0.0, 0.0, 1.0, 0.0, 0.0, 1.0};  // (0,0), (1,0), (0,1)
    CHECK(nearest_neighbors(x.data(), 3, 2) == std::vector<std::size_t>{1, 0, 0});
}

TEST_CASE("nearest_neighbors handles exact duplicate points") {
    const std::vector<double> x{2.0, 2.0, 7.0};
    CHECK(nearest_neighbors(x.data(), 3, 1) == std::vector<std::size_t>{1, 0, 0});
}

TEST_CASE("nearest_neighbors rejects bad input") {
    const std::vector<double> one{0.5};
    CHECK_THROWS_AS(nearest_neighbors(one.data(), 1, 1), input_error);
    const std::vector<double> bad{0.0, std::nan("")};
    CHECK_THROWS_AS(nearest_neighbors(bad.data(), 2, 1), input_error);
}

TEST_CASE("both nearest-neighbor algorithms match the independent oracle") {
    std::mt19937 gen(2024);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (const std::size_t n : {2ul, 3ul, 17ul, 120ul, 500ul}) {
        for (const std::size_t d : {1ul, 2ul, 3ul, 5ul}) {
            std::vector<double> pts(n * d);
            for (auto& v : pts) v = unif(gen);
            // sprinkle exact duplicates and a tied cluster
            if (n >= 10) {
                for (std::size_t k = 0; k < d; ++k) pts[5 * d + k] = pts[2 * d + k];
                for (std::size_t k = 0; k < d; ++k) pts[7 * d + k] = 0.25;
                for (std::size_t k = 0; k < d; ++k) pts[9 * d + k] = 0.25;
            }
            const auto expect = testutil::naive_nn(pts, n, d);
            CHECK(nearest_neighbors(pts.data(), n, d, NnAlgorithm::BruteForce) == expect);
            CHECK(nearest_neighbors(pts.data(), n, d, NnAlgorithm::KdTree) == expect);
        }
    }
}

TEST_CASE("nearest_neighbors of 200 uniform points in the unit cube") {
    std::mt19937 gen(99);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    std::vector<double> pts(200 * 3);
    for (auto& v : pts) v = unif(gen);
    const auto expect = testutil::naive_nn(pts, 200, 3);
    CHECK(nearest_neighbors(pts.data(), 200, 3, NnAlgorithm::BruteForce) == expect);
    CHECK(nearest_neighbors(pts.data(), 200, 3, NnAlgorithm::KdTree) == expect);
}

TEST_CASE("nearest_neighbors is permutation invariant on tie-free points") {
    std::mt19937 gen(5);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const std::size_t n = 60, d = 2;
    std::vector<double> pts(n * d);
    for (auto& v : pts) v = unif(gen);
    const auto base = nearest_neighbors(pts.data(), n, d);

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), gen);
    std::vector<double> shuffled(n * d);
    std::vector<std::size_t> pos(n);  // pos[original] = new position
    for (std::size_t k = 0; k < n; ++k) {
        pos[perm[k]] = k;
        for (std::size_t c = 0; c < d; ++c) shuffled[k * d + c] = pts[perm[k] * d + c];
    }
    const auto shuffled_nn = nearest_neighbors(shuffled.data(), n, d);
    for (std::size_t k = 0; k < n; ++k) CHECK(shuffled_nn[k] == pos[base[perm[k]]]);
}

TEST_CASE("make_rank_pairs on two points gives mutual neighbors") {
    const Dataset data = Dataset::univariate({1.0, 2.0}, {0.0, 1.0});
    const RankPairs rp = make_rank_pairs(data);
    REQUIRE(rp.n == 2);
    CHECK(rp.pairs[0] == std::pair<int, int>{1, 2});
    CHECK(rp.pairs[1] == std::pair<int, int>{2, 1});
}

TEST_CASE("make_rank_pairs on a monotone triple") {
    const Dataset data = Dataset::univariate({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0});
    const RankPairs rp = make_rank_pairs(data);
    CHECK(rp.pairs == std::vector<std::pair<int, int>>{{1, 2}, {2, 1}, {3, 2}});
}

TEST_CASE("make_rank_pairs propagates input errors") {
    Dataset data = Dataset::univariate({1.0, std::nan("")}, {0.0, 1.0});
    CHECK_THROWS_AS(make_rank_pairs(data), input_error);
}

TEST_CASE("comonotone samples produce rank-adjacent neighbor pairs") {
    // Frechet(1, 0) is V = U: nearest x neighbors are adjacent in sorted
    // order, so every rank gap is exactly 1.
    const Dataset data = sample_joint(FrechetSpec{1.0, 0.0}, 1000, 42);
    const RankPairs rp = make_rank_pairs(data);
    for (const auto& [ri, rj] : rp.pairs) CHECK(std::abs(ri - rj) == 1);
}
