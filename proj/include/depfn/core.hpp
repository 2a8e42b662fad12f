#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace depfn {

// Error taxonomy, mapped to CLI exit codes by tools/depfn_cli.cpp:
//   input_error / config_error -> 2, io_error -> 3, numeric_error -> 4.
class input_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class config_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class io_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numeric_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// n paired observations (y_i, x_i) with x_i in R^d, stored row-major.
struct Dataset {
    std::vector<double> y;
    std::vector<double> x;  // n*d values, point i at [i*d, (i+1)*d)
    std::size_t d = 1;

    std::size_t n() const { return y.size(); }

    std::span<const double> point(std::size_t i) const {
        return {x.data() + i * d, d};
    }

    static Dataset univariate(std::vector<double> y, std::vector<double> x) {
        Dataset ds;
        ds.y = std::move(y);
        ds.x = std::move(x);
        ds.d = 1;
        return ds;
    }

    void validate() const {
        if (d < 1) throw input_error("dataset: dimension must be >= 1");
        if (y.size() < 2) throw input_error("dataset: need at least 2 observations");
        if (x.size() != y.size() * d)
            throw input_error("dataset: x has " + std::to_string(x.size()) +
                              " values, expected n*d = " + std::to_string(y.size() * d));
        for (double v : y)
            if (!std::isfinite(v)) throw input_error("dataset: non-finite y value");
        for (double v : x)
            if (!std::isfinite(v)) throw input_error("dataset: non-finite x value");
    }
};

// How equal y values are ordered when ranking. Random carries an explicit
// seed; there is no ambient randomness anywhere in the library.
struct TieRule {
    enum class Kind { ByIndex, Random };
    Kind kind = Kind::ByIndex;
    std::uint64_t seed = 0;

    static TieRule by_index() { return {}; }
    static TieRule random(std::uint64_t seed) { return {Kind::Random, seed}; }
};

// The n pairs (R_i, R_{N(i)}): rank of y_i and rank of y at the nearest
// neighbor of x_i. Rank values are 1-based, a permutation of {1,...,n}.
struct RankPairs {
    std::size_t n = 0;
    std::vector<std::pair<int, int>> pairs;
};

}  // namespace depfn
