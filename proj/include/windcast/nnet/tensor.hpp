#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#include "windcast/common.hpp"

namespace windcast::nnet {

// Rank-3 row-major array: (batch, length, channels). Every activation in
// the engine has this shape; vector inputs ride along as length 1.
struct Array3 {
    int b = 0, l = 0, c = 0;
    std::vector<double> v;

    Array3() = default;
    Array3(int b_, int l_, int c_) { resize(b_, l_, c_); }

    void resize(int b_, int l_, int c_) {
        b = b_;
        l = l_;
        c = c_;
        v.assign(static_cast<std::size_t>(b) * static_cast<std::size_t>(l) *
                     static_cast<std::size_t>(c),
                 0.0);
    }

    void zero() { std::fill(v.begin(), v.end(), 0.0); }

    double& at(int i, int j, int k) {
        return v[(static_cast<std::size_t>(i) * static_cast<std::size_t>(l) +
                  static_cast<std::size_t>(j)) *
                     static_cast<std::size_t>(c) +
                 static_cast<std::size_t>(k)];
    }
    double at(int i, int j, int k) const {
        return v[(static_cast<std::size_t>(i) * static_cast<std::size_t>(l) +
                  static_cast<std::size_t>(j)) *
                     static_cast<std::size_t>(c) +
                 static_cast<std::size_t>(k)];
    }

    double* row(int i, int j) { return &at(i, j, 0); }
    const double* row(int i, int j) const {
        return &v[(static_cast<std::size_t>(i) * static_cast<std::size_t>(l) +
                   static_cast<std::size_t>(j)) *
                  static_cast<std::size_t>(c)];
    }

    std::size_t size() const { return v.size(); }
};

// Per-sample shape; the batch dimension is supplied at call time.
struct Shape {
    int l = 0;
    int c = 0;

    bool operator==(const Shape&) const = default;
};

}  // namespace windcast::nnet
