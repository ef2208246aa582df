#pragma once

#include <cmath>
#include <span>

namespace pmivec {

inline double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k] * b[k];
    return s;
}

inline double norm(std::span<const double> a) { return std::sqrt(dot(a, a)); }

inline void axpy(double alpha, std::span<const double> x, std::span<double> y) {
    for (std::size_t k = 0; k < x.size(); ++k) y[k] += alpha * x[k];
}

inline void fill_zero(std::span<double> a) {
    for (auto& v : a) v = 0.0;
}

} // namespace pmivec
