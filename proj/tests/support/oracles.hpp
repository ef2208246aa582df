// Independent reference implementations used only to check the library:
// brute-force counters, finite differences, quantile approximations. None of
// these share code with the implementation paths they verify.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <vector>

#include "pmivec/rng.hpp"

namespace oracles {

/// Quadratic window-pair enumeration over a token stream.
inline std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t>
brute_force_pairs(std::span<const std::uint32_t> ids, std::uint32_t window) {
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> counts;
    const auto len = static_cast<std::ptrdiff_t>(ids.size());
    for (std::ptrdiff_t p = 0; p < len; ++p) {
        for (std::ptrdiff_t q = 0; q < len; ++q) {
            if (p == q) continue;
            if (std::abs(p - q) > static_cast<std::ptrdiff_t>(window)) continue;
            ++counts[{ids[p], ids[q]}];
        }
    }
    return counts;
}

/// Spearman correlation the slow way: average ranks computed by counting
/// smaller/equal values (O(n^2)), then the textbook Pearson form.
inline double brute_force_spearman(std::span<const double> a, std::span<const double> b) {
    const std::size_t n = a.size();
    auto ranks = [n](std::span<const double> v) {
        std::vector<double> r(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::size_t less = 0, equal = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (v[j] < v[i]) ++less;
                if (v[j] == v[i]) ++equal;
            }
            r[i] = static_cast<double>(less) + 0.5 * static_cast<double>(equal + 1);
        }
        return r;
    };
    const auto ra = ranks(a);
    const auto rb = ranks(b);
    double ma = 0.0, mb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        ma += ra[i];
        mb += rb[i];
    }
    ma /= static_cast<double>(n);
    mb /= static_cast<double>(n);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        cov += (ra[i] - ma) * (rb[i] - mb);
        va += (ra[i] - ma) * (ra[i] - ma);
        vb += (rb[i] - mb) * (rb[i] - mb);
    }
    return cov / std::sqrt(va * vb);
}

/// Central finite differences of a scalar function over a flat parameter
/// vector; h = 1e-6 matches the gradient acceptance gate.
inline std::vector<double> finite_difference_grad(
    const std::function<double(std::span<const double>)>& f, std::vector<double> x,
    double h = 1e-6) {
    std::vector<double> grad(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const double saved = x[k];
        x[k] = saved + h;
        const double up = f(x);
        x[k] = saved - h;
        const double down = f(x);
        x[k] = saved;
        grad[k] = (up - down) / (2.0 * h);
    }
    return grad;
}

inline double relative_error(std::span<const double> got, std::span<const double> want) {
    double diff = 0.0, ref = 0.0;
    for (std::size_t k = 0; k < got.size(); ++k) {
        diff += (got[k] - want[k]) * (got[k] - want[k]);
        ref += want[k] * want[k];
    }
    return std::sqrt(diff) / std::max(std::sqrt(ref), 1e-12);
}

/// Wilson-Hilferty approximation of the chi-square quantile; accurate to a
/// few percent for the large degrees of freedom used here.
inline double chi_square_quantile(double p, double df) {
    // z for p=0.99
    const double z = p >= 0.99 ? 2.3263478740408408 : 1.6448536269514722;
    const double a = 2.0 / (9.0 * df);
    const double c = 1.0 - a + z * std::sqrt(a);
    return df * c * c * c;
}

inline double gaussian(pmivec::Rng& rng) {
    const double u1 = 1.0 - rng.uniform();
    const double u2 = rng.uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

/// Random orthogonal d x d matrix (column-major) via Gram-Schmidt on a
/// gaussian matrix.
inline std::vector<double> random_orthogonal(std::size_t d, std::uint64_t seed) {
    pmivec::Rng rng(seed);
    std::vector<double> q(d * d);
    for (auto& v : q) v = gaussian(rng);
    for (std::size_t col = 0; col < d; ++col) {
        double* qc = q.data() + col * d;
        for (std::size_t prev = 0; prev < col; ++prev) {
            const double* qp = q.data() + prev * d;
            double proj = 0.0;
            for (std::size_t k = 0; k < d; ++k) proj += qc[k] * qp[k];
            for (std::size_t k = 0; k < d; ++k) qc[k] -= proj * qp[k];
        }
        double nrm = 0.0;
        for (std::size_t k = 0; k < d; ++k) nrm += qc[k] * qc[k];
        nrm = std::sqrt(nrm);
        for (std::size_t k = 0; k < d; ++k) qc[k] /= nrm;
    }
    return q;
}

inline std::vector<double> apply_matrix(std::span<const double> m, std::span<const double> v,
                                        std::size_t d) {
    std::vector<double> out(d, 0.0);
    for (std::size_t col = 0; col < d; ++col) {
        for (std::size_t row = 0; row < d; ++row) {
            out[row] += m[col * d + row] * v[col];
        }
    }
    return out;
}

} // namespace oracles
