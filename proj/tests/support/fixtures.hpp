// Shared synthetic inputs for the test suites.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pmivec/cooccur.hpp"
#include "pmivec/embedding.hpp"
#include "pmivec/rng.hpp"

namespace fixtures {

/// Uniform random id stream over an n-symbol alphabet.
inline std::vector<std::uint32_t> random_id_stream(std::size_t n, std::size_t length,
                                                   std::uint64_t seed) {
    pmivec::Rng rng(seed);
    std::vector<std::uint32_t> ids(length);
    for (auto& id : ids) id = static_cast<std::uint32_t>(rng.below(n));
    return ids;
}

inline std::vector<std::string> ids_to_words(const std::vector<std::uint32_t>& ids) {
    std::vector<std::string> words;
    words.reserve(ids.size());
    for (const auto id : ids) words.push_back("w" + std::to_string(id));
    return words;
}

/// The exact-factorization oracle instance: n=20 alphabet, 1e4 tokens,
/// window 2. With d >= n the resulting PMI matrix factorizes exactly. Note
/// that this instance observes every non-self pair, so it admits no negative
/// samples; train it with k=0.
inline pmivec::cooccur::CooccurrenceStats oracle_stats(std::uint64_t seed = 7) {
    const auto ids = random_id_stream(20, 10000, seed);
    return pmivec::cooccur::count_pairs(20, ids, 2);
}

/// A sparse instance (roughly half of the non-self pairs unobserved) for
/// tests that exercise negative sampling.
inline pmivec::cooccur::CooccurrenceStats sparse_stats(std::uint64_t seed = 7) {
    const auto ids = random_id_stream(150, 4000, seed);
    return pmivec::cooccur::count_pairs(150, ids, 2);
}

/// A stream whose words come in strongly correlated 2-word groups (bursts
/// alternate within a group). Self-PMI and within-group cross-PMI are both
/// large and positive, so length/angle geometry is non-degenerate.
inline pmivec::cooccur::CooccurrenceStats grouped_stats(std::uint64_t seed = 7) {
    pmivec::Rng rng(seed);
    const std::size_t groups = 15;
    std::vector<std::uint32_t> ids(3000);
    std::uint32_t group = static_cast<std::uint32_t>(rng.below(groups));
    for (std::size_t k = 0; k < ids.size(); ++k) {
        if (k > 0 && rng.uniform() >= 0.7) group = static_cast<std::uint32_t>(rng.below(groups));
        ids[k] = 2 * group + static_cast<std::uint32_t>(rng.below(2));
    }
    return pmivec::cooccur::count_pairs(2 * groups, ids, 2);
}

/// Embeddings with w_i.c_j equal to the stored PMI entries exactly (and to
/// self-PMI on the diagonal), built by eigendecomposition of the dense
/// symmetric matrix. Independent of the gradient-descent trainer.
inline pmivec::EmbeddingPair exact_embeddings(const pmivec::cooccur::PmiMatrix& m) {
    const auto n = static_cast<Eigen::Index>(m.n);
    Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(n, n);
    for (const auto& e : m.entries) dense(e.i, e.j) = e.value;
    for (Eigen::Index i = 0; i < n; ++i) dense(i, i) = m.self_pmi[i];

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(dense);
    const Eigen::VectorXd lambda = solver.eigenvalues();
    const Eigen::MatrixXd q = solver.eigenvectors();

    // dense = Q diag(lambda) Q^T = W^T C with
    //   W = sqrt(|lambda|) Q^T,  C = sign(lambda) sqrt(|lambda|) Q^T.
    Eigen::MatrixXd w(n, n), c(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const double root = std::sqrt(std::abs(lambda(r)));
        const double sign = lambda(r) < 0.0 ? -1.0 : 1.0;
        for (Eigen::Index i = 0; i < n; ++i) {
            w(r, i) = root * q(i, r);
            c(r, i) = sign * root * q(i, r);
        }
    }

    pmivec::EmbeddingPair pair;
    pair.d = m.n;
    pair.n = m.n;
    pair.w.resize(m.n * m.n);
    pair.c.resize(m.n * m.n);
    for (std::size_t col = 0; col < m.n; ++col) {
        for (std::size_t row = 0; row < m.n; ++row) {
            pair.w[col * m.n + row] = w(static_cast<Eigen::Index>(row),
                                        static_cast<Eigen::Index>(col));
            pair.c[col * m.n + row] = c(static_cast<Eigen::Index>(row),
                                        static_cast<Eigen::Index>(col));
        }
    }
    return pair;
}

inline pmivec::EmbeddingPair random_pair(std::size_t n, std::size_t d, std::uint64_t seed,
                                         double scale = 1.0) {
    pmivec::Rng rng(seed);
    pmivec::EmbeddingPair pair;
    pair.d = d;
    pair.n = n;
    pair.w.resize(d * n);
    pair.c.resize(d * n);
    for (auto& v : pair.w) v = rng.uniform(-scale, scale);
    for (auto& v : pair.c) v = rng.uniform(-scale, scale);
    return pair;
}

} // namespace fixtures
