#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pmivec/cooccur.hpp"
#include "pmivec/embedding.hpp"

namespace pmivec::geometry {

/// A = (W + C)/2 and B = (W - C)/2, the symmetric and antisymmetric halves of
/// the embedding pair. W = A + B and C = A - B reconstruct exactly, and
/// w_i.c_i = ||a_i||^2 - ||b_i||^2 for every column.
struct ConjugateDecomposition {
    std::size_t d = 0;
    std::size_t n = 0;
    std::vector<double> a;
    std::vector<double> b;

    std::span<const double> a_col(std::size_t i) const { return {a.data() + i * d, d}; }
    std::span<const double> b_col(std::size_t i) const { return {b.data() + i * d, d}; }
};

ConjugateDecomposition decompose(const EmbeddingPair& pair);
EmbeddingPair recompose(const ConjugateDecomposition& dec);

struct WordGeometry {
    double internal_angle = 0.0;  // angle between v_i and v_i', radians in [0, pi]
    double norm_w = 0.0;
    double norm_c = 0.0;
    double min_length = 0.0;      // sqrt(max(self_pmi, 0))
    bool min_length_clamped = false;
    double self_dot = 0.0;        // v_i . v_i'
    double self_pmi = 0.0;
};

/// Throws when either vector has zero norm (angle undefined).
WordGeometry word_geometry(const EmbeddingPair& pair, double self_pmi_i, std::uint32_t i);

/// Quadratic height of the out-of-subspace component when placing a vector
/// pair of minimum length d_i over a best-fit in-subspace vector of norm
/// s_norm: real h = sqrt(d^2 - s^2) when the pair is propped up, imaginary
/// magnitude b = sqrt(s^2 - d^2) when it must split.
struct SplitHeight {
    bool is_real = true;
    double value = 0.0;
};

SplitHeight split_height(double d_i, double s_norm);

struct ResidualSummary {
    std::size_t count = 0;
    double mean_abs = 0.0;
    double max_abs = 0.0;
    double mean = 0.0;
    double stddev = 0.0;
};

ResidualSummary summarize(std::span<const double> residuals);

/// Residuals of the marginal and joint log-probability identities implied by
/// an exact PMI factorization:
///   per word:  log p(w_i) - ( -v_i.v_i'/2 + log p(w_i,w_i')/2 )
///   per pair:  log p(w_i,w_j') - ( -(v_i-v_j).(v_i'-v_j')/2 + log(p_ii p_jj)/2 )
/// Self-joint probabilities use the observed value or the 2/3*p_min fill.
struct LogIdentityResiduals {
    ResidualSummary marginal;   // per-word identity
    ResidualSummary joint;      // per-sampled-pair identity
    std::size_t skipped_words = 0;  // zero marginal count, no defined residual
};

LogIdentityResiduals log_identity_residuals(const EmbeddingPair& pair,
                                        const cooccur::CooccurrenceStats& stats,
                                        std::size_t pair_sample, std::uint64_t seed);

/// Relative residuals of the exponentiated identities
///   exp(-v_i.v_i'/2)            vs p(w_i)/sqrt(p(w_i,w_i'))
///   exp(-(vi-vj).(vi'-vj')/2)   vs p(w_i,w_j')/sqrt(p_ii p_jj)
/// evaluated in the linear domain.
struct QuasiSphereResiduals {
    ResidualSummary marginal;
    ResidualSummary joint;
    std::size_t skipped_words = 0;
};

QuasiSphereResiduals quasi_sphere_check(const EmbeddingPair& pair,
                                        const cooccur::CooccurrenceStats& stats,
                                        std::size_t pair_sample, std::uint64_t seed);

/// Per-word diagnostics for the report writers.
struct GeometryReport {
    std::vector<WordGeometry> words;
    std::vector<double> conjugate_residual;  // |w.c - (||a||^2 - ||b||^2)|
    std::vector<SplitHeight> split;          // split_height(d_i, ||a_i||)
    std::size_t zero_norm_words = 0;         // skipped (undefined angle)
    std::vector<std::uint8_t> defined;       // 1 when words[i] is meaningful
};

GeometryReport build_report(const EmbeddingPair& pair, std::span<const double> self_pmi);

/// CSV "word,norm_w,norm_c,internal_angle,min_length,self_pmi" in id order.
void write_geometry_csv(const GeometryReport& report, const std::vector<std::string>& words,
                        const std::filesystem::path& path);

} // namespace pmivec::geometry
