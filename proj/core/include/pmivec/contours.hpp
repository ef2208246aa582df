#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pmivec/cooccur.hpp"
#include "pmivec/embedding.hpp"

namespace pmivec::contours {

struct ContourPoint {
    std::uint32_t id = 0;
    double x = 0.0;  // ||v_i|| cos(theta_ij), projection onto v_j'
    double y = 0.0;  // ||v_i|| sin(theta_ij), upper half-plane
};

/// All target words positioned relative to one context word: angle to v_j'
/// and norm preserved, collapsed into the upper half-plane. The context
/// word's own marker sits at (||v_j'||, 0).
struct ContourProjection {
    std::uint32_t context = 0;
    double context_norm = 0.0;
    std::vector<ContourPoint> points;
    std::size_t skipped_zero_norm = 0;
};

ContourProjection project_relative(const EmbeddingPair& pair, std::uint32_t context);

enum class ConditionalKind {
    ContextGivenTarget,  // p(w_j' | w_i) = count(i,j) / target_counts(i)
    TargetGivenContext,  // p(w_i | w_j') = count(i,j) / context_counts(j)
};

ConditionalKind parse_kind(const std::string& name);  // "context_given_target" | "target_given_context"

struct BucketSpec {
    std::vector<double> centers;
    double half_width = 0.4;
};

/// Word i joins bucket c iff |log p_hat - c| <= half_width (boundary
/// inclusive). Words with zero joint count stay unbucketed; buckets overlap
/// when centers sit closer than 2*half_width, which is flagged.
struct Buckets {
    std::vector<std::vector<std::uint32_t>> members;  // per center, ids ascending
    std::vector<double> log_prob;                     // per id; NaN when undefined
    std::vector<double> centers;
    bool overlapping = false;
};

Buckets bucket_by_logprob(const cooccur::CooccurrenceStats& stats, ConditionalKind kind,
                          std::uint32_t context, const BucketSpec& spec);

/// CSV "word,x,y,bucket,log_prob": one row per (bucketed word, bucket), rows
/// ordered by id then bucket; values full precision.
void export_contour_csv(const ContourProjection& projection, const Buckets& buckets,
                        const std::vector<std::string>& words,
                        const std::filesystem::path& path);

/// Static scatter plot of the bucketed cloud (SVG). Throws on I/O failure;
/// callers treat rendering as best-effort.
void render_contour_svg(const ContourProjection& projection, const Buckets& buckets,
                        const std::vector<std::string>& words,
                        const std::filesystem::path& path);

/// Quantified contour diagnostics for p(w_j'|w_i) buckets: x-statistics per
/// bucket, whether the per-bucket mean x increases with the bucket center,
/// and how within-bucket spread compares to the spread of bucket means.
struct BucketXStats {
    std::vector<std::size_t> count;   // projectable members per bucket
    std::vector<double> mean_x;
    std::vector<double> stddev_x;
    bool means_monotone = false;      // mean x strictly increases with center order
    double mean_within_stddev = 0.0;
    double between_center_spread = 0.0;  // stddev of the bucket means
};

BucketXStats bucket_x_stats(const ContourProjection& projection, const Buckets& buckets);

} // namespace pmivec::contours
