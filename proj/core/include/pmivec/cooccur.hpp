#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "pmivec/corpus.hpp"

namespace pmivec::cooccur {

/// Sparse ordered-pair counts (target then context) with marginals.
struct CooccurrenceStats {
    std::size_t n = 0;
    std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
    std::vector<std::uint64_t> target_counts;
    std::vector<std::uint64_t> context_counts;
    std::uint64_t total_pairs = 0;

    static std::uint64_t key(std::uint32_t i, std::uint32_t j) {
        return (static_cast<std::uint64_t>(i) << 32) | j;
    }

    std::uint64_t count(std::uint32_t i, std::uint32_t j) const {
        auto it = pair_counts.find(key(i, j));
        return it == pair_counts.end() ? 0 : it->second;
    }

    void add(std::uint32_t i, std::uint32_t j, std::uint64_t c = 1);
};

CooccurrenceStats count_pairs(std::size_t n, std::span<const corpus::IdPair> pairs);

/// Streams the window pairs directly into counts; with threads > 1 the stream
/// is sharded by target position and the shard counts are merged (counts are
/// identical for any thread count).
CooccurrenceStats count_pairs(std::size_t n, std::span<const std::uint32_t> ids,
                              std::uint32_t window, unsigned threads = 1);

/// Shard merge by summation; associative and commutative.
void merge(CooccurrenceStats& into, const CooccurrenceStats& from);

/// PMI(i,j) = log( p(i,j) / (p_t(i) p_c(j)) ) from maximum-likelihood count
/// ratios; absent when the pair was never observed.
std::optional<double> pmi(const CooccurrenceStats& stats, std::uint32_t i, std::uint32_t j);

/// Self-PMI for every id. Words that never co-occur with themselves get a
/// substituted joint probability (2/3) * p_min, where p_min is the smallest
/// observed self-joint probability; those ids are flagged.
struct SelfPmi {
    std::vector<double> value;
    std::vector<std::uint8_t> filled;
    std::vector<double> joint_prob;  // observed or substituted p(w_i, w_i')
    double p_min = 0.0;
};

SelfPmi self_pmi_fill(const CooccurrenceStats& stats);

struct PmiEntry {
    std::uint32_t i;
    std::uint32_t j;
    double value;
};

/// Frozen sparse PMI matrix: entries sorted by (i, j) for cache-friendly
/// training passes, immutable after construction.
struct PmiMatrix {
    std::size_t n = 0;
    std::vector<PmiEntry> entries;
    std::vector<double> self_pmi;
    std::vector<std::uint8_t> self_filled;

    std::optional<double> value(std::uint32_t i, std::uint32_t j) const;
};

PmiMatrix build_pmi_matrix(const CooccurrenceStats& stats);

/// Fraction of ids whose *observed* self-PMI is positive (filled ids excluded).
double positive_self_pmi_fraction(const PmiMatrix& m);

/// Binary format "PMI1", little-endian: {magic, n: u64, nnz: u64}, nnz records
/// {i: u32, j: u32, pmi: f64}, then n records {self_pmi: f64, filled: u8}.
void save_pmi(const PmiMatrix& m, const std::filesystem::path& path);
PmiMatrix load_pmi(const std::filesystem::path& path);

/// Debug export, one "i<TAB>j<TAB>pmi" line per entry.
void export_pmi_tsv(const PmiMatrix& m, const std::filesystem::path& path);

/// Binary format "COO1", little-endian: {magic, n: u64, nnz: u64,
/// total_pairs: u64}, nnz records {i: u32, j: u32, count: u64}, then the
/// target and context marginals as u64[n] each.
void save_counts(const CooccurrenceStats& stats, const std::filesystem::path& path);
CooccurrenceStats load_counts(const std::filesystem::path& path);

} // namespace pmivec::cooccur
