#pragma once

#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "pmivec/error.hpp"

namespace pmivec::corpus {

/// Lowercased whitespace-split tokens. Tokens containing invalid UTF-8 byte
/// sequences are skipped and tallied in invalid_skipped (replacement policy:
/// drop the whole token, never emit partial bytes).
struct TokenizedText {
    std::vector<std::string> tokens;
    std::uint64_t invalid_skipped = 0;
};

TokenizedText tokenize(std::istream& in);
TokenizedText tokenize(std::string_view text);

/// Word <-> id map with per-word counts, built after the min-count filter.
/// Ids are assigned by descending count, ties broken lexicographically.
struct Vocabulary {
    std::vector<std::string> words;                      // id -> word
    std::vector<std::uint64_t> counts;                   // id -> count (pre-subsample)
    std::unordered_map<std::string, std::uint32_t> index;
    std::uint64_t total_tokens = 0;                      // retained-word occurrences

    std::size_t size() const { return words.size(); }
    std::optional<std::uint32_t> id_of(std::string_view word) const;
};

Vocabulary build_vocab(const std::vector<std::string>& tokens, std::uint64_t min_count);
Vocabulary build_vocab(const std::unordered_map<std::string, std::uint64_t>& raw_counts,
                       std::uint64_t min_count);

/// Token-id sequence in corpus order.
struct TokenStream {
    std::vector<std::uint32_t> ids;
};

/// Frequency subsampling: a token of corpus frequency f = count/total_tokens
/// is discarded with probability max(0, 1 - sqrt(threshold/f)). Out-of-vocabulary
/// tokens are always discarded. One uniform draw is consumed per in-vocabulary
/// token so the retained stream is a pure function of (tokens, vocab, threshold, seed).
TokenStream subsample(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                      double threshold, std::uint64_t seed);

struct IdPair {
    std::uint32_t target;
    std::uint32_t context;
    friend bool operator==(const IdPair&, const IdPair&) = default;
};

/// Visits (ids[p], ids[q]) for every position p and every q != p with
/// |q - p| <= window, clipped at the stream boundaries. Fixed window,
/// no random shrinking.
template <class F>
void for_each_pair(std::span<const std::uint32_t> ids, std::uint32_t window, F&& fn) {
    if (window < 1) throw Error("pair window must be >= 1");
    const std::size_t len = ids.size();
    for (std::size_t p = 0; p < len; ++p) {
        const std::size_t lo = p > window ? p - window : 0;
        const std::size_t hi = std::min(len - 1, p + window);
        for (std::size_t q = lo; q <= hi; ++q) {
            if (q == p) continue;
            fn(ids[p], ids[q]);
        }
    }
}

/// Same visit order, restricted to target positions in [begin, end). Context
/// still reaches across the range edges, so sharded counting over disjoint
/// position ranges sums to the whole-stream counts.
template <class F>
void for_each_pair_range(std::span<const std::uint32_t> ids, std::uint32_t window,
                         std::size_t begin, std::size_t end, F&& fn) {
    if (window < 1) throw Error("pair window must be >= 1");
    const std::size_t len = ids.size();
    end = std::min(end, len);
    for (std::size_t p = begin; p < end; ++p) {
        const std::size_t lo = p > window ? p - window : 0;
        const std::size_t hi = std::min(len - 1, p + window);
        for (std::size_t q = lo; q <= hi; ++q) {
            if (q == p) continue;
            fn(ids[p], ids[q]);
        }
    }
}

/// Materialized pair stream; intended for small inputs and tests.
std::vector<IdPair> pair_stream(std::span<const std::uint32_t> ids, std::uint32_t window);

/// Vocabulary file: one-line header "#tokens=<total_tokens>", then
/// "word<TAB>count" per line in id order.
void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocabulary(const std::filesystem::path& path);

} // namespace pmivec::corpus
