#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "pmivec/error.hpp"

namespace pmivec {

/// Target matrix W and context matrix C, both d x n, stored column-major so
/// a word's vector is contiguous. Column i of each matrix belongs to word id i.
struct EmbeddingPair {
    std::size_t d = 0;
    std::size_t n = 0;
    std::vector<double> w;
    std::vector<double> c;

    std::span<double> w_col(std::size_t i) { return {w.data() + i * d, d}; }
    std::span<double> c_col(std::size_t i) { return {c.data() + i * d, d}; }
    std::span<const double> w_col(std::size_t i) const { return {w.data() + i * d, d}; }
    std::span<const double> c_col(std::size_t i) const { return {c.data() + i * d, d}; }
};

/// Entries i.i.d. uniform on [-0.5/d, +0.5/d]; W filled column by column, then C.
EmbeddingPair init_embeddings(std::size_t n, std::size_t d, std::uint64_t seed);

/// Loaded word-vector table (one matrix plus the word list from the file).
struct EmbeddingTable {
    std::size_t d = 0;
    std::size_t n = 0;
    std::vector<std::string> words;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<double> vectors;  // column-major d x n

    std::span<const double> col(std::size_t i) const { return {vectors.data() + i * d, d}; }
    bool contains(const std::string& word) const { return index.count(word) != 0; }
};

/// word2vec text format: first line "n d", then "word v1 ... vd" per line,
/// full-precision decimal (round-trips bit-exactly).
void save_word2vec(const std::filesystem::path& path, const std::vector<std::string>& words,
                   std::span<const double> colmajor, std::size_t d);
EmbeddingTable load_word2vec(const std::filesystem::path& path);

/// "%.17g" formatting used by every text export so written doubles round-trip.
std::string format_full(double v);

} // namespace pmivec
