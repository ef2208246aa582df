#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "pmivec/embedding.hpp"
#include "pmivec/error.hpp"

namespace pmivec::eval {

struct SimilarityPair {
    std::string word1;
    std::string word2;
    double score = 0.0;
};

struct SimilarityDataset {
    std::vector<SimilarityPair> pairs;
    std::string subset = "ALL";  // ALL | SIM | REL
};

enum class SimilarityFormat { Tsv, Csv };

/// TSV "word1<TAB>word2<TAB>score" (optional header) or the WordSim353
/// comma-separated layout. Words are lowercased to match corpus
/// normalization; duplicate unordered pairs and malformed lines raise an
/// error naming the line.
SimilarityDataset load_similarity(const std::filesystem::path& path, SimilarityFormat format,
                                  const std::string& subset = "ALL");

struct AnalogyQuestion {
    std::string a;
    std::string b;
    std::string c;
    std::string answer;
    std::string category;
};

struct AnalogyDataset {
    std::vector<AnalogyQuestion> questions;
};

/// questions-words text format: ": <category>" lines start sections, data
/// lines are four whitespace-separated words (lowercased on load).
AnalogyDataset load_analogy(const std::filesystem::path& path);

/// u.v / (||u|| ||v||), clamped to [-1, 1]; throws on a zero vector.
double cosine(std::span<const double> u, std::span<const double> v);

/// Spearman rank correlation with average ranks for ties (Pearson correlation
/// of the two rank vectors). Throws when either list has zero rank variance.
double spearman_rho(std::span<const double> a, std::span<const double> b);

struct SimilarityResult {
    double rho = 0.0;
    std::size_t scored = 0;
    std::size_t skipped = 0;  // pairs with an out-of-vocabulary word
};

SimilarityResult evaluate_similarity(const EmbeddingTable& table,
                                     const SimilarityDataset& dataset);

enum class AnalogyMethod {
    NormArgmin,  // argmin_d ||v_a - v_b - v_c + v_d||, the reference protocol
    CosAdd,      // cosine 3CosAdd, comparison only
};

struct AnalogyResult {
    double accuracy = 0.0;
    std::size_t scored = 0;
    std::size_t skipped = 0;  // questions with an out-of-vocabulary word
    std::size_t correct = 0;
};

/// Candidates are the full vocabulary minus the three question words.
AnalogyResult evaluate_analogy(const EmbeddingTable& table, const AnalogyDataset& dataset,
                               AnalogyMethod method = AnalogyMethod::NormArgmin);

} // namespace pmivec::eval
