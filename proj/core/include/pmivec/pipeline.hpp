#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "pmivec/contours.hpp"
#include "pmivec/trainer.hpp"

namespace pmivec::pipeline {

/// File-to-file stage runners shared by the CLI and the end-to-end tests.
/// Every stage writes its outputs and a JSON run manifest recording the
/// resolved configuration, seeds, and input/output digests.

struct VocabParams {
    std::filesystem::path corpus;
    std::uint64_t min_count = 5;
    std::filesystem::path out;
};

void run_vocab(const VocabParams& p);

struct CooccurParams {
    std::filesystem::path corpus;
    std::filesystem::path vocab;
    std::uint32_t window = 10;
    double subsample_t = 1e-4;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::filesystem::path out_pmi;
    std::filesystem::path out_counts;  // empty -> out_pmi with .counts extension
    std::filesystem::path out_tsv;     // optional debug export
};

void run_cooccur(const CooccurParams& p);

struct TrainParams {
    std::filesystem::path pmi;
    trainer::TrainConfig config;
    std::filesystem::path vocab;               // word list for the embedding files
    std::filesystem::path counts;              // required only for count_weighted
    std::filesystem::path out_dir;             // receives W.txt, C.txt, A.txt, loss.csv, manifest.json
};

void run_train(const TrainParams& p);

struct EvalParams {
    std::filesystem::path vectors;   // word2vec text file (W.txt or A.txt)
    std::string vectors_used = "W";  // label recorded in the report
    std::string task = "similarity"; // similarity | analogy
    std::filesystem::path dataset;
    std::string subset = "ALL";
    std::string format = "tsv";      // tsv | csv (similarity only)
    std::string method = "norm";     // norm | cosine (analogy only)
    std::filesystem::path out;       // JSON report
};

void run_eval(const EvalParams& p);

struct GeometryParams {
    std::filesystem::path w_file;
    std::filesystem::path c_file;
    std::filesystem::path pmi;
    std::filesystem::path counts;    // optional; enables the stats-based residual checks
    std::size_t pair_sample = 500;
    std::uint64_t seed = 1;
    std::filesystem::path out_json;
    std::filesystem::path out_csv;   // optional
};

void run_geometry(const GeometryParams& p);

struct ContoursParams {
    std::filesystem::path w_file;
    std::filesystem::path c_file;
    std::filesystem::path counts;
    std::string context_word;
    contours::ConditionalKind kind = contours::ConditionalKind::ContextGivenTarget;
    contours::BucketSpec buckets;
    std::filesystem::path out_csv;
    std::filesystem::path out_svg;   // optional; render failure never fails the export
};

void run_contours(const ContoursParams& p);

/// Copies the first max_tokens whitespace-separated tokens of src to dst
/// (line breaks normalized); errors if src has fewer tokens.
void write_token_prefix(const std::filesystem::path& src, const std::filesystem::path& dst,
                        std::size_t max_tokens);

} // namespace pmivec::pipeline
