#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <unordered_set>
#include <vector>

#include "pmivec/cooccur.hpp"
#include "pmivec/embedding.hpp"
#include "pmivec/rng.hpp"

namespace pmivec::trainer {

enum class LossVariant { Dot, Length, Paired, Shifted };
enum class Optimizer { Adagrad, Sgd };
enum class ParallelMode { Deterministic, Sharded };

LossVariant parse_variant(const std::string& name);  // "D" | "L" | "P" | "shifted"
std::string variant_name(LossVariant v);

struct NegativeTarget {
    enum class Policy { MinStoredPmi, Fixed };
    Policy policy = Policy::MinStoredPmi;
    double fixed_value = 0.0;
};

struct TrainConfig {
    LossVariant variant = LossVariant::Dot;
    std::size_t dim = 100;
    std::size_t epochs = 100;
    double learning_rate = 0.05;
    Optimizer optimizer = Optimizer::Adagrad;
    double alpha1 = 0.5;
    double alpha2 = 0.5;
    std::size_t negatives = 5;            // k negatives per positive pair
    std::optional<double> shift;          // shifted variant; unset -> log(negatives)
    NegativeTarget negative_target;
    std::uint64_t seed = 1;
    ParallelMode mode = ParallelMode::Deterministic;
    unsigned threads = 1;
    bool count_weighted = false;          // experimental; needs per-entry counts

    double resolved_shift() const;
    void validate() const;  // throws Error on out-of-range fields
};

struct EpochLoss {
    double mean_positive = 0.0;
    double mean_negative = 0.0;
};

struct TrainResult {
    EmbeddingPair embeddings;
    std::vector<EpochLoss> trace;
    double negative_target = 0.0;          // resolved tau
    std::size_t clamped_length_targets = 0;  // words whose sqrt(PMI_ii) target was clamped
};

/// Set of observed ordered pairs, used to exclude positives (and self pairs)
/// from negative draws.
struct PairSet {
    std::size_t n = 0;
    std::unordered_set<std::uint64_t> keys;
    bool contains(std::uint32_t i, std::uint32_t j) const {
        return keys.count(cooccur::CooccurrenceStats::key(i, j)) != 0;
    }
};

PairSet observed_pairs(const cooccur::PmiMatrix& m);

/// k ordered pairs uniform over {0..n-1}^2, rejecting observed pairs and
/// self pairs. The rejection loop is capped at 1000*k attempts. The _into
/// form reuses the caller's buffer (the training loop draws once per
/// positive entry).
std::vector<corpus::IdPair> draw_negatives(Rng& rng, std::size_t n, std::size_t k,
                                           const PairSet& exclusion);
void draw_negatives_into(Rng& rng, std::size_t n, std::size_t k, const PairSet& exclusion,
                         std::vector<corpus::IdPair>& out);

/// SGD/adagrad regression of W, C onto the stored PMI entries. Each epoch
/// visits every entry once in a seeded shuffled order; each positive update is
/// followed by its k negative dot-residual updates toward the resolved
/// negative target. Deterministic mode is a pure function of (pmi, config).
TrainResult train(const cooccur::PmiMatrix& pmi, const TrainConfig& config,
                  std::span<const std::uint64_t> entry_counts = {});

/// CSV "epoch,mean_positive_loss,mean_negative_loss".
void save_loss_trace(const std::vector<EpochLoss>& trace, const std::filesystem::path& path);

} // namespace pmivec::trainer
