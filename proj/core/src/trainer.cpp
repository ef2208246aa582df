#include "pmivec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "pmivec/losses.hpp"

namespace pmivec::trainer {

namespace {

constexpr double kAdagradEps = 1e-8;
constexpr double kMinSelfPmiForLength = 1e-3;  // clamp floor for sqrt(PMI_ii) targets
constexpr double kMinLrFraction = 1e-4;        // floor of the SGD linear decay

} // namespace

LossVariant parse_variant(const std::string& name) {
    if (name == "D") return LossVariant::Dot;
    if (name == "L") return LossVariant::Length;
    if (name == "P") return LossVariant::Paired;
    if (name == "shifted") return LossVariant::Shifted;
    throw Error("unknown loss variant: " + name + " (expected D, L, P, or shifted)");
}

std::string variant_name(LossVariant v) {
    switch (v) {
        case LossVariant::Dot: return "D";
        case LossVariant::Length: return "L";
        case LossVariant::Paired: return "P";
        case LossVariant::Shifted: return "shifted";
    }
    return "?";
}

double TrainConfig::resolved_shift() const {
    if (shift) return *shift;
    if (negatives == 0) {
        throw Error("shifted variant with k=0 negatives needs an explicit shift");
    }
    return std::log(static_cast<double>(negatives));
}

void TrainConfig::validate() const {
    if (dim < 1) throw Error("train config: d must be >= 1");
    if (alpha1 < 0.0 || alpha2 < 0.0) throw Error("train config: alpha weights must be >= 0");
    if (!(learning_rate > 0.0)) throw Error("train config: learning rate must be > 0");
    if (mode == ParallelMode::Sharded && threads < 1) {
        throw Error("train config: sharded mode needs threads >= 1");
    }
    if (variant == LossVariant::Shifted) (void)resolved_shift();
}

PairSet observed_pairs(const cooccur::PmiMatrix& m) {
    PairSet set;
    set.n = m.n;
    set.keys.reserve(m.entries.size() * 2);
    for (const auto& e : m.entries) {
        set.keys.insert(cooccur::CooccurrenceStats::key(e.i, e.j));
    }
    return set;
}

void draw_negatives_into(Rng& rng, std::size_t n, std::size_t k, const PairSet& exclusion,
                         std::vector<corpus::IdPair>& out) {
    out.clear();
    const std::size_t max_attempts = 1000 * k;
    std::size_t attempts = 0;
    while (out.size() < k) {
        if (attempts++ >= max_attempts) {
            throw Error("draw_negatives: rejection cap hit (pair matrix too dense)");
        }
        const auto i = static_cast<std::uint32_t>(rng.below(n));
        const auto j = static_cast<std::uint32_t>(rng.below(n));
        if (i == j) continue;
        if (exclusion.contains(i, j)) continue;
        out.push_back({i, j});
    }
}

std::vector<corpus::IdPair> draw_negatives(Rng& rng, std::size_t n, std::size_t k,
                                           const PairSet& exclusion) {
    std::vector<corpus::IdPair> out;
    out.reserve(k);
    draw_negatives_into(rng, n, k, exclusion, out);
    return out;
}

namespace {

struct Updater {
    Optimizer optimizer;
    double base_lr;
    std::uint64_t total_updates;   // for the SGD linear decay
    std::uint64_t processed = 0;   // positive entries seen so far
    std::vector<double> acc_w;     // adagrad accumulators
    std::vector<double> acc_c;

    double current_lr() const {
        if (optimizer == Optimizer::Adagrad) return base_lr;
        const double frac =
            1.0 - static_cast<double>(processed) / static_cast<double>(total_updates);
        return base_lr * std::max(kMinLrFraction, frac);
    }

    void apply(std::span<double> x, std::span<double> acc, std::span<const double> g,
               double lr) {
        if (optimizer == Optimizer::Adagrad) {
            for (std::size_t k = 0; k < x.size(); ++k) {
                acc[k] += g[k] * g[k];
                x[k] -= lr * g[k] / (std::sqrt(acc[k]) + kAdagradEps);
            }
        } else {
            for (std::size_t k = 0; k < x.size(); ++k) x[k] -= lr * g[k];
        }
    }

    void apply_w(EmbeddingPair& emb, std::uint32_t col, std::span<const double> g, double lr) {
        apply(emb.w_col(col), {acc_w.data() + col * emb.d, emb.d}, g, lr);
    }
    void apply_c(EmbeddingPair& emb, std::uint32_t col, std::span<const double> g, double lr) {
        apply(emb.c_col(col), {acc_c.data() + col * emb.d, emb.d}, g, lr);
    }
};

struct EpochSums {
    double positive = 0.0;
    double negative = 0.0;
    std::uint64_t negatives_drawn = 0;
};

void check_finite(double loss, std::size_t epoch, std::uint32_t i, std::uint32_t j) {
    if (!std::isfinite(loss)) {
        throw Error("non-finite loss at epoch " + std::to_string(epoch) + ", entry (" +
                    std::to_string(i) + "," + std::to_string(j) + ")");
    }
}

/// Runs the positive update for one stored entry followed by its k negative
/// dot-residual updates. Gradient buffers are caller-owned scratch.
struct EntryWorker {
    const cooccur::PmiMatrix& pmi;
    const TrainConfig& config;
    EmbeddingPair& emb;
    Updater& updater;
    const PairSet& exclusion;
    double negative_target;
    double shift;
    std::span<const double> length_pmi;      // clamped self-PMI (Length variant)
    std::span<const double> entry_weight;    // empty unless count-weighted
    std::vector<double> gv, gvp, gvjp;
    std::vector<corpus::IdPair> negatives;   // reused draw buffer

    EntryWorker(const cooccur::PmiMatrix& pmi_, const TrainConfig& config_, EmbeddingPair& emb_,
                Updater& updater_, const PairSet& exclusion_, double negative_target_,
                double shift_, std::span<const double> length_pmi_,
                std::span<const double> entry_weight_)
        : pmi(pmi_), config(config_), emb(emb_), updater(updater_), exclusion(exclusion_),
          negative_target(negative_target_), shift(shift_), length_pmi(length_pmi_),
          entry_weight(entry_weight_), gv(emb_.d), gvp(emb_.d), gvjp(emb_.d) {}

    void scale_grads(double weight) {
        for (auto& g : gv) g *= weight;
        for (auto& g : gvp) g *= weight;
    }

    void process(std::size_t entry_idx, std::size_t epoch, Rng& rng, EpochSums& sums) {
        const auto& e = pmi.entries[entry_idx];
        const double lr = updater.current_lr();
        double loss = 0.0;

        switch (config.variant) {
            case LossVariant::Dot:
                loss = losses::loss_and_grad_dot(emb.w_col(e.i), emb.c_col(e.j), e.value, gv, gvp);
                break;
            case LossVariant::Shifted:
                loss = losses::loss_and_grad_shifted(emb.w_col(e.i), emb.c_col(e.j), e.value,
                                                     shift, gv, gvp);
                break;
            case LossVariant::Length:
                loss = losses::loss_and_grad_length(emb.w_col(e.i), emb.c_col(e.j), e.value,
                                                    length_pmi[e.i], length_pmi[e.j],
                                                    config.alpha1, config.alpha2, gv, gvp);
                break;
            case LossVariant::Paired:
                loss = losses::loss_and_grad_paired(emb.w_col(e.i), emb.c_col(e.i),
                                                    emb.c_col(e.j), e.value, pmi.self_pmi[e.i],
                                                    config.alpha1, config.alpha2, gv, gvp, gvjp);
                break;
        }
        check_finite(loss, epoch, e.i, e.j);
        sums.positive += loss;

        double weight = 1.0;
        if (!entry_weight.empty()) weight = entry_weight[entry_idx];

        if (config.variant == LossVariant::Paired) {
            if (weight != 1.0) {
                scale_grads(weight);
                for (auto& g : gvjp) g *= weight;
            }
            updater.apply_w(emb, e.i, gv, lr);
            if (e.i == e.j) {
                // Both context gradients land on the same column; combine
                // them into one optimizer step.
                for (std::size_t k = 0; k < emb.d; ++k) gvp[k] += gvjp[k];
                updater.apply_c(emb, e.i, gvp, lr);
            } else {
                updater.apply_c(emb, e.i, gvp, lr);
                updater.apply_c(emb, e.j, gvjp, lr);
            }
        } else {
            if (weight != 1.0) scale_grads(weight);
            updater.apply_w(emb, e.i, gv, lr);
            updater.apply_c(emb, e.j, gvp, lr);
        }

        if (config.negatives > 0) {
            draw_negatives_into(rng, pmi.n, config.negatives, exclusion, negatives);
            for (const auto& neg : negatives) {
                const double nloss = losses::dot_residual(emb.w_col(neg.target),
                                                          emb.c_col(neg.context),
                                                          negative_target, gv, gvp);
                check_finite(nloss, epoch, neg.target, neg.context);
                sums.negative += nloss;
                ++sums.negatives_drawn;
                updater.apply_w(emb, neg.target, gv, lr);
                updater.apply_c(emb, neg.context, gvp, lr);
            }
        }
        ++updater.processed;
    }
};

} // namespace

TrainResult train(const cooccur::PmiMatrix& pmi, const TrainConfig& config,
                  std::span<const std::uint64_t> entry_counts) {
    config.validate();
    if (pmi.n < 2) throw Error("train: vocabulary must have at least 2 words");
    if (pmi.entries.empty()) throw Error("train: PMI matrix has no stored entries");
    if (config.count_weighted && entry_counts.size() != pmi.entries.size()) {
        throw Error("train: count-weighted mode needs one count per stored entry");
    }

    TrainResult result;
    result.embeddings = init_embeddings(pmi.n, config.dim, config.seed);
    if (config.epochs == 0) return result;

    auto& emb = result.embeddings;
    const std::size_t nnz = pmi.entries.size();

    double tau = config.negative_target.fixed_value;
    if (config.negative_target.policy == NegativeTarget::Policy::MinStoredPmi) {
        tau = pmi.entries.front().value;
        for (const auto& e : pmi.entries) tau = std::min(tau, e.value);
    }
    result.negative_target = tau;

    const double shift =
        config.variant == LossVariant::Shifted ? config.resolved_shift() : 0.0;

    std::vector<double> length_pmi;
    if (config.variant == LossVariant::Length) {
        length_pmi.resize(pmi.n);
        for (std::size_t i = 0; i < pmi.n; ++i) {
            if (pmi.self_pmi[i] < kMinSelfPmiForLength) {
                length_pmi[i] = kMinSelfPmiForLength;
                ++result.clamped_length_targets;
            } else {
                length_pmi[i] = pmi.self_pmi[i];
            }
        }
    }

    std::vector<double> entry_weight;
    if (config.count_weighted) {
        const auto max_count = *std::max_element(entry_counts.begin(), entry_counts.end());
        entry_weight.resize(nnz);
        for (std::size_t e = 0; e < nnz; ++e) {
            entry_weight[e] =
                static_cast<double>(entry_counts[e]) / static_cast<double>(max_count);
        }
    }

    const PairSet exclusion = observed_pairs(pmi);

    Updater updater;
    updater.optimizer = config.optimizer;
    updater.base_lr = config.learning_rate;
    updater.total_updates = static_cast<std::uint64_t>(config.epochs) * nnz;
    if (config.optimizer == Optimizer::Adagrad) {
        updater.acc_w.assign(emb.d * emb.n, 0.0);
        updater.acc_c.assign(emb.d * emb.n, 0.0);
    }

    std::vector<std::size_t> order(nnz);
    std::iota(order.begin(), order.end(), 0);
    Rng master(config.seed + 0x632be59bd9b4e019ULL);

    const unsigned workers =
        config.mode == ParallelMode::Sharded ? std::max(1u, config.threads) : 1u;

    result.trace.reserve(config.epochs);
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        master.shuffle(std::span<std::size_t>(order));
        EpochSums sums;

        if (workers == 1) {
            EntryWorker worker(pmi, config, emb, updater, exclusion, tau, shift, length_pmi,
                               entry_weight);
            for (const auto entry_idx : order) {
                worker.process(entry_idx, epoch, master, sums);
            }
        } else {
            // Lock-free sharded pass: workers update the shared matrices
            // without synchronization, so results are nondeterministic.
            std::vector<EpochSums> shard_sums(workers);
            std::vector<std::exception_ptr> shard_errors(workers);
            std::vector<std::thread> pool;
            const std::size_t chunk = (nnz + workers - 1) / workers;
            for (unsigned s = 0; s < workers; ++s) {
                pool.emplace_back([&, s] {
                    try {
                        Rng rng(config.seed ^ (0x9e3779b97f4a7c15ULL * (s + 1)) ^ epoch);
                        EntryWorker worker(pmi, config, emb, updater, exclusion, tau, shift,
                                           length_pmi, entry_weight);
                        const std::size_t lo = std::min(s * chunk, nnz);
                        const std::size_t hi = std::min(lo + chunk, nnz);
                        for (std::size_t r = lo; r < hi; ++r) {
                            worker.process(order[r], epoch, rng, shard_sums[s]);
                        }
                    } catch (...) {
                        shard_errors[s] = std::current_exception();
                    }
                });
            }
            for (auto& t : pool) t.join();
            for (const auto& err : shard_errors) {
                if (err) std::rethrow_exception(err);
            }
            for (const auto& s : shard_sums) {
                sums.positive += s.positive;
                sums.negative += s.negative;
                sums.negatives_drawn += s.negatives_drawn;
            }
        }

        EpochLoss el;
        el.mean_positive = sums.positive / static_cast<double>(nnz);
        el.mean_negative = sums.negatives_drawn == 0
                               ? 0.0
                               : sums.negative / static_cast<double>(sums.negatives_drawn);
        result.trace.push_back(el);

        for (const auto v : emb.w) {
            if (!std::isfinite(v)) throw Error("non-finite embedding after epoch " +
                                               std::to_string(epoch));
        }
        for (const auto v : emb.c) {
            if (!std::isfinite(v)) throw Error("non-finite embedding after epoch " +
                                               std::to_string(epoch));
        }
    }
    return result;
}

void save_loss_trace(const std::vector<EpochLoss>& trace, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write loss trace: " + path.string());
    out << "epoch,mean_positive_loss,mean_negative_loss\n";
    for (std::size_t e = 0; e < trace.size(); ++e) {
        out << e << ',' << format_full(trace[e].mean_positive) << ','
            << format_full(trace[e].mean_negative) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace pmivec::trainer
