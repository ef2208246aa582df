#include "pmivec/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

#include "pmivec/rng.hpp"
#include "pmivec/vecops.hpp"

namespace pmivec::geometry {

ConjugateDecomposition decompose(const EmbeddingPair& pair) {
    if (pair.w.size() != pair.c.size()) throw Error("decompose: shape mismatch");
    ConjugateDecomposition dec;
    dec.d = pair.d;
    dec.n = pair.n;
    dec.a.resize(pair.w.size());
    dec.b.resize(pair.w.size());
    for (std::size_t k = 0; k < pair.w.size(); ++k) {
        dec.a[k] = 0.5 * (pair.w[k] + pair.c[k]);
        dec.b[k] = 0.5 * (pair.w[k] - pair.c[k]);
    }
    return dec;
}

EmbeddingPair recompose(const ConjugateDecomposition& dec) {
    EmbeddingPair pair;
    pair.d = dec.d;
    pair.n = dec.n;
    pair.w.resize(dec.a.size());
    pair.c.resize(dec.a.size());
    for (std::size_t k = 0; k < dec.a.size(); ++k) {
        pair.w[k] = dec.a[k] + dec.b[k];
        pair.c[k] = dec.a[k] - dec.b[k];
    }
    return pair;
}

WordGeometry word_geometry(const EmbeddingPair& pair, double self_pmi_i, std::uint32_t i) {
    if (i >= pair.n) throw Error("word_geometry: id out of range");
    WordGeometry g;
    g.norm_w = norm(pair.w_col(i));
    g.norm_c = norm(pair.c_col(i));
    if (g.norm_w == 0.0 || g.norm_c == 0.0) {
        throw Error("word_geometry: zero-norm vector, internal angle undefined (id " +
                    std::to_string(i) + ")");
    }
    g.self_dot = dot(pair.w_col(i), pair.c_col(i));
    const double cosine = std::clamp(g.self_dot / (g.norm_w * g.norm_c), -1.0, 1.0);
    g.internal_angle = std::acos(cosine);
    g.self_pmi = self_pmi_i;
    if (self_pmi_i < 0.0) {
        g.min_length = 0.0;
        g.min_length_clamped = true;
    } else {
        g.min_length = std::sqrt(self_pmi_i);
    }
    return g;
}

SplitHeight split_height(double d_i, double s_norm) {
    if (d_i < 0.0 || s_norm < 0.0) throw Error("split_height: lengths must be >= 0");
    SplitHeight h;
    if (d_i >= s_norm) {
        h.is_real = true;
        h.value = std::sqrt(d_i * d_i - s_norm * s_norm);
    } else {
        h.is_real = false;
        h.value = std::sqrt(s_norm * s_norm - d_i * d_i);
    }
    return h;
}

ResidualSummary summarize(std::span<const double> residuals) {
    ResidualSummary s;
    s.count = residuals.size();
    if (residuals.empty()) return s;
    double sum = 0.0;
    for (const double r : residuals) {
        sum += r;
        s.mean_abs += std::abs(r);
        s.max_abs = std::max(s.max_abs, std::abs(r));
    }
    s.mean = sum / static_cast<double>(s.count);
    s.mean_abs /= static_cast<double>(s.count);
    double var = 0.0;
    for (const double r : residuals) var += (r - s.mean) * (r - s.mean);
    s.stddev = std::sqrt(var / static_cast<double>(s.count));
    return s;
}

namespace {

struct IdentityInputs {
    std::vector<double> self_joint;      // observed or filled p(w_i, w_i')
    std::vector<double> marginal;        // p(w_i) from target counts
    std::vector<corpus::IdPair> sample;  // sampled observed pairs (i != j allowed to repeat)
    double total = 0.0;
};

IdentityInputs prepare_inputs(const EmbeddingPair& pair,
                              const cooccur::CooccurrenceStats& stats,
                              std::size_t pair_sample, std::uint64_t seed) {
    if (pair.n != stats.n) throw Error("residuals: embedding/stats size mismatch");
    IdentityInputs in;
    in.total = static_cast<double>(stats.total_pairs);

    const auto self = cooccur::self_pmi_fill(stats);
    in.self_joint = self.joint_prob;

    in.marginal.resize(stats.n);
    for (std::size_t i = 0; i < stats.n; ++i) {
        in.marginal[i] = static_cast<double>(stats.target_counts[i]) / in.total;
    }

    std::vector<std::uint64_t> observed;
    observed.reserve(stats.pair_counts.size());
    for (const auto& [k, c] : stats.pair_counts) {
        if (c > 0) observed.push_back(k);
    }
    std::sort(observed.begin(), observed.end());
    if (observed.empty()) throw Error("residuals: no observed pairs");

    Rng rng(seed);
    in.sample.reserve(pair_sample);
    for (std::size_t s = 0; s < pair_sample; ++s) {
        const auto k = observed[rng.below(observed.size())];
        in.sample.push_back({static_cast<std::uint32_t>(k >> 32),
                             static_cast<std::uint32_t>(k & 0xFFFFFFFFu)});
    }
    return in;
}

double pair_log_prob(const cooccur::CooccurrenceStats& stats, std::uint32_t i, std::uint32_t j,
                     double total) {
    return std::log(static_cast<double>(stats.count(i, j)) / total);
}

/// (v_i - v_j) . (v_i' - v_j')
double difference_dot(const EmbeddingPair& pair, std::uint32_t i, std::uint32_t j) {
    const auto wi = pair.w_col(i);
    const auto wj = pair.w_col(j);
    const auto ci = pair.c_col(i);
    const auto cj = pair.c_col(j);
    double s = 0.0;
    for (std::size_t k = 0; k < pair.d; ++k) {
        s += (wi[k] - wj[k]) * (ci[k] - cj[k]);
    }
    return s;
}

} // namespace

LogIdentityResiduals log_identity_residuals(const EmbeddingPair& pair,
                                        const cooccur::CooccurrenceStats& stats,
                                        std::size_t pair_sample, std::uint64_t seed) {
    const auto in = prepare_inputs(pair, stats, pair_sample, seed);

    LogIdentityResiduals out;
    std::vector<double> marginal_res;
    marginal_res.reserve(pair.n);
    for (std::uint32_t i = 0; i < pair.n; ++i) {
        if (stats.target_counts[i] == 0) {
            ++out.skipped_words;
            continue;
        }
        const double predicted = -0.5 * dot(pair.w_col(i), pair.c_col(i)) +
                                 0.5 * std::log(in.self_joint[i]);
        marginal_res.push_back(std::log(in.marginal[i]) - predicted);
    }
    out.marginal = summarize(marginal_res);

    std::vector<double> joint_res;
    joint_res.reserve(in.sample.size());
    for (const auto& p : in.sample) {
        const double predicted =
            -0.5 * difference_dot(pair, p.target, p.context) +
            0.5 * std::log(in.self_joint[p.target] * in.self_joint[p.context]);
        joint_res.push_back(pair_log_prob(stats, p.target, p.context, in.total) - predicted);
    }
    out.joint = summarize(joint_res);
    return out;
}

QuasiSphereResiduals quasi_sphere_check(const EmbeddingPair& pair,
                                        const cooccur::CooccurrenceStats& stats,
                                        std::size_t pair_sample, std::uint64_t seed) {
    const auto in = prepare_inputs(pair, stats, pair_sample, seed);

    QuasiSphereResiduals out;
    std::vector<double> marginal_res;
    marginal_res.reserve(pair.n);
    for (std::uint32_t i = 0; i < pair.n; ++i) {
        if (stats.target_counts[i] == 0) {
            ++out.skipped_words;
            continue;
        }
        const double lhs = std::exp(-0.5 * dot(pair.w_col(i), pair.c_col(i)));
        const double rhs = in.marginal[i] / std::sqrt(in.self_joint[i]);
        marginal_res.push_back((lhs - rhs) / rhs);
    }
    out.marginal = summarize(marginal_res);

    std::vector<double> joint_res;
    joint_res.reserve(in.sample.size());
    for (const auto& p : in.sample) {
        const double lhs = std::exp(-0.5 * difference_dot(pair, p.target, p.context));
        const double p_joint = static_cast<double>(stats.count(p.target, p.context)) / in.total;
        const double rhs =
            p_joint / std::sqrt(in.self_joint[p.target] * in.self_joint[p.context]);
        joint_res.push_back((lhs - rhs) / rhs);
    }
    out.joint = summarize(joint_res);
    return out;
}

GeometryReport build_report(const EmbeddingPair& pair, std::span<const double> self_pmi) {
    if (self_pmi.size() != pair.n) throw Error("build_report: self-PMI size mismatch");
    GeometryReport report;
    report.words.resize(pair.n);
    report.conjugate_residual.resize(pair.n);
    report.split.resize(pair.n);
    report.defined.assign(pair.n, 1);

    const auto dec = decompose(pair);
    for (std::uint32_t i = 0; i < pair.n; ++i) {
        const double wc = dot(pair.w_col(i), pair.c_col(i));
        const double na2 = dot(dec.a_col(i), dec.a_col(i));
        const double nb2 = dot(dec.b_col(i), dec.b_col(i));
        report.conjugate_residual[i] = std::abs(wc - (na2 - nb2));
        try {
            report.words[i] = word_geometry(pair, self_pmi[i], i);
            report.split[i] = split_height(report.words[i].min_length, std::sqrt(na2));
        } catch (const Error&) {
            report.defined[i] = 0;
            ++report.zero_norm_words;
        }
    }
    return report;
}

void write_geometry_csv(const GeometryReport& report, const std::vector<std::string>& words,
                        const std::filesystem::path& path) {
    if (words.size() != report.words.size()) throw Error("geometry csv: word list mismatch");
    std::ofstream out(path);
    if (!out) throw Error("cannot write geometry csv: " + path.string());
    out << "word,norm_w,norm_c,internal_angle,min_length,self_pmi\n";
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (!report.defined[i]) continue;
        const auto& g = report.words[i];
        out << words[i] << ',' << format_full(g.norm_w) << ',' << format_full(g.norm_c) << ','
            << format_full(g.internal_angle) << ',' << format_full(g.min_length) << ','
            << format_full(g.self_pmi) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace pmivec::geometry
