#include "pmivec/pipeline.hpp"

#include <fstream>
#include <iostream>

#include "pmivec/eval.hpp"
#include "pmivec/geometry.hpp"
#include "pmivec/manifest.hpp"

namespace pmivec::pipeline {

namespace {

corpus::TokenizedText tokenize_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open corpus file: " + path.string());
    return corpus::tokenize(in);
}

nlohmann::json summary_json(const geometry::ResidualSummary& s) {
    return {{"count", s.count},
            {"mean_abs", s.mean_abs},
            {"max_abs", s.max_abs},
            {"mean", s.mean},
            {"stddev", s.stddev}};
}

} // namespace

void run_vocab(const VocabParams& p) {
    const auto text = tokenize_file(p.corpus);
    if (text.invalid_skipped > 0) {
        std::cerr << "warning: skipped " << text.invalid_skipped
                  << " tokens with invalid UTF-8\n";
    }
    const auto vocab = corpus::build_vocab(text.tokens, p.min_count);
    corpus::save_vocabulary(vocab, p.out);

    auto m = manifest::make_manifest("vocab");
    m["config"] = {{"min_count", p.min_count}};
    m["stats"] = {{"vocabulary_size", vocab.size()},
                  {"total_tokens", vocab.total_tokens},
                  {"invalid_tokens_skipped", text.invalid_skipped}};
    manifest::add_input(m, "corpus", p.corpus);
    manifest::add_output(m, "vocab", p.out);
    manifest::write_manifest(m, p.out.string() + ".manifest.json");
}

void run_cooccur(const CooccurParams& p) {
    const auto vocab = corpus::load_vocabulary(p.vocab);
    const auto text = tokenize_file(p.corpus);
    const auto stream = corpus::subsample(text.tokens, vocab, p.subsample_t, p.seed);
    const auto stats = cooccur::count_pairs(vocab.size(), stream.ids, p.window, p.threads);
    const auto pmi = cooccur::build_pmi_matrix(stats);

    const auto counts_path = p.out_counts.empty()
                                 ? std::filesystem::path(p.out_pmi.string() + ".counts")
                                 : p.out_counts;
    cooccur::save_pmi(pmi, p.out_pmi);
    cooccur::save_counts(stats, counts_path);
    if (!p.out_tsv.empty()) cooccur::export_pmi_tsv(pmi, p.out_tsv);

    std::size_t filled = 0;
    for (const auto f : pmi.self_filled) filled += f;
    const double positive_fraction = cooccur::positive_self_pmi_fraction(pmi);
    std::cerr << "cooccur: " << pmi.entries.size() << " stored entries, " << filled
              << " self-PMI values filled, observed self-PMI > 0 fraction "
              << positive_fraction << "\n";

    auto m = manifest::make_manifest("cooccur");
    m["config"] = {{"window", p.window},
                   {"subsample_t", p.subsample_t},
                   {"seed", p.seed},
                   {"threads", p.threads},
                   {"subsample_applied_before_counting", true}};
    m["stats"] = {{"n", pmi.n},
                  {"nnz", pmi.entries.size()},
                  {"total_pairs", stats.total_pairs},
                  {"subsampled_stream_tokens", stream.ids.size()},
                  {"self_pmi_filled", filled},
                  {"observed_self_pmi_positive_fraction", positive_fraction}};
    manifest::add_input(m, "corpus", p.corpus);
    manifest::add_input(m, "vocab", p.vocab);
    manifest::add_output(m, "pmi", p.out_pmi);
    manifest::add_output(m, "counts", counts_path);
    manifest::write_manifest(m, p.out_pmi.string() + ".manifest.json");
}

void run_train(const TrainParams& p) {
    const auto pmi = cooccur::load_pmi(p.pmi);
    const auto vocab = corpus::load_vocabulary(p.vocab);
    if (vocab.size() != pmi.n) {
        throw Error("train: vocabulary size does not match PMI matrix");
    }

    std::vector<std::uint64_t> entry_counts;
    if (p.config.count_weighted) {
        if (p.counts.empty()) throw Error("train: count-weighted mode needs a counts file");
        const auto stats = cooccur::load_counts(p.counts);
        entry_counts.reserve(pmi.entries.size());
        for (const auto& e : pmi.entries) entry_counts.push_back(stats.count(e.i, e.j));
    }

    const auto result = trainer::train(pmi, p.config, entry_counts);

    std::filesystem::create_directories(p.out_dir);
    const auto w_path = p.out_dir / "W.txt";
    const auto c_path = p.out_dir / "C.txt";
    const auto a_path = p.out_dir / "A.txt";
    const auto loss_path = p.out_dir / "loss.csv";

    const auto dec = geometry::decompose(result.embeddings);
    save_word2vec(w_path, vocab.words, result.embeddings.w, result.embeddings.d);
    save_word2vec(c_path, vocab.words, result.embeddings.c, result.embeddings.d);
    save_word2vec(a_path, vocab.words, dec.a, dec.d);
    trainer::save_loss_trace(result.trace, loss_path);

    auto m = manifest::make_manifest("train");
    m["config"] = {{"variant", trainer::variant_name(p.config.variant)},
                   {"d", p.config.dim},
                   {"epochs", p.config.epochs},
                   {"learning_rate", p.config.learning_rate},
                   {"optimizer", p.config.optimizer == trainer::Optimizer::Adagrad ? "adagrad" : "sgd"},
                   {"alpha1", p.config.alpha1},
                   {"alpha2", p.config.alpha2},
                   {"negatives", p.config.negatives},
                   {"seed", p.config.seed},
                   {"mode", p.config.mode == trainer::ParallelMode::Deterministic
                                ? "deterministic"
                                : "sharded"},
                   {"threads", p.config.threads},
                   {"count_weighted", p.config.count_weighted}};
    if (p.config.variant == trainer::LossVariant::Shifted) {
        m["config"]["shift"] = p.config.resolved_shift();
    }
    m["config"]["negative_target_policy"] =
        p.config.negative_target.policy == trainer::NegativeTarget::Policy::MinStoredPmi
            ? "min_stored_pmi"
            : "fixed";
    m["stats"] = {{"resolved_negative_target", result.negative_target},
                  {"clamped_length_targets", result.clamped_length_targets},
                  {"final_mean_positive_loss",
                   result.trace.empty() ? 0.0 : result.trace.back().mean_positive}};
    manifest::add_input(m, "pmi", p.pmi);
    manifest::add_input(m, "vocab", p.vocab);
    if (!p.counts.empty()) manifest::add_input(m, "counts", p.counts);
    manifest::add_output(m, "W", w_path);
    manifest::add_output(m, "C", c_path);
    manifest::add_output(m, "A", a_path);
    manifest::add_output(m, "loss", loss_path);
    manifest::write_manifest(m, p.out_dir / "manifest.json");
}

void run_eval(const EvalParams& p) {
    const auto table = load_word2vec(p.vectors);

    nlohmann::json report;
    report["dataset"] = p.dataset.string();
    report["vectors_used"] = p.vectors_used;

    if (p.task == "similarity") {
        const auto format =
            p.format == "csv" ? eval::SimilarityFormat::Csv : eval::SimilarityFormat::Tsv;
        const auto dataset = eval::load_similarity(p.dataset, format, p.subset);
        const auto result = eval::evaluate_similarity(table, dataset);
        report["task"] = "similarity";
        report["subset"] = p.subset;
        report["score"] = result.rho;
        report["n_scored"] = result.scored;
        report["n_skipped"] = result.skipped;
    } else if (p.task == "analogy") {
        const auto dataset = eval::load_analogy(p.dataset);
        const auto method = p.method == "cosine" ? eval::AnalogyMethod::CosAdd
                                                 : eval::AnalogyMethod::NormArgmin;
        const auto result = eval::evaluate_analogy(table, dataset, method);
        report["task"] = "analogy";
        report["subset"] = "ALL";
        report["method"] = p.method;
        report["score"] = result.accuracy;
        report["n_scored"] = result.scored;
        report["n_skipped"] = result.skipped;
    } else {
        throw Error("unknown eval task: " + p.task);
    }

    auto m = manifest::make_manifest("eval");
    m["config"] = {{"task", p.task}, {"subset", p.subset}, {"vectors_used", p.vectors_used}};
    manifest::add_input(m, "vectors", p.vectors);
    manifest::add_input(m, "dataset", p.dataset);
    report["manifest"] = m;

    std::ofstream out(p.out);
    if (!out) throw Error("cannot write eval report: " + p.out.string());
    out << report.dump(2) << "\n";
    if (!out) throw Error("write failed: " + p.out.string());
}

namespace {

EmbeddingPair load_pair(const std::filesystem::path& w_file,
                        const std::filesystem::path& c_file,
                        std::vector<std::string>* words_out) {
    const auto wt = load_word2vec(w_file);
    const auto ct = load_word2vec(c_file);
    if (wt.n != ct.n || wt.d != ct.d || wt.words != ct.words) {
        throw Error("W and C files do not describe the same vocabulary");
    }
    EmbeddingPair pair;
    pair.d = wt.d;
    pair.n = wt.n;
    pair.w = wt.vectors;
    pair.c = ct.vectors;
    if (words_out) *words_out = wt.words;
    return pair;
}

} // namespace

void run_geometry(const GeometryParams& p) {
    std::vector<std::string> words;
    const auto pair = load_pair(p.w_file, p.c_file, &words);
    const auto pmi = cooccur::load_pmi(p.pmi);
    if (pmi.n != pair.n) throw Error("geometry: PMI matrix size does not match embeddings");

    const auto report = geometry::build_report(pair, pmi.self_pmi);

    nlohmann::json j;
    j["n"] = pair.n;
    j["d"] = pair.d;
    j["zero_norm_words"] = report.zero_norm_words;

    double sum_angle = 0.0, max_conj = 0.0;
    std::size_t defined = 0, clamped = 0;
    nlohmann::json per_word = nlohmann::json::array();
    for (std::size_t i = 0; i < pair.n; ++i) {
        if (!report.defined[i]) continue;
        const auto& g = report.words[i];
        sum_angle += g.internal_angle;
        ++defined;
        if (g.min_length_clamped) ++clamped;
        max_conj = std::max(max_conj, report.conjugate_residual[i]);
        per_word.push_back({{"word", words[i]},
                            {"norm_w", g.norm_w},
                            {"norm_c", g.norm_c},
                            {"internal_angle", g.internal_angle},
                            {"min_length", g.min_length},
                            {"min_length_clamped", g.min_length_clamped},
                            {"self_pmi", g.self_pmi},
                            {"self_dot", g.self_dot},
                            {"split_is_real", report.split[i].is_real},
                            {"split_value", report.split[i].value}});
    }
    j["words"] = std::move(per_word);
    j["summary"] = {{"mean_internal_angle", defined == 0 ? 0.0 : sum_angle / defined},
                    {"max_conjugate_residual", max_conj},
                    {"min_length_clamped_words", clamped}};

    if (!p.counts.empty()) {
        const auto stats = cooccur::load_counts(p.counts);
        const auto cor = geometry::log_identity_residuals(pair, stats, p.pair_sample, p.seed);
        const auto qs = geometry::quasi_sphere_check(pair, stats, p.pair_sample, p.seed);
        j["log_identities"] = {{"marginal", summary_json(cor.marginal)},
                           {"joint", summary_json(cor.joint)},
                           {"skipped_words", cor.skipped_words}};
        j["quasi_sphere"] = {{"marginal", summary_json(qs.marginal)},
                             {"joint", summary_json(qs.joint)},
                             {"skipped_words", qs.skipped_words}};
    }

    auto m = manifest::make_manifest("geometry");
    manifest::add_input(m, "W", p.w_file);
    manifest::add_input(m, "C", p.c_file);
    manifest::add_input(m, "pmi", p.pmi);
    if (!p.counts.empty()) manifest::add_input(m, "counts", p.counts);
    j["manifest"] = m;

    std::ofstream out(p.out_json);
    if (!out) throw Error("cannot write geometry report: " + p.out_json.string());
    out << j.dump(2) << "\n";
    if (!out) throw Error("write failed: " + p.out_json.string());

    if (!p.out_csv.empty()) geometry::write_geometry_csv(report, words, p.out_csv);
}

void run_contours(const ContoursParams& p) {
    std::vector<std::string> words;
    const auto pair = load_pair(p.w_file, p.c_file, &words);
    const auto stats = cooccur::load_counts(p.counts);
    if (stats.n != pair.n) throw Error("contours: counts file size does not match embeddings");

    std::uint32_t context = 0;
    {
        auto it = std::find(words.begin(), words.end(), p.context_word);
        if (it == words.end()) {
            throw Error("contours: context word not in vocabulary: " + p.context_word);
        }
        context = static_cast<std::uint32_t>(it - words.begin());
    }

    const auto projection = contours::project_relative(pair, context);
    const auto buckets = contours::bucket_by_logprob(stats, p.kind, context, p.buckets);
    contours::export_contour_csv(projection, buckets, words, p.out_csv);

    if (buckets.overlapping) {
        std::cerr << "warning: bucket centers closer than 2*half_width; buckets overlap\n";
    }

    if (!p.out_svg.empty()) {
        try {
            contours::render_contour_svg(projection, buckets, words, p.out_svg);
        } catch (const std::exception& e) {
            std::cerr << "warning: contour plot rendering failed: " << e.what() << "\n";
        }
    }

    auto m = manifest::make_manifest("contours");
    m["config"] = {{"context_word", p.context_word},
                   {"kind", p.kind == contours::ConditionalKind::ContextGivenTarget
                                ? "context_given_target"
                                : "target_given_context"},
                   {"centers", p.buckets.centers},
                   {"half_width", p.buckets.half_width}};
    manifest::add_input(m, "W", p.w_file);
    manifest::add_input(m, "C", p.c_file);
    manifest::add_input(m, "counts", p.counts);
    manifest::add_output(m, "csv", p.out_csv);
    manifest::write_manifest(m, p.out_csv.string() + ".manifest.json");
}

void write_token_prefix(const std::filesystem::path& src, const std::filesystem::path& dst,
                        std::size_t max_tokens) {
    std::ifstream in(src, std::ios::binary);
    if (!in) throw Error("cannot open corpus file: " + src.string());
    std::ofstream out(dst);
    if (!out) throw Error("cannot write corpus prefix: " + dst.string());
    std::string token;
    std::size_t written = 0;
    while (written < max_tokens && (in >> token)) {
        out << token << (++written % 1000 == 0 ? '\n' : ' ');
    }
    out << "\n";
    if (written < max_tokens) {
        throw Error("corpus has only " + std::to_string(written) + " tokens, needed " +
                    std::to_string(max_tokens));
    }
    if (!out) throw Error("write failed: " + dst.string());
}

} // namespace pmivec::pipeline
