// pmivec - train and inspect PMI-regression word embeddings.
//
// Subcommands: vocab, cooccur, train, eval, geometry, contours.
// Exit codes: 0 success, 1 runtime error, 2 usage error.

#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pmivec/manifest.hpp"
#include "pmivec/pipeline.hpp"

namespace {

/// JSON config files: top-level keys are long option names, nested objects
/// are subcommand sections. Command-line flags always win.
class JsonConfig : public CLI::Config {
public:
    std::string to_config(const CLI::App* app, bool default_also, bool, std::string) const override {
        nlohmann::json j;
        for (const CLI::Option* opt : app->get_options({})) {
            if (!opt->get_lnames().empty() && opt->get_configurable()) {
                const std::string name = opt->get_lnames()[0];
                if (opt->reduced_results().size() == 1) {
                    j[name] = opt->reduced_results().at(0);
                } else if (!opt->reduced_results().empty()) {
                    j[name] = opt->reduced_results();
                } else if (default_also) {
                    j[name] = opt->get_default_str();
                }
            }
        }
        for (const CLI::App* sub : app->get_subcommands({})) {
            j[sub->get_name()] = nlohmann::json::parse(to_config(sub, default_also, false, ""));
        }
        return j.dump(2);
    }

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        nlohmann::json j;
        input >> j;
        return walk(j, {});
    }

private:
    static std::vector<CLI::ConfigItem> walk(const nlohmann::json& j,
                                             std::vector<std::string> parents) {
        std::vector<CLI::ConfigItem> results;
        for (const auto& [key, value] : j.items()) {
            if (value.is_object()) {
                auto deeper = parents;
                deeper.push_back(key);
                auto nested = walk(value, deeper);
                results.insert(results.end(), nested.begin(), nested.end());
                continue;
            }
            CLI::ConfigItem item;
            item.parents = parents;
            item.name = key;
            if (value.is_array()) {
                for (const auto& element : value) {
                    item.inputs.push_back(element.is_string() ? element.get<std::string>()
                                                              : element.dump());
                }
            } else if (value.is_string()) {
                item.inputs.push_back(value.get<std::string>());
            } else {
                item.inputs.push_back(value.dump());
            }
            results.push_back(item);
        }
        return results;
    }
};

using pmivec::pipeline::ContoursParams;
using pmivec::pipeline::CooccurParams;
using pmivec::pipeline::EvalParams;
using pmivec::pipeline::GeometryParams;
using pmivec::pipeline::TrainParams;
using pmivec::pipeline::VocabParams;

int run(int argc, char** argv) {
    CLI::App app{"PMI-regression word embedding toolkit"};
    app.require_subcommand(1);
    app.fallthrough();
    app.config_formatter(std::make_shared<JsonConfig>());
    app.set_config("--config", "", "JSON config file; command-line flags win");
    app.set_version_flag("--version", std::string(pmivec::manifest::kToolVersion));

    // vocab
    VocabParams vocab;
    auto* cmd_vocab = app.add_subcommand("vocab", "Build the min-count filtered vocabulary");
    cmd_vocab->add_option("--corpus", vocab.corpus, "plain text corpus (UTF-8, whitespace-delimited)")
        ->required();
    cmd_vocab->add_option("--min-count", vocab.min_count, "discard words with fewer occurrences")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_vocab->add_option("--out", vocab.out, "vocabulary file to write")->required();

    // cooccur
    CooccurParams cooccur;
    auto* cmd_cooccur =
        app.add_subcommand("cooccur", "Count window co-occurrences and build the PMI matrix");
    cmd_cooccur->add_option("--corpus", cooccur.corpus)->required();
    cmd_cooccur->add_option("--vocab", cooccur.vocab)->required();
    cmd_cooccur->add_option("--window", cooccur.window, "context words either side of the target")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_cooccur->add_option("--subsample-t", cooccur.subsample_t, "subsampling threshold t")
        ->capture_default_str();
    cmd_cooccur->add_option("--seed", cooccur.seed)->capture_default_str();
    cmd_cooccur->add_option("--threads", cooccur.threads)->capture_default_str();
    cmd_cooccur->add_option("--out", cooccur.out_pmi, "PMI binary to write")->required();
    cmd_cooccur->add_option("--out-counts", cooccur.out_counts,
                            "counts binary (default: <out>.counts)");
    cmd_cooccur->add_option("--out-tsv", cooccur.out_tsv, "optional TSV debug export");

    // train
    TrainParams train;
    std::string variant = "D";
    std::string optimizer = "adagrad";
    std::string mode = "deterministic";
    std::string neg_target = "min_pmi";
    double shift_value = 0.0;
    auto* cmd_train = app.add_subcommand("train", "Train W and C against the PMI matrix");
    cmd_train->add_option("--pmi", train.pmi)->required();
    cmd_train->add_option("--vocab", train.vocab)->required();
    cmd_train->add_option("--variant", variant, "loss variant")
        ->capture_default_str()
        ->check(CLI::IsMember({"D", "L", "P", "shifted"}));
    cmd_train->add_option("-d,--dim", train.config.dim)->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd_train->add_option("--epochs", train.config.epochs)->capture_default_str();
    cmd_train->add_option("--lr", train.config.learning_rate)->capture_default_str();
    cmd_train->add_option("--optimizer", optimizer)
        ->capture_default_str()
        ->check(CLI::IsMember({"adagrad", "sgd"}));
    cmd_train->add_option("--alpha1", train.config.alpha1)->capture_default_str();
    cmd_train->add_option("--alpha2", train.config.alpha2)->capture_default_str();
    cmd_train->add_option("-k,--negatives", train.config.negatives)->capture_default_str();
    auto* shift_opt =
        cmd_train->add_option("--shift", shift_value, "shifted-variant shift (default log k)");
    cmd_train->add_option("--neg-target", neg_target,
                          "negative-pair target: min_pmi or a fixed number");
    cmd_train->add_option("--seed", train.config.seed)->capture_default_str();
    cmd_train->add_option("--mode", mode)
        ->capture_default_str()
        ->check(CLI::IsMember({"deterministic", "sharded"}));
    cmd_train->add_option("--threads", train.config.threads)->capture_default_str();
    cmd_train->add_flag("--count-weighted", train.config.count_weighted,
                        "weight positive updates by pair count (experimental)");
    cmd_train->add_option("--counts", train.counts, "counts binary, needed for --count-weighted");
    cmd_train->add_option("--out-dir", train.out_dir, "receives W.txt, C.txt, A.txt, loss.csv")
        ->required();

    // eval
    EvalParams eval;
    std::string eval_run_dir;
    auto* cmd_eval = app.add_subcommand("eval", "Score embeddings on similarity or analogy");
    auto* eval_vectors =
        cmd_eval->add_option("--vectors", eval.vectors, "explicit word2vec text file");
    auto* eval_dir = cmd_eval->add_option(
        "--embeddings", eval_run_dir, "training output directory; --use picks W.txt or A.txt");
    eval_vectors->excludes(eval_dir);
    cmd_eval->add_option("--use", eval.vectors_used, "which matrix to score (and report label)")
        ->capture_default_str()
        ->check(CLI::IsMember({"W", "C", "A"}));
    cmd_eval->add_option("--task", eval.task)
        ->required()
        ->check(CLI::IsMember({"similarity", "analogy"}));
    cmd_eval->add_option("--dataset", eval.dataset)->required();
    cmd_eval->add_option("--subset", eval.subset)
        ->capture_default_str()
        ->check(CLI::IsMember({"ALL", "SIM", "REL"}));
    cmd_eval->add_option("--format", eval.format)
        ->capture_default_str()
        ->check(CLI::IsMember({"tsv", "csv"}));
    cmd_eval->add_option("--method", eval.method, "analogy scoring rule")
        ->capture_default_str()
        ->check(CLI::IsMember({"norm", "cosine"}));
    cmd_eval->add_option("--out", eval.out, "JSON report")->required();

    // geometry
    GeometryParams geometry;
    std::string geometry_run_dir;
    auto* cmd_geometry =
        app.add_subcommand("geometry", "Conjugate decomposition and angle/length diagnostics");
    auto* geometry_dir = cmd_geometry->add_option(
        "--embeddings", geometry_run_dir, "training output directory holding W.txt and C.txt");
    cmd_geometry->add_option("--w-file", geometry.w_file)->excludes(geometry_dir);
    cmd_geometry->add_option("--c-file", geometry.c_file)->excludes(geometry_dir);
    cmd_geometry->add_option("--pmi", geometry.pmi)->required();
    cmd_geometry->add_option("--counts", geometry.counts,
                             "counts binary; enables the probability-identity residual checks");
    cmd_geometry->add_option("--pair-sample", geometry.pair_sample)->capture_default_str();
    cmd_geometry->add_option("--seed", geometry.seed)->capture_default_str();
    cmd_geometry->add_option("--out", geometry.out_json, "JSON report")->required();
    cmd_geometry->add_option("--out-csv", geometry.out_csv, "per-word CSV export");

    // contours
    ContoursParams contours;
    std::string contours_run_dir;
    std::string kind = "context_given_target";
    std::vector<double> centers = {-6.8, -5.7, -4.5, -3.2};
    auto* cmd_contours =
        app.add_subcommand("contours", "Project words relative to a context word and bucket "
                                       "them by empirical log-probability");
    auto* contours_dir = cmd_contours->add_option(
        "--embeddings", contours_run_dir, "training output directory holding W.txt and C.txt");
    cmd_contours->add_option("--w-file", contours.w_file)->excludes(contours_dir);
    cmd_contours->add_option("--c-file", contours.c_file)->excludes(contours_dir);
    cmd_contours->add_option("--counts", contours.counts)->required();
    cmd_contours->add_option("--context-word", contours.context_word)->required();
    cmd_contours->add_option("--kind", kind)
        ->capture_default_str()
        ->check(CLI::IsMember({"context_given_target", "target_given_context"}));
    cmd_contours->add_option("--centers", centers, "bucket centers (log probability)")
        ->capture_default_str();
    cmd_contours->add_option("--half-width", contours.buckets.half_width)->capture_default_str();
    cmd_contours->add_option("--out", contours.out_csv, "CSV export")->required();
    cmd_contours->add_option("--out-svg", contours.out_svg, "optional scatter plot");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help / --version
        app.exit(e);
        return 2;
    }

    try {
        if (cmd_vocab->parsed()) {
            pmivec::pipeline::run_vocab(vocab);
        } else if (cmd_cooccur->parsed()) {
            pmivec::pipeline::run_cooccur(cooccur);
        } else if (cmd_train->parsed()) {
            train.config.variant = pmivec::trainer::parse_variant(variant);
            train.config.optimizer = optimizer == "sgd" ? pmivec::trainer::Optimizer::Sgd
                                                        : pmivec::trainer::Optimizer::Adagrad;
            train.config.mode = mode == "sharded" ? pmivec::trainer::ParallelMode::Sharded
                                                  : pmivec::trainer::ParallelMode::Deterministic;
            if (*shift_opt) train.config.shift = shift_value;
            if (neg_target == "min_pmi") {
                train.config.negative_target.policy =
                    pmivec::trainer::NegativeTarget::Policy::MinStoredPmi;
            } else {
                train.config.negative_target.policy =
                    pmivec::trainer::NegativeTarget::Policy::Fixed;
                try {
                    train.config.negative_target.fixed_value = std::stod(neg_target);
                } catch (...) {
                    std::cerr << "error: --neg-target expects 'min_pmi' or a number, got '"
                              << neg_target << "'\n";
                    return 2;
                }
            }
            pmivec::pipeline::run_train(train);
        } else if (cmd_eval->parsed()) {
            if (!eval_run_dir.empty()) {
                eval.vectors =
                    std::filesystem::path(eval_run_dir) / (eval.vectors_used + ".txt");
            } else if (eval.vectors.empty()) {
                std::cerr << "error: eval needs --vectors or --embeddings\n";
                return 2;
            }
            pmivec::pipeline::run_eval(eval);
        } else if (cmd_geometry->parsed()) {
            if (!geometry_run_dir.empty()) {
                geometry.w_file = std::filesystem::path(geometry_run_dir) / "W.txt";
                geometry.c_file = std::filesystem::path(geometry_run_dir) / "C.txt";
            } else if (geometry.w_file.empty() || geometry.c_file.empty()) {
                std::cerr << "error: geometry needs --embeddings or both --w-file/--c-file\n";
                return 2;
            }
            pmivec::pipeline::run_geometry(geometry);
        } else if (cmd_contours->parsed()) {
            if (!contours_run_dir.empty()) {
                contours.w_file = std::filesystem::path(contours_run_dir) / "W.txt";
                contours.c_file = std::filesystem::path(contours_run_dir) / "C.txt";
            } else if (contours.w_file.empty() || contours.c_file.empty()) {
                std::cerr << "error: contours needs --embeddings or both --w-file/--c-file\n";
                return 2;
            }
            contours.kind = pmivec::contours::parse_kind(kind);
            contours.buckets.centers = centers;
            pmivec::pipeline::run_contours(contours);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) { return run(argc, argv); }
