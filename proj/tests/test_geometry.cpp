#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "pmivec/geometry.hpp"
#include "pmivec/trainer.hpp"
#include "pmivec/vecops.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace pmivec;
using namespace pmivec::geometry;

TEST_CASE("decompose trivial cases") {
    EmbeddingPair pair;
    pair.d = 2;
    pair.n = 2;
    pair.w = {1.0, 2.0, 3.0, 4.0};
    pair.c = pair.w;  // W = C -> B = 0, A = W
    auto dec = decompose(pair);
    CHECK(dec.a == pair.w);
    for (const auto v : dec.b) CHECK(v == 0.0);

    for (auto& v : pair.c) v = -v;  // W = -C -> A = 0
    dec = decompose(pair);
    for (const auto v : dec.a) CHECK(v == 0.0);
    CHECK(dec.b == pair.w);
}

TEST_CASE("decompose then recompose is the identity, exactly") {
    const auto pair = fixtures::random_pair(40, 12, 5);
    const auto back = recompose(decompose(pair));
    CHECK(back.w == pair.w);
    CHECK(back.c == pair.c);
}

TEST_CASE("conjugate dot identity w.c = ||a||^2 - ||b||^2") {
    const auto pair = fixtures::random_pair(100, 16, 9, 2.0);
    const auto dec = decompose(pair);
    for (std::size_t i = 0; i < pair.n; ++i) {
        const double wc = dot(pair.w_col(i), pair.c_col(i));
        const double identity =
            dot(dec.a_col(i), dec.a_col(i)) - dot(dec.b_col(i), dec.b_col(i));
        CHECK(std::abs(wc - identity) <= 1e-10);
    }
}

TEST_CASE("word_geometry on aligned, orthogonal, and mixed pairs") {
    EmbeddingPair pair;
    pair.d = 2;
    pair.n = 3;
    pair.w = {1.0, 1.0, /*w1*/ 1.0, 0.0, /*w2*/ 1.0, 1.0};
    pair.c = {1.0, 1.0, /*c1*/ 0.0, 1.0, /*c2*/ 1.0, -1.0};

    // aligned: theta = 0, self_dot = ||v||^2
    auto g = word_geometry(pair, 1.0, 0);
    CHECK(g.internal_angle == doctest::Approx(0.0));
    CHECK(g.self_dot == doctest::Approx(2.0));
    CHECK(g.norm_w == doctest::Approx(std::sqrt(2.0)));

    // perpendicular: theta = pi/2, self_dot = 0
    g = word_geometry(pair, 1.0, 1);
    CHECK(g.internal_angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(g.self_dot == doctest::Approx(0.0));

    // v=(1,1), v'=(1,-1): theta = pi/2; PMI_ii = 2 gives d_i = sqrt(2) while
    // the identity cos(theta)*L = PMI is left unsatisfied (residual 2).
    g = word_geometry(pair, 2.0, 2);
    CHECK(g.internal_angle == doctest::Approx(std::numbers::pi / 2));
    CHECK(g.min_length == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(g.min_length_clamped);
    CHECK(g.self_dot == doctest::Approx(0.0));
    CHECK(std::abs(g.self_pmi - g.self_dot) == doctest::Approx(2.0));

    // self_dot always equals norm_w * norm_c * cos(angle)
    for (std::uint32_t i = 0; i < 3; ++i) {
        const auto wg = word_geometry(pair, 0.5, i);
        CHECK(std::abs(wg.self_dot - wg.norm_w * wg.norm_c * std::cos(wg.internal_angle)) <=
              1e-10);
    }
}

TEST_CASE("word_geometry clamps negative self-PMI and flags it") {
    EmbeddingPair pair;
    pair.d = 1;
    pair.n = 1;
    pair.w = {1.0};
    pair.c = {1.0};
    const auto g = word_geometry(pair, -0.5, 0);
    CHECK(g.min_length == 0.0);
    CHECK(g.min_length_clamped);
}

TEST_CASE("word_geometry rejects zero-norm vectors") {
    EmbeddingPair pair;
    pair.d = 2;
    pair.n = 1;
    pair.w = {0.0, 0.0};
    pair.c = {1.0, 0.0};
    CHECK_THROWS_AS(word_geometry(pair, 1.0, 0), Error);
}

TEST_CASE("split_height covers the three placement cases") {
    auto h = split_height(5.0, 3.0);
    CHECK(h.is_real);
    CHECK(h.value == doctest::Approx(4.0));

    h = split_height(3.0, 5.0);
    CHECK_FALSE(h.is_real);
    CHECK(h.value == doctest::Approx(4.0));

    h = split_height(2.0, 2.0);
    CHECK(h.is_real);
    CHECK(h.value == doctest::Approx(0.0));

    CHECK_THROWS_AS(split_height(-1.0, 0.0), Error);
}

TEST_CASE("split_height round trips: the quadratic is consistent both ways") {
    Rng rng(33);
    for (int rep = 0; rep < 200; ++rep) {
        const double d_i = rng.uniform(0.0, 5.0);
        const double s = rng.uniform(0.0, 5.0);
        const auto h = split_height(d_i, s);
        if (h.is_real) {
            // propped up: s^2 + h^2 = d^2
            CHECK(std::abs(s * s + h.value * h.value - d_i * d_i) <= 1e-12);
        } else {
            // split: s^2 - b^2 = d^2
            CHECK(std::abs(s * s - h.value * h.value - d_i * d_i) <= 1e-12);
        }
    }
}

TEST_CASE("log-probability identities hold on the exact-factorization instance") {
    const auto stats = fixtures::oracle_stats();
    const auto pmi = cooccur::build_pmi_matrix(stats);
    const auto pair = fixtures::exact_embeddings(pmi);

    // sanity: the constructed dots reproduce the stored entries
    for (const auto& e : pmi.entries) {
        CHECK(std::abs(dot(pair.w_col(e.i), pair.c_col(e.j)) - e.value) < 1e-9);
    }

    const auto residuals = log_identity_residuals(pair, stats, 500, 21);
    CHECK(residuals.marginal.count == pmi.n);
    CHECK(residuals.marginal.mean_abs <= 1e-6);
    CHECK(residuals.joint.mean_abs <= 1e-6);
    CHECK(residuals.skipped_words == 0);

    const auto qs = quasi_sphere_check(pair, stats, 500, 21);
    CHECK(qs.marginal.mean_abs <= 1e-6);
    CHECK(qs.joint.mean_abs <= 1e-6);
}

TEST_CASE("identity residuals error when no self pair was ever observed") {
    std::vector<std::uint32_t> abab{0, 1, 0, 1};
    const auto stats = cooccur::count_pairs(2, abab, 1);
    const auto pair = fixtures::random_pair(2, 4, 1);
    CHECK_THROWS_AS(log_identity_residuals(pair, stats, 10, 1), Error);
    CHECK_THROWS_AS(quasi_sphere_check(pair, stats, 10, 1), Error);
}

TEST_CASE("identity residuals on random embeddings are reported, not asserted") {
    const auto stats = fixtures::oracle_stats();
    const auto pair = fixtures::random_pair(20, 8, 77);
    const auto residuals = log_identity_residuals(pair, stats, 100, 3);
    CHECK(residuals.marginal.count > 0);
    CHECK(std::isfinite(residuals.marginal.mean_abs));
    CHECK(std::isfinite(residuals.joint.mean_abs));
}

TEST_CASE("joint identity with i=j reduces to the doubled marginal identity") {
    // With i = j the difference dot is 0 and log(p_ii p_jj)/2 = log p_ii, so
    // the predicted joint log-probability is exactly log p_ii: residual 0 on
    // the diagonal regardless of the embeddings.
    const auto stats = fixtures::oracle_stats();
    const auto pair = fixtures::random_pair(20, 8, 78);
    const double total = static_cast<double>(stats.total_pairs);
    const auto self = cooccur::self_pmi_fill(stats);
    for (std::uint32_t i = 0; i < stats.n; ++i) {
        if (stats.count(i, i) == 0) continue;
        const double lhs = std::log(static_cast<double>(stats.count(i, i)) / total);
        double diff_dot = 0.0;  // (v_i - v_i).(v_i' - v_i')
        const double rhs = -0.5 * diff_dot + 0.5 * std::log(self.joint_prob[i] * self.joint_prob[i]);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("internal angles: length-regularized training yields smaller angles than paired") {
    // Directional statistical check over three seeded corpora.
    for (const std::uint64_t corpus_seed : {7ULL, 23ULL, 41ULL}) {
        const auto stats = fixtures::grouped_stats(corpus_seed);
        const auto pmi = cooccur::build_pmi_matrix(stats);

        trainer::TrainConfig base;
        base.dim = 32;
        base.epochs = 300;
        base.learning_rate = 0.05;
        base.negatives = 0;  // the grouped instance saturates its pair matrix
        base.seed = 5;

        auto config_l = base;
        config_l.variant = trainer::LossVariant::Length;
        auto config_p = base;
        config_p.variant = trainer::LossVariant::Paired;

        const auto trained_l = trainer::train(pmi, config_l);
        const auto trained_p = trainer::train(pmi, config_p);

        auto mean_angle = [&](const EmbeddingPair& pair) {
            double sum = 0.0;
            for (std::uint32_t i = 0; i < pair.n; ++i) {
                sum += word_geometry(pair, pmi.self_pmi[i], i).internal_angle;
            }
            return sum / static_cast<double>(pair.n);
        };
        CHECK(mean_angle(trained_l.embeddings) < mean_angle(trained_p.embeddings));
    }
}

TEST_CASE("geometry report and CSV writer") {
    const auto stats = fixtures::oracle_stats();
    const auto pmi = cooccur::build_pmi_matrix(stats);
    const auto pair = fixtures::exact_embeddings(pmi);

    const auto report = build_report(pair, pmi.self_pmi);
    CHECK(report.words.size() == pair.n);
    CHECK(report.zero_norm_words == 0);
    for (std::size_t i = 0; i < pair.n; ++i) {
        CHECK(report.conjugate_residual[i] <= 1e-10);
    }

    std::vector<std::string> words;
    for (std::size_t i = 0; i < pair.n; ++i) words.push_back("w" + std::to_string(i));
    const auto path = std::filesystem::temp_directory_path() / "pmivec_geom.csv";
    write_geometry_csv(report, words, path);
    std::ifstream in(path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "word,norm_w,norm_c,internal_angle,min_length,self_pmi");
    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) ++rows;
    CHECK(rows == pair.n);
    std::filesystem::remove(path);
}
