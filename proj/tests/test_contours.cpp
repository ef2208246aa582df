#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmivec/contours.hpp"
#include "pmivec/vecops.hpp"
#include "support/fixtures.hpp"

using namespace pmivec;
using namespace pmivec::contours;

namespace {

EmbeddingPair three_word_pair() {
    // d=3, n=3; context word 2 has context vector (1,0,0)
    EmbeddingPair pair;
    pair.d = 3;
    pair.n = 3;
    pair.w = {2.0, 0.0, 0.0,   // w0 parallel to context
              0.0, 3.0, 0.0,   // w1 perpendicular
              1.0, 1.0, 0.0};  // w2 at 45 degrees
    pair.c = {1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0};
    return pair;
}

} // namespace

TEST_CASE("project_relative places parallel, perpendicular, and diagonal words") {
    const auto pair = three_word_pair();
    const auto proj = project_relative(pair, 2);
    CHECK(proj.context == 2);
    CHECK(proj.context_norm == doctest::Approx(1.0));
    REQUIRE(proj.points.size() == 3);

    // v parallel to v_j' -> (||v||, 0)
    CHECK(proj.points[0].x == doctest::Approx(2.0));
    CHECK(proj.points[0].y == doctest::Approx(0.0));

    // v perpendicular -> (0, ||v||)
    CHECK(proj.points[1].x == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(proj.points[1].y == doctest::Approx(3.0));

    // v=(1,1,0) against (1,0,0): theta = pi/4, point (1, 1)
    CHECK(proj.points[2].x == doctest::Approx(1.0));
    CHECK(proj.points[2].y == doctest::Approx(1.0));
}

TEST_CASE("projection preserves norms and stays in the upper half-plane") {
    const auto pair = fixtures::random_pair(60, 7, 91);
    const auto proj = project_relative(pair, 4);
    for (const auto& p : proj.points) {
        CHECK(p.y >= 0.0);
        const double nrm = norm(pair.w_col(p.id));
        CHECK(std::abs(p.x * p.x + p.y * p.y - nrm * nrm) <= 1e-10);
    }
}

TEST_CASE("project_relative rejects a zero context vector and skips zero-norm targets") {
    EmbeddingPair pair;
    pair.d = 2;
    pair.n = 2;
    pair.w = {1.0, 0.0, 0.0, 0.0};  // word 1 has a zero target vector
    pair.c = {1.0, 0.0, 0.0, 0.0};  // word 1 has a zero context vector
    CHECK_THROWS_AS(project_relative(pair, 1), Error);

    const auto proj = project_relative(pair, 0);
    CHECK(proj.points.size() == 1);
    CHECK(proj.skipped_zero_norm == 1);
}

TEST_CASE("bucket_by_logprob assigns words by |log p - center| <= half_width") {
    // Stream over 3 words; context word 2.
    std::vector<std::uint32_t> ids{0, 2, 0, 2, 1, 2, 0, 2, 0, 1};
    const auto stats = cooccur::count_pairs(3, ids, 1);

    // p(c=2 | w=0): count(0,2)/target_counts(0)
    const double lp0 = std::log(static_cast<double>(stats.count(0, 2)) /
                                static_cast<double>(stats.target_counts[0]));

    BucketSpec spec;
    spec.centers = {lp0};  // word 0 sits exactly at the center: boundary inclusive
    spec.half_width = 1e-9;
    const auto buckets = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, spec);
    REQUIRE(buckets.members.size() == 1);
    CHECK(std::find(buckets.members[0].begin(), buckets.members[0].end(), 0u) !=
          buckets.members[0].end());

    // far-away center -> empty bucket, no error
    BucketSpec far;
    far.centers = {123.0};
    far.half_width = 0.5;
    const auto empty = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, far);
    CHECK(empty.members[0].empty());

    // overlap flag
    BucketSpec overlap;
    overlap.centers = {-1.0, -1.5};
    overlap.half_width = 0.4;
    CHECK(bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, overlap).overlapping);
}

TEST_CASE("bucket_by_logprob validates its inputs") {
    std::vector<std::uint32_t> ids{0, 1, 0, 1};
    const auto stats = cooccur::count_pairs(2, ids, 1);
    BucketSpec no_centers;
    no_centers.half_width = 0.4;
    CHECK_THROWS_AS(bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 0, no_centers),
                    Error);
    BucketSpec bad_width;
    bad_width.centers = {-1.0};
    bad_width.half_width = 0.0;
    CHECK_THROWS_AS(bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 0, bad_width),
                    Error);
}

TEST_CASE("bucket kinds use the matching conditional probability") {
    std::vector<std::uint32_t> ids{0, 2, 0, 2, 1, 2, 0, 2, 0, 1};
    const auto stats = cooccur::count_pairs(3, ids, 1);

    BucketSpec wide;
    wide.centers = {0.0};
    wide.half_width = 100.0;  // catch everything with a defined probability
    const auto cgt = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, wide);
    const auto tgc = bucket_by_logprob(stats, ConditionalKind::TargetGivenContext, 2, wide);

    for (std::uint32_t i = 0; i < 3; ++i) {
        if (stats.count(i, 2) == 0) continue;
        const double want_cgt = std::log(static_cast<double>(stats.count(i, 2)) /
                                         static_cast<double>(stats.target_counts[i]));
        const double want_tgc = std::log(static_cast<double>(stats.count(i, 2)) /
                                         static_cast<double>(stats.context_counts[2]));
        CHECK(cgt.log_prob[i] == doctest::Approx(want_cgt).epsilon(1e-12));
        CHECK(tgc.log_prob[i] == doctest::Approx(want_tgc).epsilon(1e-12));
    }

    // words never seen with the context stay unbucketed
    for (std::uint32_t i = 0; i < 3; ++i) {
        if (stats.count(i, 2) != 0) continue;
        CHECK(std::isnan(cgt.log_prob[i]));
    }
}

TEST_CASE("contour CSV export round-trips values at full precision") {
    const auto pair = three_word_pair();
    const auto proj = project_relative(pair, 2);

    std::vector<std::uint32_t> ids{0, 2, 0, 2, 1, 2, 0, 2, 0, 1};
    const auto stats = cooccur::count_pairs(3, ids, 1);
    BucketSpec wide;
    wide.centers = {-0.7};
    wide.half_width = 5.0;
    const auto buckets = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, wide);

    const auto path = std::filesystem::temp_directory_path() / "pmivec_contour.csv";
    std::vector<std::string> words{"alpha", "beta", "gamma"};
    export_contour_csv(proj, buckets, words, path);

    std::ifstream in(path);
    std::string header;
    REQUIRE(std::getline(in, header));
    CHECK(header == "word,x,y,bucket,log_prob");

    std::size_t rows = 0;
    std::string line;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string word, xs, ys, bs, lps;
        REQUIRE(std::getline(ls, word, ','));
        REQUIRE(std::getline(ls, xs, ','));
        REQUIRE(std::getline(ls, ys, ','));
        REQUIRE(std::getline(ls, bs, ','));
        REQUIRE(std::getline(ls, lps, ','));
        const auto id = static_cast<std::uint32_t>(
            std::find(words.begin(), words.end(), word) - words.begin());
        REQUIRE(id < 3);
        // full-precision round trip: parsed doubles are bit-identical
        const auto* point = &proj.points[id];
        CHECK(std::stod(xs) == point->x);
        CHECK(std::stod(ys) == point->y);
        CHECK(std::stod(lps) == buckets.log_prob[id]);
        CHECK(std::stod(bs) == -0.7);
        ++rows;
    }
    std::size_t bucketed = 0;
    for (const auto& m : buckets.members) bucketed += m.size();
    CHECK(rows == bucketed);
    std::filesystem::remove(path);
}

TEST_CASE("empty bucket set writes a header-only file") {
    const auto pair = three_word_pair();
    const auto proj = project_relative(pair, 2);
    std::vector<std::uint32_t> ids{0, 2, 0, 2};
    const auto stats = cooccur::count_pairs(3, ids, 1);
    BucketSpec spec;
    spec.centers = {999.0};
    spec.half_width = 0.1;
    const auto buckets = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, spec);

    const auto path = std::filesystem::temp_directory_path() / "pmivec_contour_empty.csv";
    export_contour_csv(proj, buckets, {"a", "b", "c"}, path);
    std::ifstream in(path);
    std::string line;
    std::size_t lines = 0;
    while (std::getline(in, line)) ++lines;
    CHECK(lines == 1);
    std::filesystem::remove(path);
}

TEST_CASE("svg rendering writes a parseable file") {
    const auto pair = three_word_pair();
    const auto proj = project_relative(pair, 2);
    std::vector<std::uint32_t> ids{0, 2, 0, 2, 1, 2};
    const auto stats = cooccur::count_pairs(3, ids, 1);
    BucketSpec wide;
    wide.centers = {-0.7};
    wide.half_width = 5.0;
    const auto buckets = bucket_by_logprob(stats, ConditionalKind::ContextGivenTarget, 2, wide);

    const auto path = std::filesystem::temp_directory_path() / "pmivec_contour.svg";
    render_contour_svg(proj, buckets, {"a", "b", "c"}, path);
    std::ifstream in(path);
    std::stringstream content;
    content << in.rdbuf();
    CHECK(content.str().find("<svg") != std::string::npos);
    CHECK(content.str().find("</svg>") != std::string::npos);
    std::filesystem::remove(path);
}

TEST_CASE("bucket_x_stats: monotone means and spread comparison on a constructed cloud") {
    // Three buckets along increasing x with tight within-bucket spread.
    ContourProjection proj;
    proj.context = 0;
    proj.context_norm = 1.0;
    Buckets buckets;
    buckets.centers = {-6.0, -5.0, -4.0};
    buckets.members.resize(3);
    std::uint32_t id = 0;
    const double bucket_x[3] = {0.5, 2.0, 3.5};
    for (std::size_t b = 0; b < 3; ++b) {
        for (int k = -2; k <= 2; ++k) {
            proj.points.push_back({id, bucket_x[b] + 0.05 * k, 1.0});
            buckets.members[b].push_back(id);
            ++id;
        }
    }
    const auto xs = bucket_x_stats(proj, buckets);
    CHECK(xs.means_monotone);
    for (std::size_t b = 0; b < 3; ++b) {
        CHECK(xs.count[b] == 5);
        CHECK(xs.mean_x[b] == doctest::Approx(bucket_x[b]));
    }
    CHECK(xs.mean_within_stddev < xs.between_center_spread);

    // swapping two bucket x-levels breaks monotonicity
    Buckets swapped = buckets;
    std::swap(swapped.members[0], swapped.members[2]);
    CHECK_FALSE(bucket_x_stats(proj, swapped).means_monotone);

    // an empty bucket is counted and excluded from the aggregates
    Buckets with_empty = buckets;
    with_empty.centers.push_back(-3.0);
    with_empty.members.emplace_back();
    const auto xs2 = bucket_x_stats(proj, with_empty);
    CHECK(xs2.count[3] == 0);
    CHECK_FALSE(xs2.means_monotone);
}

TEST_CASE("parse_kind accepts the two documented names") {
    CHECK(parse_kind("context_given_target") == ConditionalKind::ContextGivenTarget);
    CHECK(parse_kind("target_given_context") == ConditionalKind::TargetGivenContext);
    CHECK_THROWS_AS(parse_kind("sideways"), Error);
}
