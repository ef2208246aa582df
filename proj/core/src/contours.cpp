#include "pmivec/contours.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include "pmivec/vecops.hpp"

namespace pmivec::contours {

ContourProjection project_relative(const EmbeddingPair& pair, std::uint32_t context) {
    if (context >= pair.n) throw Error("project_relative: context id out of range");
    const auto vj = pair.c_col(context);
    const double context_norm = norm(vj);
    if (context_norm == 0.0) throw Error("project_relative: zero context vector");

    ContourProjection proj;
    proj.context = context;
    proj.context_norm = context_norm;
    proj.points.reserve(pair.n);
    for (std::uint32_t i = 0; i < pair.n; ++i) {
        const auto vi = pair.w_col(i);
        const double ni = norm(vi);
        if (ni == 0.0) {
            ++proj.skipped_zero_norm;
            continue;
        }
        const double cosine = std::clamp(dot(vi, vj) / (ni * context_norm), -1.0, 1.0);
        const double theta = std::acos(cosine);
        proj.points.push_back({i, ni * std::cos(theta), ni * std::sin(theta)});
    }
    return proj;
}

ConditionalKind parse_kind(const std::string& name) {
    if (name == "context_given_target") return ConditionalKind::ContextGivenTarget;
    if (name == "target_given_context") return ConditionalKind::TargetGivenContext;
    throw Error("unknown conditional kind: " + name);
}

Buckets bucket_by_logprob(const cooccur::CooccurrenceStats& stats, ConditionalKind kind,
                          std::uint32_t context, const BucketSpec& spec) {
    if (context >= stats.n) throw Error("bucket_by_logprob: context id out of range");
    if (spec.centers.empty()) throw Error("bucket_by_logprob: no bucket centers");
    if (!(spec.half_width > 0.0)) throw Error("bucket_by_logprob: half_width must be > 0");

    Buckets buckets;
    buckets.centers = spec.centers;
    buckets.members.resize(spec.centers.size());
    buckets.log_prob.assign(stats.n, std::numeric_limits<double>::quiet_NaN());

    auto sorted = spec.centers;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t k = 0; k + 1 < sorted.size(); ++k) {
        if (sorted[k + 1] - sorted[k] < 2.0 * spec.half_width) buckets.overlapping = true;
    }

    for (std::uint32_t i = 0; i < stats.n; ++i) {
        const std::uint64_t joint = stats.count(i, context);
        if (joint == 0) continue;
        const std::uint64_t denom = kind == ConditionalKind::ContextGivenTarget
                                        ? stats.target_counts[i]
                                        : stats.context_counts[context];
        if (denom == 0) continue;
        const double lp = std::log(static_cast<double>(joint) / static_cast<double>(denom));
        buckets.log_prob[i] = lp;
        for (std::size_t b = 0; b < spec.centers.size(); ++b) {
            if (std::abs(lp - spec.centers[b]) <= spec.half_width) {
                buckets.members[b].push_back(i);
            }
        }
    }
    return buckets;
}

void export_contour_csv(const ContourProjection& projection, const Buckets& buckets,
                        const std::vector<std::string>& words,
                        const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write contour csv: " + path.string());
    out << "word,x,y,bucket,log_prob\n";

    std::unordered_map<std::uint32_t, const ContourPoint*> by_id;
    by_id.reserve(projection.points.size());
    for (const auto& p : projection.points) by_id.emplace(p.id, &p);

    // Rows ordered by id, then by bucket for words in overlapping buckets.
    std::vector<std::pair<std::uint32_t, std::size_t>> rows;
    for (std::size_t b = 0; b < buckets.members.size(); ++b) {
        for (const auto id : buckets.members[b]) rows.emplace_back(id, b);
    }
    std::sort(rows.begin(), rows.end());

    for (const auto& [id, b] : rows) {
        auto it = by_id.find(id);
        if (it == by_id.end()) continue;  // zero-norm word, not projectable
        if (id >= words.size()) throw Error("contour csv: id outside word list");
        out << words[id] << ',' << format_full(it->second->x) << ','
            << format_full(it->second->y) << ',' << format_full(buckets.centers[b]) << ','
            << format_full(buckets.log_prob[id]) << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

BucketXStats bucket_x_stats(const ContourProjection& projection, const Buckets& buckets) {
    std::unordered_map<std::uint32_t, double> x_of;
    x_of.reserve(projection.points.size());
    for (const auto& p : projection.points) x_of.emplace(p.id, p.x);

    BucketXStats stats;
    const std::size_t b_count = buckets.members.size();
    stats.count.resize(b_count, 0);
    stats.mean_x.resize(b_count, 0.0);
    stats.stddev_x.resize(b_count, 0.0);

    // bucket order by ascending center
    std::vector<std::size_t> order(b_count);
    for (std::size_t b = 0; b < b_count; ++b) order[b] = b;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return buckets.centers[a] < buckets.centers[b]; });

    for (std::size_t b = 0; b < b_count; ++b) {
        double sum = 0.0;
        for (const auto id : buckets.members[b]) {
            const auto it = x_of.find(id);
            if (it == x_of.end()) continue;
            sum += it->second;
            ++stats.count[b];
        }
        if (stats.count[b] == 0) continue;
        stats.mean_x[b] = sum / static_cast<double>(stats.count[b]);
        double var = 0.0;
        for (const auto id : buckets.members[b]) {
            const auto it = x_of.find(id);
            if (it == x_of.end()) continue;
            var += (it->second - stats.mean_x[b]) * (it->second - stats.mean_x[b]);
        }
        stats.stddev_x[b] = std::sqrt(var / static_cast<double>(stats.count[b]));
    }

    stats.means_monotone = true;
    for (std::size_t k = 0; k + 1 < b_count; ++k) {
        if (stats.count[order[k]] == 0 || stats.count[order[k + 1]] == 0 ||
            stats.mean_x[order[k + 1]] <= stats.mean_x[order[k]]) {
            stats.means_monotone = false;
            break;
        }
    }

    std::size_t populated = 0;
    double mean_of_means = 0.0;
    for (std::size_t b = 0; b < b_count; ++b) {
        if (stats.count[b] == 0) continue;
        ++populated;
        mean_of_means += stats.mean_x[b];
        stats.mean_within_stddev += stats.stddev_x[b];
    }
    if (populated > 0) {
        mean_of_means /= static_cast<double>(populated);
        stats.mean_within_stddev /= static_cast<double>(populated);
        double spread = 0.0;
        for (std::size_t b = 0; b < b_count; ++b) {
            if (stats.count[b] == 0) continue;
            spread += (stats.mean_x[b] - mean_of_means) * (stats.mean_x[b] - mean_of_means);
        }
        stats.between_center_spread = std::sqrt(spread / static_cast<double>(populated));
    }
    return stats;
}

namespace {

const char* kPalette[] = {"#1f77b4", "#2ca02c", "#d62728", "#9467bd",
                          "#e8b810", "#17becf", "#ff7f0e", "#8c564b"};

} // namespace

void render_contour_svg(const ContourProjection& projection, const Buckets& buckets,
                        const std::vector<std::string>& words,
                        const std::filesystem::path& path) {
    (void)words;
    double max_x = projection.context_norm;
    double min_x = 0.0;
    double max_y = 0.0;
    for (const auto& p : projection.points) {
        max_x = std::max(max_x, p.x);
        min_x = std::min(min_x, p.x);
        max_y = std::max(max_y, p.y);
    }
    const double span_x = std::max(1e-9, max_x - min_x);
    const double span_y = std::max(1e-9, max_y);

    const double width = 800.0, height = 600.0, margin = 40.0;
    auto sx = [&](double x) { return margin + (x - min_x) / span_x * (width - 2 * margin); };
    auto sy = [&](double y) { return height - margin - y / span_y * (height - 2 * margin); };

    std::ofstream out(path);
    if (!out) throw Error("cannot write svg: " + path.string());
    out << "<svg xmlns='http://www.w3.org/2000/svg' width='" << width << "' height='" << height
        << "'>\n";
    out << "<rect width='100%' height='100%' fill='white'/>\n";
    // origin marker
    out << "<text x='" << sx(0.0) << "' y='" << sy(0.0) << "' font-size='14'>+</text>\n";

    std::unordered_map<std::uint32_t, const ContourPoint*> by_id;
    for (const auto& p : projection.points) by_id.emplace(p.id, &p);
    for (std::size_t b = 0; b < buckets.members.size(); ++b) {
        const char* color = kPalette[b % (sizeof(kPalette) / sizeof(kPalette[0]))];
        for (const auto id : buckets.members[b]) {
            auto it = by_id.find(id);
            if (it == by_id.end()) continue;
            out << "<circle cx='" << sx(it->second->x) << "' cy='" << sy(it->second->y)
                << "' r='2.5' fill='" << color << "' fill-opacity='0.7'/>\n";
        }
    }
    // context word marker on the x-axis
    out << "<text x='" << sx(projection.context_norm) << "' y='" << sy(0.0)
        << "' font-size='16' fill='#e377c2'>*</text>\n";
    out << "</svg>\n";
    if (!out) throw Error("write failed: " + path.string());
}

} // namespace pmivec::contours
