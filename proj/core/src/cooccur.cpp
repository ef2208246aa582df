#include "pmivec/cooccur.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <thread>

#include "pmivec/embedding.hpp"

namespace pmivec::cooccur {

void CooccurrenceStats::add(std::uint32_t i, std::uint32_t j, std::uint64_t c) {
    pair_counts[key(i, j)] += c;
    target_counts[i] += c;
    context_counts[j] += c;
    total_pairs += c;
}

CooccurrenceStats count_pairs(std::size_t n, std::span<const corpus::IdPair> pairs) {
    CooccurrenceStats stats;
    stats.n = n;
    stats.target_counts.assign(n, 0);
    stats.context_counts.assign(n, 0);
    for (const auto& p : pairs) {
        if (p.target >= n || p.context >= n) throw Error("count_pairs: id out of range");
        stats.add(p.target, p.context);
    }
    return stats;
}

CooccurrenceStats count_pairs(std::size_t n, std::span<const std::uint32_t> ids,
                              std::uint32_t window, unsigned threads) {
    CooccurrenceStats stats;
    stats.n = n;
    stats.target_counts.assign(n, 0);
    stats.context_counts.assign(n, 0);

    for (const auto id : ids) {
        if (id >= n) throw Error("count_pairs: id out of range");
    }

    if (threads <= 1 || ids.size() < 2 * threads) {
        corpus::for_each_pair(ids, window,
                              [&](std::uint32_t t, std::uint32_t c) { stats.add(t, c); });
        return stats;
    }

    std::vector<CooccurrenceStats> shards(threads);
    std::vector<std::thread> workers;
    const std::size_t chunk = (ids.size() + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
        shards[w].n = n;
        shards[w].target_counts.assign(n, 0);
        shards[w].context_counts.assign(n, 0);
        const std::size_t begin = std::min<std::size_t>(w * chunk, ids.size());
        const std::size_t end = std::min<std::size_t>(begin + chunk, ids.size());
        workers.emplace_back([&, w, begin, end] {
            corpus::for_each_pair_range(ids, window, begin, end, [&](std::uint32_t t, std::uint32_t c) {
                shards[w].add(t, c);
            });
        });
    }
    for (auto& t : workers) t.join();
    for (const auto& shard : shards) merge(stats, shard);
    return stats;
}

void merge(CooccurrenceStats& into, const CooccurrenceStats& from) {
    if (into.n != from.n) throw Error("merge: vocabulary size mismatch");
    for (const auto& [k, c] : from.pair_counts) into.pair_counts[k] += c;
    for (std::size_t i = 0; i < into.n; ++i) {
        into.target_counts[i] += from.target_counts[i];
        into.context_counts[i] += from.context_counts[i];
    }
    into.total_pairs += from.total_pairs;
}

std::optional<double> pmi(const CooccurrenceStats& stats, std::uint32_t i, std::uint32_t j) {
    if (i >= stats.n || j >= stats.n) throw Error("pmi: id out of range");
    if (stats.total_pairs == 0) throw Error("pmi: empty statistics");
    const std::uint64_t c = stats.count(i, j);
    if (c == 0) return std::nullopt;
    const double total = static_cast<double>(stats.total_pairs);
    const double p_joint = static_cast<double>(c) / total;
    const double p_i = static_cast<double>(stats.target_counts[i]) / total;
    const double p_j = static_cast<double>(stats.context_counts[j]) / total;
    return std::log(p_joint / (p_i * p_j));
}

SelfPmi self_pmi_fill(const CooccurrenceStats& stats) {
    if (stats.total_pairs == 0) throw Error("self_pmi_fill: empty statistics");
    const double total = static_cast<double>(stats.total_pairs);

    double p_min = std::numeric_limits<double>::infinity();
    for (std::uint32_t i = 0; i < stats.n; ++i) {
        const std::uint64_t c = stats.count(i, i);
        if (c > 0) p_min = std::min(p_min, static_cast<double>(c) / total);
    }
    if (!std::isfinite(p_min)) {
        throw Error("self_pmi_fill: no word co-occurs with itself; fill rule undefined");
    }

    SelfPmi out;
    out.p_min = p_min;
    out.value.resize(stats.n);
    out.filled.resize(stats.n);
    out.joint_prob.resize(stats.n);
    for (std::uint32_t i = 0; i < stats.n; ++i) {
        const std::uint64_t c = stats.count(i, i);
        const double joint =
            c > 0 ? static_cast<double>(c) / total : (2.0 / 3.0) * p_min;
        const double p_i = static_cast<double>(stats.target_counts[i]) / total;
        const double p_ic = static_cast<double>(stats.context_counts[i]) / total;
        out.joint_prob[i] = joint;
        out.filled[i] = c == 0 ? 1 : 0;
        out.value[i] = std::log(joint / (p_i * p_ic));
    }
    return out;
}

PmiMatrix build_pmi_matrix(const CooccurrenceStats& stats) {
    PmiMatrix m;
    m.n = stats.n;
    m.entries.reserve(stats.pair_counts.size());
    const double total = static_cast<double>(stats.total_pairs);
    for (const auto& [k, c] : stats.pair_counts) {
        if (c == 0) continue;
        const auto i = static_cast<std::uint32_t>(k >> 32);
        const auto j = static_cast<std::uint32_t>(k & 0xFFFFFFFFu);
        const double p_joint = static_cast<double>(c) / total;
        const double p_i = static_cast<double>(stats.target_counts[i]) / total;
        const double p_j = static_cast<double>(stats.context_counts[j]) / total;
        m.entries.push_back({i, j, std::log(p_joint / (p_i * p_j))});
    }
    std::sort(m.entries.begin(), m.entries.end(), [](const PmiEntry& a, const PmiEntry& b) {
        if (a.i != b.i) return a.i < b.i;
        return a.j < b.j;
    });

    auto self = self_pmi_fill(stats);
    m.self_pmi = std::move(self.value);
    m.self_filled = std::move(self.filled);
    return m;
}

std::optional<double> PmiMatrix::value(std::uint32_t i, std::uint32_t j) const {
    if (i >= n || j >= n) throw Error("PmiMatrix::value: id out of range");
    auto it = std::lower_bound(entries.begin(), entries.end(), std::pair{i, j},
                               [](const PmiEntry& e, const std::pair<std::uint32_t, std::uint32_t>& q) {
                                   if (e.i != q.first) return e.i < q.first;
                                   return e.j < q.second;
                               });
    if (it == entries.end() || it->i != i || it->j != j) return std::nullopt;
    return it->value;
}

double positive_self_pmi_fraction(const PmiMatrix& m) {
    std::size_t observed = 0;
    std::size_t positive = 0;
    for (std::size_t i = 0; i < m.n; ++i) {
        if (m.self_filled[i]) continue;
        ++observed;
        if (m.self_pmi[i] > 0.0) ++positive;
    }
    if (observed == 0) return 0.0;
    return static_cast<double>(positive) / static_cast<double>(observed);
}

namespace {

void write_bytes(std::ofstream& out, const void* data, std::size_t size) {
    out.write(static_cast<const char*>(data), static_cast<std::streamsize>(size));
}

template <class T>
void write_pod(std::ofstream& out, T v) {
    write_bytes(out, &v, sizeof(v));
}

template <class T>
T read_pod(std::ifstream& in) {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    return v;
}

void check_stream(const std::ios& s, const std::filesystem::path& path) {
    if (!s) throw Error("binary I/O failed: " + path.string());
}

} // namespace

void save_pmi(const PmiMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write PMI file: " + path.string());
    out.write("PMI1", 4);
    write_pod<std::uint64_t>(out, m.n);
    write_pod<std::uint64_t>(out, m.entries.size());
    for (const auto& e : m.entries) {
        write_pod<std::uint32_t>(out, e.i);
        write_pod<std::uint32_t>(out, e.j);
        write_pod<double>(out, e.value);
    }
    for (std::size_t i = 0; i < m.n; ++i) {
        write_pod<double>(out, m.self_pmi[i]);
        write_pod<std::uint8_t>(out, m.self_filled[i]);
    }
    check_stream(out, path);
}

PmiMatrix load_pmi(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open PMI file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "PMI1", 4) != 0) {
        throw Error("not a PMI1 file: " + path.string());
    }
    PmiMatrix m;
    m.n = read_pod<std::uint64_t>(in);
    const auto nnz = read_pod<std::uint64_t>(in);
    m.entries.resize(nnz);
    for (auto& e : m.entries) {
        e.i = read_pod<std::uint32_t>(in);
        e.j = read_pod<std::uint32_t>(in);
        e.value = read_pod<double>(in);
    }
    m.self_pmi.resize(m.n);
    m.self_filled.resize(m.n);
    for (std::size_t i = 0; i < m.n; ++i) {
        m.self_pmi[i] = read_pod<double>(in);
        m.self_filled[i] = read_pod<std::uint8_t>(in);
    }
    check_stream(in, path);
    return m;
}

void export_pmi_tsv(const PmiMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write TSV file: " + path.string());
    for (const auto& e : m.entries) {
        out << e.i << '\t' << e.j << '\t' << format_full(e.value) << "\n";
    }
    check_stream(out, path);
}

void save_counts(const CooccurrenceStats& stats, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write counts file: " + path.string());
    out.write("COO1", 4);
    write_pod<std::uint64_t>(out, stats.n);
    write_pod<std::uint64_t>(out, stats.pair_counts.size());
    write_pod<std::uint64_t>(out, stats.total_pairs);

    std::vector<std::uint64_t> keys;
    keys.reserve(stats.pair_counts.size());
    for (const auto& [k, c] : stats.pair_counts) {
        (void)c;
        keys.push_back(k);
    }
    std::sort(keys.begin(), keys.end());
    for (const auto k : keys) {
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(k >> 32));
        write_pod<std::uint32_t>(out, static_cast<std::uint32_t>(k & 0xFFFFFFFFu));
        write_pod<std::uint64_t>(out, stats.pair_counts.at(k));
    }
    for (const auto c : stats.target_counts) write_pod<std::uint64_t>(out, c);
    for (const auto c : stats.context_counts) write_pod<std::uint64_t>(out, c);
    check_stream(out, path);
}

CooccurrenceStats load_counts(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open counts file: " + path.string());
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "COO1", 4) != 0) {
        throw Error("not a COO1 file: " + path.string());
    }
    CooccurrenceStats stats;
    stats.n = read_pod<std::uint64_t>(in);
    const auto nnz = read_pod<std::uint64_t>(in);
    stats.total_pairs = read_pod<std::uint64_t>(in);
    stats.pair_counts.reserve(nnz);
    for (std::uint64_t r = 0; r < nnz; ++r) {
        const auto i = read_pod<std::uint32_t>(in);
        const auto j = read_pod<std::uint32_t>(in);
        const auto c = read_pod<std::uint64_t>(in);
        stats.pair_counts.emplace(CooccurrenceStats::key(i, j), c);
    }
    stats.target_counts.resize(stats.n);
    stats.context_counts.resize(stats.n);
    for (auto& c : stats.target_counts) c = read_pod<std::uint64_t>(in);
    for (auto& c : stats.context_counts) c = read_pod<std::uint64_t>(in);
    check_stream(in, path);
    return stats;
}

} // namespace pmivec::cooccur
