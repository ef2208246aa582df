#include "pmivec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <set>
#include <sstream>

#include "pmivec/error.hpp"
#include "pmivec/vecops.hpp"

namespace pmivec::eval {

namespace {

std::string lowercase(std::string s) {
    for (char& ch : s) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
    return s;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream in(line);
    while (std::getline(in, field, sep)) fields.push_back(field);
    return fields;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

} // namespace

SimilarityDataset load_similarity(const std::filesystem::path& path, SimilarityFormat format,
                                  const std::string& subset) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open similarity dataset: " + path.string());
    const char sep = format == SimilarityFormat::Tsv ? '\t' : ',';

    SimilarityDataset dataset;
    dataset.subset = subset;
    std::set<std::pair<std::string, std::string>> seen;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split(line, sep);
        if (fields.size() < 3) {
            throw Error("similarity dataset line " + std::to_string(lineno) +
                        ": expected word1, word2, score");
        }
        double score;
        if (!parse_double(fields[2], score)) {
            if (lineno == 1) continue;  // optional header
            throw Error("similarity dataset line " + std::to_string(lineno) +
                        ": unparseable score '" + fields[2] + "'");
        }
        SimilarityPair p{lowercase(fields[0]), lowercase(fields[1]), score};
        auto key = std::minmax(p.word1, p.word2);
        if (!seen.insert(key).second) {
            throw Error("similarity dataset line " + std::to_string(lineno) +
                        ": duplicate pair " + p.word1 + "/" + p.word2);
        }
        dataset.pairs.push_back(std::move(p));
    }
    return dataset;
}

AnalogyDataset load_analogy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open analogy dataset: " + path.string());
    AnalogyDataset dataset;
    std::string line;
    std::string category;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == ':') {
            const auto start = line.find_first_not_of(" \t", 1);
            category = start == std::string::npos ? "" : line.substr(start);
            continue;
        }
        std::istringstream ls(line);
        AnalogyQuestion q;
        std::string extra;
        if (!(ls >> q.a >> q.b >> q.c >> q.answer) || (ls >> extra)) {
            throw Error("analogy dataset line " + std::to_string(lineno) +
                        ": expected exactly four words");
        }
        q.a = lowercase(q.a);
        q.b = lowercase(q.b);
        q.c = lowercase(q.c);
        q.answer = lowercase(q.answer);
        q.category = category;
        dataset.questions.push_back(std::move(q));
    }
    return dataset;
}

double cosine(std::span<const double> u, std::span<const double> v) {
    if (u.size() != v.size()) throw Error("cosine: dimension mismatch");
    const double nu = norm(u);
    const double nv = norm(v);
    if (nu == 0.0 || nv == 0.0) throw Error("cosine: zero vector");
    return std::clamp(dot(u, v) / (nu * nv), -1.0, 1.0);
}

namespace {

/// Average ranks (1-based), ties share the mean of their rank block.
std::vector<double> average_ranks(std::span<const double> values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t s = 0;
    while (s < n) {
        std::size_t e = s;
        while (e + 1 < n && values[idx[e + 1]] == values[idx[s]]) ++e;
        const double avg = 0.5 * static_cast<double>(s + e) + 1.0;
        for (std::size_t k = s; k <= e; ++k) ranks[idx[k]] = avg;
        s = e + 1;
    }
    return ranks;
}

double pearson(std::span<const double> a, std::span<const double> b) {
    const auto n = static_cast<double>(a.size());
    double ma = 0.0, mb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        ma += a[k];
        mb += b[k];
    }
    ma /= n;
    mb /= n;
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        cov += (a[k] - ma) * (b[k] - mb);
        va += (a[k] - ma) * (a[k] - ma);
        vb += (b[k] - mb) * (b[k] - mb);
    }
    if (va == 0.0 || vb == 0.0) throw Error("spearman_rho: zero rank variance");
    return cov / std::sqrt(va * vb);
}

} // namespace

double spearman_rho(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw Error("spearman_rho: length mismatch");
    if (a.size() < 2) throw Error("spearman_rho: need at least 2 observations");
    const auto ra = average_ranks(a);
    const auto rb = average_ranks(b);
    return pearson(ra, rb);
}

SimilarityResult evaluate_similarity(const EmbeddingTable& table,
                                     const SimilarityDataset& dataset) {
    SimilarityResult result;
    std::vector<double> model_scores;
    std::vector<double> human_scores;
    for (const auto& p : dataset.pairs) {
        const auto it1 = table.index.find(p.word1);
        const auto it2 = table.index.find(p.word2);
        if (it1 == table.index.end() || it2 == table.index.end()) {
            ++result.skipped;
            continue;
        }
        model_scores.push_back(cosine(table.col(it1->second), table.col(it2->second)));
        human_scores.push_back(p.score);
    }
    if (model_scores.size() < 2) {
        throw Error("evaluate_similarity: fewer than 2 in-vocabulary pairs");
    }
    result.scored = model_scores.size();
    result.rho = spearman_rho(model_scores, human_scores);
    return result;
}

namespace {

std::uint32_t predict_norm_argmin(const EmbeddingTable& table, std::uint32_t a,
                                  std::uint32_t b, std::uint32_t c) {
    const std::size_t d = table.d;
    // ||v_a - v_b - v_c + v_d|| is minimized by the d closest to q = v_b + v_c - v_a;
    // rank by ||v_d||^2 - 2 q.v_d.
    std::vector<double> q(d);
    const auto va = table.col(a);
    const auto vb = table.col(b);
    const auto vc = table.col(c);
    for (std::size_t k = 0; k < d; ++k) q[k] = vb[k] + vc[k] - va[k];

    std::uint32_t best = 0;
    double best_score = std::numeric_limits<double>::infinity();
    for (std::uint32_t cand = 0; cand < table.n; ++cand) {
        if (cand == a || cand == b || cand == c) continue;
        const auto vd = table.col(cand);
        double dot_qd = 0.0, sq = 0.0;
        for (std::size_t k = 0; k < d; ++k) {
            dot_qd += q[k] * vd[k];
            sq += vd[k] * vd[k];
        }
        const double score = sq - 2.0 * dot_qd;
        if (score < best_score) {
            best_score = score;
            best = cand;
        }
    }
    return best;
}

std::uint32_t predict_cosadd(const EmbeddingTable& table, std::uint32_t a, std::uint32_t b,
                             std::uint32_t c) {
    const std::size_t d = table.d;
    std::vector<double> q(d);
    const auto va = table.col(a);
    const auto vb = table.col(b);
    const auto vc = table.col(c);
    for (std::size_t k = 0; k < d; ++k) q[k] = vb[k] + vc[k] - va[k];

    std::uint32_t best = 0;
    double best_score = -std::numeric_limits<double>::infinity();
    for (std::uint32_t cand = 0; cand < table.n; ++cand) {
        if (cand == a || cand == b || cand == c) continue;
        const auto vd = table.col(cand);
        const double nq = norm(std::span<const double>(q));
        const double nd = norm(vd);
        if (nq == 0.0 || nd == 0.0) continue;
        const double score = dot(std::span<const double>(q), vd) / (nq * nd);
        if (score > best_score) {
            best_score = score;
            best = cand;
        }
    }
    return best;
}

} // namespace

AnalogyResult evaluate_analogy(const EmbeddingTable& table, const AnalogyDataset& dataset,
                               AnalogyMethod method) {
    AnalogyResult result;
    for (const auto& q : dataset.questions) {
        const auto a = table.index.find(q.a);
        const auto b = table.index.find(q.b);
        const auto c = table.index.find(q.c);
        const auto ans = table.index.find(q.answer);
        if (a == table.index.end() || b == table.index.end() || c == table.index.end() ||
            ans == table.index.end()) {
            ++result.skipped;
            continue;
        }
        ++result.scored;
        const std::uint32_t predicted =
            method == AnalogyMethod::NormArgmin
                ? predict_norm_argmin(table, a->second, b->second, c->second)
                : predict_cosadd(table, a->second, b->second, c->second);
        if (predicted == ans->second) ++result.correct;
    }
    if (result.scored == 0) throw Error("evaluate_analogy: no in-vocabulary questions");
    result.accuracy = static_cast<double>(result.correct) / static_cast<double>(result.scored);
    return result;
}

} // namespace pmivec::eval
