#include "pmivec/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

#include "pmivec/rng.hpp"

namespace pmivec::corpus {

namespace {

/// Validates a complete UTF-8 sequence (RFC 3629: no overlongs, no
/// surrogates, max U+10FFFF).
bool valid_utf8(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
        const unsigned char b0 = s[i];
        if (b0 < 0x80) {
            ++i;
            continue;
        }
        int len;
        unsigned int cp;
        if ((b0 & 0xE0) == 0xC0) {
            len = 2;
            cp = b0 & 0x1F;
        } else if ((b0 & 0xF0) == 0xE0) {
            len = 3;
            cp = b0 & 0x0F;
        } else if ((b0 & 0xF8) == 0xF0) {
            len = 4;
            cp = b0 & 0x07;
        } else {
            return false;
        }
        if (i + len > s.size()) return false;
        for (int k = 1; k < len; ++k) {
            const unsigned char b = s[i + k];
            if ((b & 0xC0) != 0x80) return false;
            cp = (cp << 6) | (b & 0x3F);
        }
        if (len == 2 && cp < 0x80) return false;
        if (len == 3 && (cp < 0x800 || (cp >= 0xD800 && cp <= 0xDFFF))) return false;
        if (len == 4 && (cp < 0x10000 || cp > 0x10FFFF)) return false;
        i += len;
    }
    return true;
}

void lowercase_ascii(std::string& s) {
    for (char& ch : s) {
        if (ch >= 'A' && ch <= 'Z') ch = static_cast<char>(ch - 'A' + 'a');
    }
}

void push_token(TokenizedText& out, std::string& token) {
    if (token.empty()) return;
    if (valid_utf8(token)) {
        lowercase_ascii(token);
        out.tokens.push_back(std::move(token));
    } else {
        ++out.invalid_skipped;
    }
    token.clear();
}

} // namespace

TokenizedText tokenize(std::istream& in) {
    TokenizedText out;
    std::string token;
    char ch;
    while (in.get(ch)) {
        if (std::isspace(static_cast<unsigned char>(ch))) {
            push_token(out, token);
        } else {
            token.push_back(ch);
        }
    }
    push_token(out, token);
    return out;
}

TokenizedText tokenize(std::string_view text) {
    std::istringstream in{std::string(text)};
    return tokenize(in);
}

std::optional<std::uint32_t> Vocabulary::id_of(std::string_view word) const {
    auto it = index.find(std::string(word));
    if (it == index.end()) return std::nullopt;
    return it->second;
}

Vocabulary build_vocab(const std::unordered_map<std::string, std::uint64_t>& raw_counts,
                       std::uint64_t min_count) {
    if (min_count < 1) throw Error("build_vocab: min_count must be >= 1");
    std::vector<std::pair<std::string, std::uint64_t>> kept;
    kept.reserve(raw_counts.size());
    for (const auto& [word, count] : raw_counts) {
        if (count >= min_count) kept.emplace_back(word, count);
    }
    if (kept.empty()) throw Error("build_vocab: no word reaches min_count (empty vocabulary)");
    std::sort(kept.begin(), kept.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });

    Vocabulary vocab;
    vocab.words.reserve(kept.size());
    vocab.counts.reserve(kept.size());
    for (std::uint32_t id = 0; id < kept.size(); ++id) {
        vocab.index.emplace(kept[id].first, id);
        vocab.words.push_back(std::move(kept[id].first));
        vocab.counts.push_back(kept[id].second);
        vocab.total_tokens += vocab.counts.back();
    }
    return vocab;
}

Vocabulary build_vocab(const std::vector<std::string>& tokens, std::uint64_t min_count) {
    std::unordered_map<std::string, std::uint64_t> counts;
    counts.reserve(tokens.size() / 4 + 16);
    for (const auto& t : tokens) ++counts[t];
    return build_vocab(counts, min_count);
}

TokenStream subsample(const std::vector<std::string>& tokens, const Vocabulary& vocab,
                      double threshold, std::uint64_t seed) {
    if (!(threshold > 0.0)) throw Error("subsample: threshold must be > 0");
    if (vocab.total_tokens == 0) throw Error("subsample: empty vocabulary");

    // Per-id discard probability 1 - sqrt(t/f); exactly 0 when f <= t.
    std::vector<double> discard(vocab.size());
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        const double f =
            static_cast<double>(vocab.counts[id]) / static_cast<double>(vocab.total_tokens);
        discard[id] = std::max(0.0, 1.0 - std::sqrt(threshold / f));
    }

    Rng rng(seed);
    TokenStream stream;
    stream.ids.reserve(tokens.size());
    for (const auto& token : tokens) {
        const auto id = vocab.id_of(token);
        if (!id) continue;  // out-of-vocabulary tokens are always dropped
        const double u = rng.uniform();
        if (u < discard[*id]) continue;
        stream.ids.push_back(*id);
    }
    return stream;
}

std::vector<IdPair> pair_stream(std::span<const std::uint32_t> ids, std::uint32_t window) {
    std::vector<IdPair> pairs;
    for_each_pair(ids, window,
                  [&](std::uint32_t t, std::uint32_t c) { pairs.push_back({t, c}); });
    return pairs;
}

void save_vocabulary(const Vocabulary& vocab, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write vocabulary file: " + path.string());
    out << "#tokens=" << vocab.total_tokens << "\n";
    for (std::size_t id = 0; id < vocab.size(); ++id) {
        out << vocab.words[id] << '\t' << vocab.counts[id] << "\n";
    }
    if (!out) throw Error("write failed: " + path.string());
}

Vocabulary load_vocabulary(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open vocabulary file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || line.rfind("#tokens=", 0) != 0) {
        throw Error("vocabulary file missing #tokens header: " + path.string());
    }
    Vocabulary vocab;
    vocab.total_tokens = std::stoull(line.substr(8));
    std::uint64_t counted = 0;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw Error("malformed vocabulary line: " + line);
        }
        const std::uint32_t id = static_cast<std::uint32_t>(vocab.words.size());
        vocab.words.push_back(line.substr(0, tab));
        vocab.counts.push_back(std::stoull(line.substr(tab + 1)));
        vocab.index.emplace(vocab.words.back(), id);
        counted += vocab.counts.back();
    }
    if (vocab.words.empty()) throw Error("empty vocabulary file: " + path.string());
    if (counted != vocab.total_tokens) {
        throw Error("vocabulary counts do not sum to #tokens header: " + path.string());
    }
    return vocab;
}

} // namespace pmivec::corpus
