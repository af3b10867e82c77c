#include <fstream>
#include <sstream>

#include <json.hpp>

#include "detail/text.hpp"
#include "namefreq/tokenizers.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

constexpr std::string_view kEndOfWordDirective = "#end-of-word:";

std::vector<std::string> read_lines(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw VocabError("cannot open " + path.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

std::string where(const std::filesystem::path& p, std::size_t line) {
    return p.string() + ":" + std::to_string(line);
}

SubwordVocab load_wordpiece(const std::filesystem::path& path) {
    std::set<std::string> tokens;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& tok = lines[i];
        if (tok.empty()) continue;
        if (!tokens.insert(tok).second) throw VocabError(where(path, i + 1) + ": duplicate token '" + tok + "'");
    }
    if (tokens.empty()) throw VocabError(path.string() + ": empty vocabulary");
    return WordPieceVocab(std::move(tokens));
}

std::vector<std::string> load_token_list(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw VocabError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    std::vector<std::string> tokens;
    if (!detail::trim(text).empty() && detail::trim(text).front() == '{') {
        auto doc = nlohmann::json::parse(text, nullptr, false);
        if (doc.is_discarded() || !doc.is_object()) {
            throw VocabError(path.string() + ": unknown vocabulary format (invalid JSON object)");
        }
        std::vector<std::pair<long long, std::string>> by_id;
        std::set<long long> ids;
        for (auto it = doc.begin(); it != doc.end(); ++it) {
            if (!it.value().is_number_integer()) {
                throw VocabError(path.string() + ": token '" + it.key() + "' has a non-integer id");
            }
            const auto id = it.value().get<long long>();
            if (!ids.insert(id).second) {
                throw VocabError(path.string() + ": duplicate id " + std::to_string(id));
            }
            by_id.emplace_back(id, it.key());
        }
        std::sort(by_id.begin(), by_id.end());
        for (auto& [id, tok] : by_id) tokens.push_back(std::move(tok));
        return tokens;
    }
    std::set<std::string> seen;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        if (!seen.insert(lines[i]).second) {
            throw VocabError(where(path, i + 1) + ": duplicate token '" + lines[i] + "'");
        }
        tokens.push_back(lines[i]);
    }
    return tokens;
}

SubwordVocab load_bpe(const std::filesystem::path& vocab_path, const std::filesystem::path& merges_path,
                      const LoadOptions& options) {
    const auto tokens = load_token_list(vocab_path);
    std::string end_marker;
    std::vector<BpeVocab::Merge> merges;
    const auto lines = read_lines(merges_path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        const auto& line = lines[i];
        if (line.empty() || detail::starts_with(line, "#version")) continue;
        if (detail::starts_with(line, kEndOfWordDirective)) {
            end_marker = std::string(detail::trim(std::string_view(line).substr(kEndOfWordDirective.size())));
            continue;
        }
        const auto parts = detail::split(line, ' ');
        if (parts.size() != 2 || parts[0].empty() || parts[1].empty()) {
            throw VocabError(where(merges_path, i + 1) + ": expected 'left right' merge");
        }
        merges.emplace_back(std::string(parts[0]), std::string(parts[1]));
    }
    BpeVocab::Options opts;
    opts.end_marker = end_marker;
    opts.byte_level = options.byte_level.value_or(end_marker.empty());
    std::set<std::string> alphabet;
    if (!opts.byte_level) {
        for (const auto& t : tokens) {
            if (t != end_marker && utf8::split_chars(t).size() == 1) alphabet.insert(t);
        }
    }
    return BpeVocab(std::move(alphabet), std::move(merges), std::move(opts));
}

SubwordVocab load_unigram(const std::filesystem::path& path) {
    std::map<std::string, double> log_probs;
    const auto lines = read_lines(path);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        if (lines[i].empty()) continue;
        const auto tab = lines[i].rfind('\t');
        if (tab == std::string::npos) throw VocabError(where(path, i + 1) + ": expected 'token<TAB>log-prob'");
        const auto lp = detail::parse_double(std::string_view(lines[i]).substr(tab + 1));
        if (!lp) throw VocabError(where(path, i + 1) + ": cannot parse log-probability");
        if (!log_probs.emplace(lines[i].substr(0, tab), *lp).second) {
            throw VocabError(where(path, i + 1) + ": duplicate token '" + lines[i].substr(0, tab) + "'");
        }
    }
    if (log_probs.empty()) throw VocabError(path.string() + ": empty vocabulary");
    return UnigramVocab(std::move(log_probs));
}

}  // namespace

SubwordVocab load_pretrained(const std::vector<std::filesystem::path>& paths, Scheme scheme,
                             const LoadOptions& options) {
    switch (scheme) {
        case Scheme::WordPiece:
            if (paths.size() != 1) throw VocabError("wordpiece expects one vocabulary file");
            return load_wordpiece(paths[0]);
        case Scheme::Bpe:
            if (paths.size() != 2) throw VocabError("bpe expects a vocabulary file and a merges file");
            return load_bpe(paths[0], paths[1], options);
        case Scheme::Unigram:
            if (paths.size() != 1) throw VocabError("unigram expects one token/log-prob file");
            return load_unigram(paths[0]);
    }
    throw VocabError("unknown scheme");
}

std::vector<std::filesystem::path> write_vocab(const SubwordVocab& vocab, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    auto open = [](const std::filesystem::path& p) {
        std::ofstream out(p, std::ios::binary);
        if (!out) throw VocabError("cannot write " + p.string());
        return out;
    };
    std::vector<std::filesystem::path> written;
    std::visit(
        [&](const auto& v) {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, WordPieceVocab>) {
                const auto p = dir / "vocab.txt";
                auto out = open(p);
                if (!v.contains(v.unk())) out << v.unk() << '\n';
                for (const auto& t : v.tokens()) out << t << '\n';
                written.push_back(p);
            } else if constexpr (std::is_same_v<T, BpeVocab>) {
                nlohmann::ordered_json doc = nlohmann::ordered_json::object();
                auto add = [&](const std::string& t) {
                    if (!doc.contains(t)) doc[t] = doc.size();
                };
                for (const auto& a : v.alphabet()) add(a);
                if (!v.options().end_marker.empty()) add(v.options().end_marker);
                for (const auto& [a, b] : v.merges()) add(a + b);
                const auto vp = dir / "vocab.json";
                open(vp) << doc.dump() << '\n';
                const auto mp = dir / "merges.txt";
                auto out = open(mp);
                out << "#version: 0.2\n";
                if (!v.options().end_marker.empty()) {
                    out << kEndOfWordDirective << ' ' << v.options().end_marker << '\n';
                }
                for (const auto& [a, b] : v.merges()) out << a << ' ' << b << '\n';
                written.push_back(vp);
                written.push_back(mp);
            } else {
                const auto p = dir / "unigram.tsv";
                auto out = open(p);
                for (const auto& [t, lp] : v.log_probs()) out << t << '\t' << detail::format_double(lp) << '\n';
                written.push_back(p);
            }
        },
        vocab.get());
    return written;
}

}  // namespace namefreq
