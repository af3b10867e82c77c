#include "namefreq/tokenizers.hpp"

#include "detail/text.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

template <class... Fs>
struct Overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
Overloaded(Fs...) -> Overloaded<Fs...>;

// U+2581, the SentencePiece word-boundary marker.
constexpr std::string_view kSentencePieceSpace = "\xE2\x96\x81";

}  // namespace

std::string to_string(Scheme s) {
    switch (s) {
        case Scheme::Bpe: return "bpe";
        case Scheme::WordPiece: return "wordpiece";
        case Scheme::Unigram: return "unigram";
    }
    return "?";
}

Scheme parse_scheme(std::string_view s) {
    const auto l = detail::ascii_lower(s);
    if (l == "bpe") return Scheme::Bpe;
    if (l == "wordpiece") return Scheme::WordPiece;
    if (l == "unigram") return Scheme::Unigram;
    throw VocabError("unknown tokenizer scheme '" + std::string(s) + "'");
}

Scheme SubwordVocab::scheme() const {
    return std::visit(Overloaded{[](const BpeVocab&) { return Scheme::Bpe; },
                                 [](const WordPieceVocab&) { return Scheme::WordPiece; },
                                 [](const UnigramVocab&) { return Scheme::Unigram; }},
                      v_);
}

std::size_t SubwordVocab::size() const {
    return std::visit([](const auto& v) { return v.size(); }, v_);
}

Tokenization encode(std::string_view word, const SubwordVocab& vocab) {
    return std::visit(Overloaded{[&](const BpeVocab& v) { return encode_bpe(word, v); },
                                 [&](const WordPieceVocab& v) { return encode_wordpiece(word, v); },
                                 [&](const UnigramVocab& v) { return encode_unigram(word, v); }},
                      vocab.get());
}

std::string detokenize(const Tokenization& t, const SubwordVocab& vocab) {
    std::string out;
    std::visit(
        Overloaded{
            [&](const BpeVocab& v) {
                const auto& marker = v.options().end_marker;
                std::string joined;
                for (const auto& s : t.subtokens) {
                    std::string_view piece = s;
                    if (!marker.empty() && piece.size() >= marker.size() &&
                        piece.substr(piece.size() - marker.size()) == marker) {
                        piece.remove_suffix(marker.size());
                    }
                    joined += piece;
                }
                if (v.options().byte_level) {
                    const auto& table = byte_level_alphabet();
                    std::map<std::string, unsigned char> back;
                    for (int b = 0; b < 256; ++b) back[table[b]] = static_cast<unsigned char>(b);
                    for (const auto& ch : utf8::split_chars(joined)) {
                        const auto it = back.find(ch);
                        out += it == back.end() ? ch : std::string(1, static_cast<char>(it->second));
                    }
                } else {
                    // Undo byte fallback tokens.
                    for (std::size_t i = 0; i < joined.size();) {
                        if (joined.compare(i, 3, "<0x") == 0 && i + 6 <= joined.size() && joined[i + 5] == '>') {
                            out.push_back(static_cast<char>(std::stoi(joined.substr(i + 3, 2), nullptr, 16)));
                            i += 6;
                        } else {
                            out.push_back(joined[i++]);
                        }
                    }
                }
            },
            [&](const WordPieceVocab& v) {
                for (std::size_t i = 0; i < t.subtokens.size(); ++i) {
                    std::string_view piece = t.subtokens[i];
                    if (i > 0 && detail::starts_with(piece, v.continuation())) {
                        piece.remove_prefix(v.continuation().size());
                    }
                    out += piece;
                }
            },
            [&](const UnigramVocab&) {
                for (const auto& s : t.subtokens) out += s;
            }},
        vocab.get());
    return out;
}

std::string to_string(SpacePolicy p) { return p == SpacePolicy::Bare ? "bare" : "leading-space"; }

SpacePolicy parse_space_policy(std::string_view s) {
    if (s == "bare") return SpacePolicy::Bare;
    if (s == "leading-space") return SpacePolicy::LeadingSpace;
    throw std::invalid_argument("unknown space policy '" + std::string(s) + "'");
}

SpacePolicy default_space_policy(const SubwordVocab& vocab) {
    if (const auto* bpe = std::get_if<BpeVocab>(&vocab.get()); bpe && bpe->options().byte_level) {
        return SpacePolicy::LeadingSpace;
    }
    return SpacePolicy::Bare;
}

std::string encoder_input(std::string_view word, const SubwordVocab& vocab, SpacePolicy policy) {
    if (policy == SpacePolicy::Bare) return std::string(word);
    switch (vocab.scheme()) {
        case Scheme::Bpe:
            // Only byte-level vocabularies can represent the space.
            if (std::get<BpeVocab>(vocab.get()).options().byte_level) return " " + std::string(word);
            return std::string(word);
        case Scheme::Unigram: return std::string(kSentencePieceSpace) + std::string(word);
        case Scheme::WordPiece: return std::string(word);
    }
    return std::string(word);
}

Tokenization tokenize_word(std::string_view word, const SubwordVocab& vocab, SpacePolicy policy) {
    return encode(encoder_input(word, vocab, policy), vocab);
}

std::map<DemographicGroup, double> single_rate_by_group(const Registry& registry,
                                                        const SubwordVocab& vocab,
                                                        SpacePolicy policy) {
    std::map<DemographicGroup, std::pair<std::size_t, std::size_t>> tally;
    for (const auto& r : registry.records()) {
        if (!r.group) continue;
        auto& [singly, total] = tally[*r.group];
        ++total;
        if (tokenize_word(r.name, vocab, policy).singly) ++singly;
    }
    std::map<DemographicGroup, double> out;
    for (const auto& [g, st] : tally) {
        out[g] = static_cast<double>(st.first) / static_cast<double>(st.second);
    }
    return out;
}

}  // namespace namefreq
