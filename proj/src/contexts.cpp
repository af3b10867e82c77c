#include "namefreq/contexts.hpp"

#include <algorithm>
#include <fstream>

#include <json.hpp>

#include "detail/text.hpp"
#include "namefreq/unicode.hpp"

namespace namefreq {

namespace {

bool is_space(unsigned char c) { return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v'; }

// Byte offset of the code point with index `chars`.
std::size_t byte_offset(std::string_view s, std::size_t chars) {
    std::size_t pos = 0;
    for (std::size_t i = 0; i < chars && pos < s.size(); ++i) pos += utf8::decode(s, pos).len;
    return pos;
}

std::string source_id(const CorpusSource& src, std::size_t line) {
    return src.path.filename().string() + ":" + std::to_string(line);
}

struct Harvester {
    std::string_view pivot;
    std::size_t k;
    const std::set<std::string>& blocklist;
    const HarvestOptions& options;
    std::set<std::string> seen;
    ContextSet out;

    bool done() const { return out.templates.size() >= k; }

    void offer(std::string_view sentence, const std::string& source) {
        const auto runs = utf8::letter_runs(sentence);
        if (runs.size() > options.max_tokens) return;
        std::size_t hit = runs.size();
        std::size_t hits = 0;
        for (std::size_t i = 0; i < runs.size(); ++i) {
            if (sentence.substr(runs[i].begin, runs[i].end - runs[i].begin) == pivot) {
                hit = i;
                ++hits;
            }
        }
        if (hits != 1) return;
        if (hit + 1 < runs.size()) {
            const auto& next = runs[hit + 1];
            const auto gap = sentence.substr(runs[hit].end, next.begin - runs[hit].end);
            const bool adjacent = !gap.empty() && std::all_of(gap.begin(), gap.end(), [](char c) {
                return is_space(static_cast<unsigned char>(c));
            });
            const auto token = sentence.substr(next.begin, next.end - next.begin);
            if (adjacent && !token.empty() && !(token[0] >= 'a' && token[0] <= 'z') &&
                blocklist.count(std::string(pivot) + " " + std::string(token))) {
                return;
            }
        }
        if (!seen.insert(std::string(sentence)).second) return;
        std::string text(sentence.substr(0, runs[hit].begin));
        text += kPlaceholder;
        text += sentence.substr(runs[hit].end);
        out.templates.push_back(make_template(std::move(text), source));
    }

    void offer_text(std::string_view text, const std::string& source) {
        for (const auto& s : split_sentences(text)) {
            if (done()) return;
            offer(s, source);
        }
    }
};

}  // namespace

std::size_t char_length(std::string_view s) {
    std::size_t n = 0;
    for (std::size_t pos = 0; pos < s.size(); ++n) pos += utf8::decode(s, pos).len;
    return n;
}

void ContextTemplate::validate() const {
    if (text.empty()) throw std::invalid_argument("context template is empty");
    const auto first = text.find(kPlaceholder);
    if (first == std::string::npos) throw std::invalid_argument("context template has no placeholder: " + text);
    if (text.find(kPlaceholder, first + 1) != std::string::npos) {
        throw std::invalid_argument("context template has more than one placeholder: " + text);
    }
    const auto b = char_length(std::string_view(text).substr(0, first));
    if (slot_begin != b || slot_end != b + char_length(kPlaceholder)) {
        throw std::invalid_argument("context template slot span does not cover the placeholder: " + text);
    }
}

ContextTemplate make_template(std::string text, std::string source) {
    ContextTemplate t{std::move(text), std::move(source), 0, 0};
    const auto pos = t.text.find(kPlaceholder);
    if (pos != std::string::npos) {
        t.slot_begin = char_length(std::string_view(t.text).substr(0, pos));
        t.slot_end = t.slot_begin + char_length(kPlaceholder);
    }
    t.validate();
    return t;
}

void ContextSet::write(const std::filesystem::path& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& t : templates) {
        nlohmann::ordered_json rec;
        rec["pivot"] = pivot;
        rec["source"] = t.source;
        rec["text"] = t.text;
        rec["slot"] = {t.slot_begin, t.slot_end};
        out << rec.dump() << '\n';
    }
}

ContextSet ContextSet::read(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    ContextSet set;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        try {
            const auto rec = nlohmann::json::parse(line);
            const auto pivot = rec.at("pivot").get<std::string>();
            if (set.templates.empty()) {
                set.pivot = pivot;
            } else if (pivot != set.pivot) {
                throw std::invalid_argument("mixed pivots '" + set.pivot + "' and '" + pivot + "'");
            }
            ContextTemplate t{rec.at("text").get<std::string>(), rec.at("source").get<std::string>(),
                              rec.at("slot").at(0).get<std::size_t>(), rec.at("slot").at(1).get<std::size_t>()};
            t.validate();
            set.templates.push_back(std::move(t));
        } catch (const std::exception& e) {
            throw ParseError(path.string(), row, e.what());
        }
    }
    return set;
}

std::vector<std::string> split_sentences(std::string_view text) {
    std::vector<std::string> out;
    auto emit = [&](std::size_t b, std::size_t e) {
        const auto s = detail::trim(text.substr(b, e - b));
        if (!s.empty()) out.emplace_back(s);
    };
    std::size_t start = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (c == '\n') {
            emit(start, i);
            start = i + 1;
        } else if ((c == '.' || c == '!' || c == '?') &&
                   (i + 1 == text.size() || is_space(static_cast<unsigned char>(text[i + 1])))) {
            emit(start, i + 1);
            start = i + 1;
        }
    }
    emit(start, text.size());
    return out;
}

ContextSet harvest(const CorpusSpec& corpus, std::string_view pivot, std::size_t k,
                   const std::set<std::string>& blocklist, const HarvestOptions& options) {
    if (k == 0) throw std::invalid_argument("harvest: k must be at least 1");
    if (pivot.empty()) throw std::invalid_argument("harvest: empty pivot");
    corpus.validate();
    Harvester h{pivot, k, blocklist, options, {}, {}};
    h.out.pivot = std::string(pivot);
    for (const auto& src : corpus.sources) {
        if (h.done()) break;
        std::ifstream in(src.path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open " + src.path.string());
        std::string line;
        std::size_t row = 0;
        while (!h.done() && std::getline(in, line)) {
            ++row;
            if (src.kind == SourceKind::PlainText) {
                h.offer_text(line, source_id(src, row));
                continue;
            }
            const auto doc = nlohmann::json::parse(line, nullptr, false);
            if (doc.is_discarded() || !doc.is_object()) continue;
            const auto it = doc.find(corpus.text_field);
            if (it == doc.end() || !it->is_string()) continue;
            h.offer_text(it->get_ref<const std::string&>(), source_id(src, row));
        }
    }
    if (!h.done()) {
        throw HarvestError("corpus '" + corpus.id + "' exhausted: found " + std::to_string(h.out.k()) +
                               " of " + std::to_string(k) + " contexts for '" + std::string(pivot) + "'",
                           h.out.k());
    }
    return std::move(h.out);
}

std::set<std::string> load_blocklist(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = detail::trim(line);
        if (!t.empty() && t[0] != '#') out.emplace(t);
    }
    return out;
}

std::string substitute(const ContextTemplate& t, std::string_view name) {
    const auto b = byte_offset(t.text, t.slot_begin);
    const auto e = byte_offset(t.text, t.slot_end);
    std::string out = t.text.substr(0, b);
    out += name;
    out += t.text.substr(e);
    return out;
}

std::string bleached_name_template(std::string_view name) {
    if (name.empty()) throw std::invalid_argument("bleached_name_template: empty name");
    return "This person's name is " + std::string(name) + ".";
}

std::string bleached_word_template(std::string_view word) {
    if (word.empty()) throw std::invalid_argument("bleached_word_template: empty word");
    return "This is " + std::string(word) + ".";
}

std::vector<ExtractorSentence> context_sentences(const ContextSet& contexts,
                                                 const std::vector<std::string>& names) {
    std::vector<ExtractorSentence> out;
    out.reserve(contexts.k() * names.size());
    for (const auto& name : names) {
        const auto len = char_length(name);
        for (const auto& t : contexts.templates) {
            out.push_back({"contexts", name, substitute(t, name), t.slot_begin, t.slot_begin + len});
        }
    }
    return out;
}

ExtractorSentence bleached_name_sentence(std::string_view name) {
    const std::size_t start = char_length("This person's name is ");
    return {"bleached", std::string(name), bleached_name_template(name), start, start + char_length(name)};
}

ExtractorSentence bleached_word_sentence(std::string_view word) {
    const std::size_t start = char_length("This is ");
    return {"bleached", std::string(word), bleached_word_template(word), start, start + char_length(word)};
}

void write_sentences(const std::filesystem::path& path, const std::vector<ExtractorSentence>& sentences) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    for (const auto& s : sentences) {
        nlohmann::ordered_json rec;
        rec["set"] = s.set;
        rec["word"] = s.word;
        rec["text"] = s.text;
        rec["start"] = s.start;
        rec["end"] = s.end;
        out << rec.dump() << '\n';
    }
}

std::vector<ExtractorSentence> read_sentences(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::vector<ExtractorSentence> out;
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (detail::trim(line).empty()) continue;
        try {
            const auto rec = nlohmann::json::parse(line);
            ExtractorSentence s{rec.at("set").get<std::string>(), rec.at("word").get<std::string>(),
                                rec.at("text").get<std::string>(), rec.at("start").get<std::size_t>(),
                                rec.at("end").get<std::size_t>()};
            if (s.start >= s.end || s.end > char_length(s.text)) {
                throw std::invalid_argument("span [" + std::to_string(s.start) + ", " + std::to_string(s.end) +
                                            ") outside the sentence");
            }
            out.push_back(std::move(s));
        } catch (const std::exception& e) {
            throw ParseError(path.string(), row, e.what());
        }
    }
    return out;
}

}  // namespace namefreq
