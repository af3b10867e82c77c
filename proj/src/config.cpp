#include "namefreq/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "detail/text.hpp"
#include "namefreq/association.hpp"

#ifndef NAMEFREQ_DATA_DIR
#define NAMEFREQ_DATA_DIR "data"
#endif

namespace namefreq {

namespace {

std::vector<std::string> list(std::string_view v, char delim = ',') {
    std::vector<std::string> out;
    for (auto part : detail::split(v, delim)) {
        const auto t = detail::trim(part);
        if (!t.empty()) out.emplace_back(t);
    }
    return out;
}

bool parse_bool(std::string_view v, const std::string& key) {
    const auto l = detail::ascii_lower(v);
    if (l == "true" || l == "yes" || l == "1") return true;
    if (l == "false" || l == "no" || l == "0") return false;
    throw std::invalid_argument(key + ": expected true or false, got '" + std::string(v) + "'");
}

std::uint64_t parse_count(std::string_view v, const std::string& key) {
    const auto n = detail::parse_u64(v);
    if (!n) throw std::invalid_argument(key + ": expected a non-negative integer, got '" + std::string(v) + "'");
    return *n;
}

bool is_json_lines(const std::filesystem::path& p) {
    const auto ext = detail::ascii_lower(p.extension().string());
    return ext == ".jsonl" || ext == ".ndjson";
}

}  // namespace

AuditConfig AuditConfig::load(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    try {
        return parse(ss.str(), std::filesystem::absolute(path).parent_path());
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path.string() + ": " + e.what());
    }
}

AuditConfig AuditConfig::parse(std::string_view text, const std::filesystem::path& base) {
    AuditConfig cfg;
    cfg.base = base;
    cfg.weat_dir = std::filesystem::path(NAMEFREQ_DATA_DIR) / "weat";
    cfg.tests = canonical_test_ids();
    cfg.out = base / "out";
    std::size_t row = 0;
    for (auto raw : detail::split(text, '\n')) {
        ++row;
        const auto line = detail::trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("line " + std::to_string(row) + ": expected key = value");
        }
        cfg.set(std::string(detail::trim(line.substr(0, eq))), std::string(detail::trim(line.substr(eq + 1))));
    }
    return cfg;
}

std::filesystem::path AuditConfig::resolve(std::string_view p) const {
    std::filesystem::path path{std::string(p)};
    return path.is_absolute() ? path : base / path;
}

ModelConfig& AuditConfig::model_entry(const std::string& id) {
    for (auto& m : models) {
        if (m.id == id) return m;
    }
    models.push_back({});
    models.back().id = id;
    return models.back();
}

CorpusSpec& AuditConfig::corpus_entry(const std::string& id) {
    for (auto& c : corpora) {
        if (c.id == id) return c;
    }
    corpora.push_back({});
    corpora.back().id = id;
    return corpora.back();
}

void AuditConfig::set(const std::string& key, const std::string& value) {
    entries[key] = value;
    if (key == "registry") {
        registry = resolve(value);
    } else if (key == "race_table") {
        race_table = resolve(value);
    } else if (key == "race_table.percent") {
        race_format.percent = parse_bool(value, key);
    } else if (key == "race_table.delimiter") {
        if (value.size() != 1 && value != "tab") throw std::invalid_argument(key + ": expected one character or 'tab'");
        race_format.delimiter = value == "tab" ? '\t' : value[0];
    } else if (key == "ssa_file") {
        ssa_file = resolve(value);
    } else if (key == "min_group_size") {
        min_group_size = parse_count(value, key);
    } else if (detail::starts_with(key, "corpus.")) {
        const auto rest = key.substr(7);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) {
            auto& c = corpus_entry(rest);
            c.sources.clear();
            for (const auto& p : list(value)) {
                const auto path = resolve(p);
                c.sources.push_back({path, is_json_lines(path) ? SourceKind::JsonLines : SourceKind::PlainText});
            }
        } else if (rest.substr(dot + 1) == "text_field") {
            corpus_entry(rest.substr(0, dot)).text_field = value;
        } else {
            throw std::invalid_argument("unknown key '" + key + "'");
        }
    } else if (detail::starts_with(key, "model.")) {
        const auto rest = key.substr(6);
        const auto dot = rest.find('.');
        if (dot == std::string::npos) throw std::invalid_argument("unknown key '" + key + "'");
        auto& m = model_entry(rest.substr(0, dot));
        const auto field = rest.substr(dot + 1);
        if (field == "tokenizer") {
            const auto colon = value.find(':');
            if (colon == std::string::npos) {
                throw std::invalid_argument(key + ": expected scheme:file[,file], e.g. wordpiece:vocab.txt");
            }
            m.scheme = parse_scheme(detail::trim(std::string_view(value).substr(0, colon)));
            m.tokenizer_files.clear();
            for (const auto& p : list(std::string_view(value).substr(colon + 1))) m.tokenizer_files.push_back(resolve(p));
        } else if (field == "manifest") {
            m.manifest = resolve(value);
        } else if (field == "frequency") {
            m.frequency_corpora = list(value, '+');
        } else if (field == "space_policy") {
            m.space_policy = parse_space_policy(value);
        } else if (field == "semantic_layer") {
            m.semantic_layer = static_cast<int>(parse_count(value, key));
        } else {
            throw std::invalid_argument("unknown key '" + key + "'");
        }
    } else if (key == "tests") {
        tests = list(value);
        for (const auto& t : tests) {
            const auto& ids = canonical_test_ids();
            if (std::find(ids.begin(), ids.end(), t) == ids.end()) {
                throw std::invalid_argument("tests: unknown test '" + t + "'");
            }
        }
    } else if (key == "weat_dir") {
        weat_dir = resolve(value);
    } else if (key == "lexicon") {
        lexicon = resolve(value);
    } else if (key == "contexts") {
        contexts = resolve(value);
    } else if (key == "contexts.corpus") {
        contexts_corpus = value;
    } else if (key == "contexts.pivot") {
        contexts_pivot = value;
    } else if (key == "contexts.k") {
        contexts_k = parse_count(value, key);
    } else if (key == "contexts.blocklist") {
        contexts_blocklist = resolve(value);
    } else if (key == "out") {
        out = resolve(value);
    } else if (key == "seed") {
        seed = parse_count(value, key);
    } else if (key == "jobs") {
        jobs = static_cast<unsigned>(std::max<std::uint64_t>(1, parse_count(value, key)));
    } else {
        throw std::invalid_argument("unknown key '" + key + "'");
    }
}

const CorpusSpec& AuditConfig::corpus(std::string_view id) const {
    for (const auto& c : corpora) {
        if (c.id == id) return c;
    }
    throw std::invalid_argument("no corpus '" + std::string(id) + "' in config");
}

const ModelConfig& AuditConfig::model(std::string_view id) const {
    for (const auto& m : models) {
        if (m.id == id) return m;
    }
    throw std::invalid_argument("no model '" + std::string(id) + "' in config");
}

std::vector<std::string> AuditConfig::model_ids() const {
    std::vector<std::string> out;
    for (const auto& m : models) out.push_back(m.id);
    return out;
}

void AuditConfig::check_paths() const {
    std::vector<std::string> missing;
    auto need = [&](const std::optional<std::filesystem::path>& p, const std::string& what) {
        if (p && !std::filesystem::exists(*p)) missing.push_back(what + ": " + p->string());
    };
    need(registry, "registry");
    need(race_table, "race_table");
    need(ssa_file, "ssa_file");
    need(lexicon, "lexicon");
    need(contexts_blocklist, "contexts.blocklist");
    for (const auto& c : corpora) {
        for (const auto& s : c.sources) need(s.path, "corpus." + c.id);
    }
    for (const auto& m : models) {
        for (const auto& f : m.tokenizer_files) need(f, "model." + m.id + ".tokenizer");
        need(m.manifest, "model." + m.id + ".manifest");
        for (const auto& c : m.frequency_corpora) {
            if (std::none_of(corpora.begin(), corpora.end(), [&](const CorpusSpec& s) { return s.id == c; })) {
                missing.push_back("model." + m.id + ".frequency: unknown corpus '" + c + "'");
            }
        }
    }
    if (!missing.empty()) {
        std::string msg = "missing inputs:";
        for (const auto& m : missing) msg += "\n  " + m;
        throw std::invalid_argument(msg);
    }
}

std::string AuditConfig::canonical() const {
    std::string out;
    for (const auto& [k, v] : entries) out += k + " = " + v + "\n";
    return out;
}

}  // namespace namefreq
