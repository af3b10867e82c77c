#include "namefreq/audit.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <set>

#include <json.hpp>

#include "namefreq/contexts.hpp"

namespace namefreq {

namespace {

std::string schema_comment(const std::string& name) { return "schema: " + name + " v1"; }

std::string inputs_comment(const InputDigests& d) {
    std::string s = "inputs:";
    for (const auto& [label, digest] : d) s += " " + label + "=" + digest;
    return s;
}

std::string p_cell(const SpearmanResult& r) { return cell(r.log10_p); }

std::vector<std::string> correlation_cells(const std::optional<SpearmanResult>& r) {
    if (!r) return {kMissingCell, kMissingCell, kMissingCell};
    return {cell(r->rho), p_cell(*r), std::to_string(r->n)};
}

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

const TableSchema kValnormSchema{"valnorm_scores.tsv", "valnorm_scores", 1, {"model", "layer", "valnorm", "semantic"}};

}  // namespace

Audit::Audit(AuditConfig config, std::ostream& log, std::vector<std::string> models)
    : config_(std::move(config)), log_(log), model_filter_(std::move(models)) {
    for (const auto& m : model_filter_) config_.model(m);  // throws for unknown ids
    config_.check_paths();
}

std::vector<const ModelConfig*> Audit::selected_models() const {
    std::vector<const ModelConfig*> out;
    for (const auto& m : config_.models) {
        if (model_filter_.empty() ||
            std::find(model_filter_.begin(), model_filter_.end(), m.id) != model_filter_.end()) {
            out.push_back(&m);
        }
    }
    return out;
}

std::filesystem::path Audit::output(const std::string& name) {
    std::filesystem::create_directories(config_.out);
    if (std::find(outputs_.begin(), outputs_.end(), name) == outputs_.end()) outputs_.push_back(name);
    return config_.out / name;
}

void Audit::emit(const Table& table, bool text_mirror) {
    table.write_tsv(output(table.schema->file));
    if (text_mirror) {
        auto txt = table.schema->file;
        txt.replace(txt.size() - 4, 4, ".txt");
        table.write_text(output(txt));
    }
    log_ << "wrote " << (config_.out / table.schema->file).string() << '\n';
}

// ---------------------------------------------------------------------------
// Input digests

std::string Audit::digest(const std::string& label) {
    if (const auto it = digest_.find(label); it != digest_.end()) return it->second;
    std::vector<std::filesystem::path> files;
    auto add = [&](const std::optional<std::filesystem::path>& p) {
        if (p) files.push_back(*p);
    };
    if (label == "registry") {
        if (config_.registry) {
            add(config_.registry);
        } else {
            add(config_.race_table);
            add(config_.ssa_file);
        }
    } else if (label == "lexicon") {
        add(config_.lexicon);
    } else if (label == "weat") {
        std::set<std::string> names = {"pleasant25", "unpleasant25"};
        for (const auto& spec : load_canonical_tests(config_.weat_dir)) {
            if (std::find(config_.tests.begin(), config_.tests.end(), spec.id) == config_.tests.end()) continue;
            names.insert(spec.words.label_a);
            names.insert(spec.words.label_b);
        }
        for (const auto& n : names) files.push_back(config_.weat_dir / (n + ".txt"));
    } else if (label == "contexts") {
        add(config_.contexts);
    } else if (label.rfind("corpus.", 0) == 0) {
        for (const auto& s : config_.corpus(label.substr(7)).sources) files.push_back(s.path);
    } else if (label.rfind("tokenizer.", 0) == 0) {
        for (const auto& f : config_.model(label.substr(10)).tokenizer_files) files.push_back(f);
    } else if (label.rfind("manifest.", 0) == 0) {
        add(config_.model(label.substr(9)).manifest);
    } else {
        throw std::logic_error("unknown input label " + label);
    }
    std::string listing;
    for (const auto& f : files) {
        auto& d = file_digest_[f.string()];
        if (d.empty()) d = std::filesystem::exists(f) ? sha256_file(f) : std::string(64, '0');
        listing += f.filename().string() + " " + d + "\n";
    }
    return digest_[label] = sha256_hex(listing);
}

InputDigests Audit::digests(const std::vector<std::string>& labels) {
    InputDigests out;
    for (const auto& l : labels) out[l] = digest(l);
    return out;
}

std::vector<std::string> Audit::registry_labels() const { return {"registry"}; }

std::vector<std::string> Audit::model_labels(const ModelConfig& m, bool embeddings) {
    std::vector<std::string> out = {"registry", "tokenizer." + m.id};
    const auto corpora = m.frequency_corpora.empty() ? [&] {
        std::vector<std::string> ids;
        for (const auto& c : config_.corpora) ids.push_back(c.id);
        return ids;
    }()
                                                     : m.frequency_corpora;
    for (const auto& c : corpora) out.push_back("corpus." + c);
    if (embeddings) {
        out.push_back("manifest." + m.id);
        if (!m.semantic_layer && config_.lexicon) out.push_back("lexicon");
        out.push_back("weat");
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shared results

const Registry& Audit::registry() {
    if (registry_) return *registry_;
    if (config_.registry) {
        registry_ = Registry::read(*config_.registry);
    } else if (config_.race_table && config_.ssa_file) {
        registry_ = cross_reference(load_race_table(*config_.race_table, config_.race_format),
                                    load_ssa_year(*config_.ssa_file), config_.min_group_size);
    } else {
        throw std::invalid_argument("config needs 'registry' or both 'race_table' and 'ssa_file'");
    }
    if (registry_->empty()) throw std::invalid_argument("name registry is empty");
    log_ << "registry: " << registry_->size() << " names\n";
    return *registry_;
}

const FrequencyTable& Audit::corpus_frequency(const std::string& corpus_id) {
    if (const auto it = corpus_freq_.find(corpus_id); it != corpus_freq_.end()) return it->second;
    const auto names = registry().names();
    const auto report = scan(config_.corpus(corpus_id), names, {config_.jobs, 1 << 20});
    for (const auto& w : report.warnings) log_ << "warning: corpus " << corpus_id << ": " << w << '\n';
    log_ << "scanned corpus " << corpus_id << ": " << report.table.bytes_scanned << " bytes in " << report.seconds
         << " s (" << report.megabytes_per_second() << " MB/s)\n";
    return corpus_freq_[corpus_id] = report.table;
}

const FrequencyTable& Audit::model_frequency(const ModelConfig& model) {
    if (const auto it = model_freq_.find(model.id); it != model_freq_.end()) return it->second;
    std::vector<std::string> ids = model.frequency_corpora;
    if (ids.empty()) {
        for (const auto& c : config_.corpora) ids.push_back(c.id);
    }
    if (ids.empty()) throw std::invalid_argument("model " + model.id + ": no corpora configured for frequency");
    std::vector<FrequencyTable> tables;
    for (const auto& id : ids) tables.push_back(corpus_frequency(id));
    return model_freq_[model.id] = merge(tables);
}

const SubwordVocab& Audit::vocab(const ModelConfig& model) {
    if (const auto it = vocab_.find(model.id); it != vocab_.end()) return it->second;
    if (model.tokenizer_files.empty()) throw std::invalid_argument("model " + model.id + ": no tokenizer configured");
    return vocab_.emplace(model.id, load_pretrained(model.tokenizer_files, model.scheme)).first->second;
}

SpacePolicy Audit::space_policy(const ModelConfig& model) {
    return model.space_policy.value_or(default_space_policy(vocab(model)));
}

const Manifest& Audit::manifest(const ModelConfig& model) {
    if (const auto it = manifest_.find(model.id); it != manifest_.end()) return it->second;
    if (!model.manifest) {
        throw std::invalid_argument("model " + model.id + ": no embedding manifest configured (set model." + model.id +
                                    ".manifest)");
    }
    return manifest_.emplace(model.id, Manifest::read(*model.manifest)).first->second;
}

std::map<std::string, Vector> Audit::bleached_vectors(const ModelConfig& model, int layer) {
    const auto& m = manifest(model);
    std::map<std::string, Vector> out;
    for (const auto& e : m.entries) {
        if (e.set != "bleached") continue;
        const auto pooled = pooled_view(m.load(e, layer), Pooling::Mean);
        out[e.word] = pooled.row(0).transpose();
    }
    return out;
}

std::vector<std::string> Audit::attribute_words(bool all_tests) {
    std::vector<std::string> out;
    std::set<std::string> seen;
    auto add = [&](const std::vector<std::string>& ws) {
        for (const auto& w : ws) {
            if (seen.insert(w).second) out.push_back(w);
        }
    };
    for (const auto& spec : load_canonical_tests(config_.weat_dir)) {
        const bool valence = spec.id == "PU25";
        if (all_tests || valence ||
            std::find(config_.tests.begin(), config_.tests.end(), spec.id) != config_.tests.end()) {
            add(spec.words.a);
            add(spec.words.b);
        }
    }
    return out;
}

const std::map<int, double>& Audit::valnorm_scores(const ModelConfig& model) {
    if (const auto it = valnorm_.find(model.id); it != valnorm_.end()) return it->second;
    if (!config_.lexicon) {
        throw std::invalid_argument("model " + model.id + ": ValNorm needs a 'lexicon' (or set model." + model.id +
                                    ".semantic_layer)");
    }
    const auto lexicon = load_lexicon(*config_.lexicon);
    const auto tests = load_canonical_tests(config_.weat_dir);
    const auto& valence = tests.front().words;  // PU25
    std::map<int, std::map<std::string, Vector>> layers;
    for (int l : manifest(model).layers) layers[l] = bleached_vectors(model, l);
    return valnorm_[model.id] = valnorm(layers, lexicon, valence);
}

int Audit::semantic_layer(const ModelConfig& model) {
    if (model.semantic_layer) return *model.semantic_layer;
    return select_semantic_layer(valnorm_scores(model));
}

ReportingLayers Audit::reporting_layers(const ModelConfig& model) {
    const auto& m = manifest(model);
    ReportingLayers r;
    r.semantic = semantic_layer(model);
    r.output = m.max_layer();
    for (const auto& [role, layer] : r.named()) {
        if (std::find(m.layers.begin(), m.layers.end(), layer) == m.layers.end()) {
            throw std::invalid_argument("model " + model.id + ": " + role + " layer " + std::to_string(layer) +
                                        " not in manifest");
        }
    }
    return r;
}

// ---------------------------------------------------------------------------
// Stages

void Audit::cmd_registry() {
    const auto& reg = registry();
    reg.write(output("registry.tsv"), {schema_comment("registry"), inputs_comment(digests(registry_labels()))});
    log_ << "wrote " << (config_.out / "registry.tsv").string() << '\n';
}

void Audit::cmd_frequency() {
    const auto& reg = registry();
    if (config_.corpora.empty()) throw std::invalid_argument("config lists no corpora");
    Table t{&report_schema("median_frequency"), digests(registry_labels()), {}};
    for (const auto& c : config_.corpora) {
        const auto& table = corpus_frequency(c.id);
        t.inputs["corpus." + c.id] = digest("corpus." + c.id);
        table.write(output("frequency_" + c.id + ".tsv"),
                    {schema_comment("name_frequency"),
                     inputs_comment(digests({"registry", "corpus." + c.id}))});
        std::map<DemographicGroup, std::vector<double>> values;
        for (const auto& r : reg.records()) {
            if (r.group) values[*r.group].push_back(static_cast<double>(table.count(r.name)));
        }
        std::vector<std::string> row = {c.id};
        for (auto g : kReportGroups) {
            const auto it = values.find(g);
            row.push_back(it == values.end() ? kMissingCell : cell(median(it->second)));
        }
        t.add(std::move(row));
    }
    emit(t);
}

void Audit::cmd_tokenize() {
    const auto& reg = registry();
    Table t{&report_schema("single_tokenization"), {}, {}};
    for (const auto* m : selected_models()) {
        const auto& v = vocab(*m);
        const auto policy = space_policy(*m);
        const auto& freq = model_frequency(*m);
        for (const auto& [k, d] : digests(model_labels(*m, false))) t.inputs[k] = d;
        std::map<DemographicGroup, std::pair<std::size_t, std::size_t>> tally;
        std::vector<double> f;
        std::vector<double> flag;
        for (const auto& r : reg.records()) {
            const bool singly = tokenize_word(r.name, v, policy).singly;
            if (r.group) {
                auto& [s, n] = tally[*r.group];
                s += singly;
                ++n;
            }
            f.push_back(static_cast<double>(freq.count(r.name)));
            flag.push_back(singly ? 1.0 : 0.0);
        }
        std::vector<std::string> row = {m->id};
        for (auto g : kReportGroups) {
            const auto it = tally.find(g);
            row.push_back(it == tally.end() ? kMissingCell
                                            : cell(static_cast<double>(it->second.first) /
                                                   static_cast<double>(it->second.second)));
        }
        std::optional<SpearmanResult> corr;
        try {
            corr = spearman(f, flag);
        } catch (const StatsError& e) {
            log_ << "model " << m->id << ": no frequency/single-tokenization correlation: " << e.what() << '\n';
        }
        for (auto& c : correlation_cells(corr)) row.push_back(std::move(c));
        t.add(std::move(row));
    }
    if (t.rows.empty()) throw std::invalid_argument("no models selected");
    emit(t);
}

void Audit::cmd_contexts() {
    const auto& reg = registry();
    ContextSet set;
    if (config_.contexts) {
        set = ContextSet::read(*config_.contexts);
        log_ << "read " << set.k() << " contexts from " << config_.contexts->string() << '\n';
    } else {
        if (config_.corpora.empty()) throw std::invalid_argument("config lists no corpora to harvest contexts from");
        const auto& corpus =
            config_.contexts_corpus.empty() ? config_.corpora.front() : config_.corpus(config_.contexts_corpus);
        const auto blocklist =
            config_.contexts_blocklist ? load_blocklist(*config_.contexts_blocklist) : std::set<std::string>{};
        set = harvest(corpus, config_.contexts_pivot, config_.contexts_k, blocklist);
        log_ << "harvested " << set.k() << " contexts for " << set.pivot << " from corpus " << corpus.id << '\n';
    }
    set.write(output("contexts.jsonl"));
    auto sentences = context_sentences(set, reg.names());
    for (const auto& n : reg.names()) sentences.push_back(bleached_name_sentence(n));
    std::vector<std::string> words;
    if (config_.lexicon) {
        for (const auto& [w, r] : load_lexicon(*config_.lexicon)) words.push_back(w);
    }
    for (const auto& w : attribute_words(true)) words.push_back(w);
    std::set<std::string> seen;
    for (const auto& w : words) {
        if (seen.insert(w).second) sentences.push_back(bleached_word_sentence(w));
    }
    write_sentences(output("sentences.jsonl"), sentences);
    log_ << "wrote " << sentences.size() << " extractor sentences\n";
}

void Audit::cmd_bias() {
    const auto& reg = registry();
    const auto tests = load_canonical_tests(config_.weat_dir);
    Table t{&report_schema("bias_frequency"), {}, {}};
    Table vt{&kValnormSchema, {}, {}};
    for (const auto* m : selected_models()) {
        if (!m->manifest && model_filter_.empty()) {
            log_ << "model " << m->id << ": no manifest, skipped for bias\n";
            continue;
        }
        manifest(*m);
        for (const auto& [k, d] : digests(model_labels(*m, true))) {
            t.inputs[k] = d;
            vt.inputs[k] = d;
        }
        const int layer = semantic_layer(*m);
        if (config_.lexicon) {
            for (const auto& [l, score] : valnorm_scores(*m)) {
                vt.add({m->id, std::to_string(l), cell(score), l == layer ? "yes" : "no"});
            }
        }
        const auto vectors = bleached_vectors(*m, layer);
        const auto& freq = model_frequency(*m);
        for (const auto& spec : tests) {
            if (std::find(config_.tests.begin(), config_.tests.end(), spec.id) == config_.tests.end()) continue;
            const auto sets = embed(spec.words, vectors);
            const auto scores = name_bias_scores(reg, vectors, sets, spec);
            std::optional<SpearmanResult> corr;
            try {
                corr = bias_frequency_correlation(scores, freq);
            } catch (const StatsError& e) {
                log_ << "model " << m->id << ", test " << spec.id << ": " << e.what() << '\n';
            }
            std::vector<std::string> row = {spec.id, m->id, std::to_string(layer)};
            for (auto& c : correlation_cells(corr)) row.push_back(std::move(c));
            t.add(std::move(row));
        }
    }
    if (t.rows.empty()) throw std::invalid_argument("no model with an embedding manifest selected");
    if (!vt.rows.empty()) emit(vt, false);
    emit(t);
}

void Audit::cmd_contextualize() {
    const auto& reg = registry();
    Table t4{&report_schema("self_similarity_frequency"), {}, {}};
    Table t5{&report_schema("self_similarity_tokenization"), {}, {}};
    Table t6{&report_schema("cka_frequency"), {}, {}};
    Table t7{&report_schema("cka_tokenization"), {}, {}};
    for (const auto* m : selected_models()) {
        if (!m->manifest && model_filter_.empty()) {
            log_ << "model " << m->id << ": no manifest, skipped for contextualization\n";
            continue;
        }
        const auto& man = manifest(*m);
        for (const auto& [k, d] : digests(model_labels(*m, true))) {
            for (auto* t : {&t4, &t5, &t6, &t7}) t->inputs[k] = d;
        }
        const auto layers = reporting_layers(*m);
        std::vector<int> wanted = {0};
        for (const char* role : kReportingLayerNames) wanted.push_back(layers.named().at(role));
        std::sort(wanted.begin(), wanted.end());
        wanted.erase(std::unique(wanted.begin(), wanted.end()), wanted.end());

        const auto& v = vocab(*m);
        const auto policy = space_policy(*m);
        const auto& freq = model_frequency(*m);
        std::map<std::string, std::map<std::string, double>> self_sim;  // role -> name -> value
        std::map<std::string, std::map<std::string, double>> cka;
        std::map<std::string, bool> singly;
        std::size_t unk = 0;
        std::size_t degenerate = 0;
        for (const auto& r : reg.records()) {
            const auto tok = tokenize_word(r.name, v, policy);
            if (tok.unk) {
                ++unk;
                continue;
            }
            singly[r.name] = tok.singly;
            const auto* entry = man.find("contexts", r.name);
            if (!entry) {
                throw EmbeddingError("model " + m->id + ": manifest has no context embeddings for name '" + r.name +
                                     "'");
            }
            const auto pooled = man.load_pooled(*entry, wanted, Pooling::Concat);
            for (const char* role : kReportingLayerNames) {
                const int l = layers.named().at(role);
                self_sim[role][r.name] = self_similarity(pooled.at(l));
                try {
                    cka[role][r.name] = linear_cka(pooled.at(0), pooled.at(l));
                } catch (const MetricError&) {
                    ++degenerate;
                }
            }
        }
        if (unk) log_ << "model " << m->id << ": " << unk << " names contain unknown subtokens, excluded\n";
        if (degenerate) log_ << "model " << m->id << ": " << degenerate << " degenerate CKA evaluations skipped\n";

        for (const char* role : kReportingLayerNames) {
            const auto layer = std::to_string(layers.named().at(role));
            auto frequency_row = [&](Table& t, const std::map<std::string, double>& values) {
                std::optional<SpearmanResult> corr;
                try {
                    corr = metric_frequency_correlation(values, freq);
                } catch (const StatsError& e) {
                    log_ << "model " << m->id << ", " << role << " layer: " << e.what() << '\n';
                }
                std::vector<std::string> row = {m->id, role, layer};
                for (auto& c : correlation_cells(corr)) row.push_back(std::move(c));
                t.add(std::move(row));
            };
            auto partition_row = [&](Table& t, const std::map<std::string, double>& values) {
                const auto means = mean_by_tokenization(values, singly);
                t.add({m->id, role, layer, cell(means.single), cell(means.multi), std::to_string(means.single_count),
                       std::to_string(means.multi_count)});
            };
            frequency_row(t4, self_sim[role]);
            partition_row(t5, self_sim[role]);
            frequency_row(t6, cka[role]);
            partition_row(t7, cka[role]);
        }

        auto scatter = [&](const std::string& metric, std::map<std::string, std::map<std::string, double>>& values) {
            std::ofstream out(output("scatter_" + metric + "_" + m->id + ".csv"), std::ios::binary);
            out << "name,group,frequency,singly";
            for (const char* role : kReportingLayerNames) out << ',' << role;
            out << '\n';
            for (const auto& r : reg.records()) {
                const auto s = singly.find(r.name);
                out << csv_escape(r.name) << ',' << (r.group ? to_string(*r.group) : "-") << ','
                    << freq.count(r.name) << ',' << (s == singly.end() ? kMissingCell : s->second ? "1" : "0");
                for (const char* role : kReportingLayerNames) {
                    const auto it = values[role].find(r.name);
                    out << ',' << (it == values[role].end() ? kMissingCell : cell(it->second));
                }
                out << '\n';
            }
        };
        scatter("self_similarity", self_sim);
        scatter("cka", cka);
    }
    if (t4.rows.empty()) throw std::invalid_argument("no model with an embedding manifest selected");
    emit(t4);
    emit(t5);
    emit(t6);
    emit(t7);
}

void Audit::cmd_report() {
    const std::filesystem::path manifest_path = config_.out / "run_manifest.json";
    std::map<std::string, std::string> previous;
    if (std::filesystem::exists(manifest_path)) {
        try {
            std::ifstream in(manifest_path);
            const auto doc = nlohmann::json::parse(in);
            previous = doc.at("inputs").get<std::map<std::string, std::string>>();
        } catch (const std::exception&) {
            log_ << "warning: previous run manifest unreadable, change detection skipped\n";
        }
    }

    std::vector<std::string> stages;
    auto stage = [&](const char* name, auto&& fn) {
        try {
            fn();
            stages.push_back(name);
        } catch (const std::exception& e) {
            std::string done;
            for (const auto& s : stages) done += (done.empty() ? "" : ", ") + s;
            throw std::runtime_error(std::string("report: stage '") + name + "' failed: " + e.what() +
                                     " (completed stages: " + (done.empty() ? "none" : done) +
                                     "; their outputs are in " + config_.out.string() + ")");
        }
    };
    const bool any_manifest = std::any_of(config_.models.begin(), config_.models.end(),
                                          [](const ModelConfig& m) { return m.manifest.has_value(); });
    stage("registry", [&] { cmd_registry(); });
    stage("frequency", [&] { cmd_frequency(); });
    stage("tokenize", [&] { cmd_tokenize(); });
    if (config_.contexts || !config_.contexts_corpus.empty()) stage("contexts", [&] { cmd_contexts(); });
    if (any_manifest) {
        stage("bias", [&] { cmd_bias(); });
        stage("contextualize", [&] { cmd_contextualize(); });
    }

    nlohmann::ordered_json doc;
    doc["tool"] = "namefreq";
    doc["version"] = kToolVersion;
    doc["config_sha256"] = sha256_hex(config_.canonical());
    doc["seed"] = config_.seed;
    doc["stages"] = stages;
    std::vector<std::string> labels = {"registry"};
    for (const auto& c : config_.corpora) labels.push_back("corpus." + c.id);
    for (const auto* m : selected_models()) {
        labels.push_back("tokenizer." + m->id);
        if (m->manifest) labels.push_back("manifest." + m->id);
    }
    if (config_.lexicon) labels.push_back("lexicon");
    if (any_manifest) labels.push_back("weat");
    if (config_.contexts) labels.push_back("contexts");
    const auto inputs = digests(labels);
    doc["inputs"] = inputs;
    std::vector<std::string> changed;
    for (const auto& [label, d] : inputs) {
        const auto it = previous.find(label);
        if (it != previous.end() && it->second != d) changed.push_back(label);
    }
    doc["changed_inputs"] = changed;
    auto files = outputs_;
    std::sort(files.begin(), files.end());
    nlohmann::ordered_json out = nlohmann::ordered_json::object();
    for (const auto& f : files) out[f] = sha256_file(config_.out / f);
    doc["outputs"] = out;
    std::ofstream o(output("run_manifest.json"), std::ios::binary);
    o << doc.dump(2) << '\n';
    for (const auto& c : changed) log_ << "input changed since the previous run: " << c << '\n';
    log_ << "wrote " << manifest_path.string() << '\n';
}

std::size_t cmd_validate(const std::filesystem::path& path, std::ostream& out) {
    const auto m = Manifest::read(path);
    const auto violations = validate(m);
    for (const auto& v : violations) out << "violation: " << v << '\n';
    out << path.string() << ": " << m.entries.size() << " entries, " << m.layers.size() << " layers, "
        << violations.size() << " violations\n";
    return violations.size();
}

}  // namespace namefreq
