// Command-line front end for the audit pipeline.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "namefreq/audit.hpp"
#include "namefreq/synthetic.hpp"

namespace {

struct Options {
    std::string config;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> models;
    std::vector<std::string> tests;
    std::optional<unsigned> jobs;
    std::vector<std::string> overrides;
};

namefreq::AuditConfig load_config(const Options& o) {
    std::string path = o.config;
    if (path.empty()) {
        if (const char* env = std::getenv("NAMEFREQ_CONFIG")) path = env;
    }
    if (path.empty()) throw std::invalid_argument("no config: pass --config or set NAMEFREQ_CONFIG");
    auto cfg = namefreq::AuditConfig::load(path);
    for (const auto& kv : o.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("--set expects key=value, got '" + kv + "'");
        cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (!o.out.empty()) cfg.out = std::filesystem::absolute(o.out);
    if (o.seed) cfg.set("seed", std::to_string(*o.seed));
    if (o.jobs) cfg.set("jobs", std::to_string(*o.jobs));
    if (!o.tests.empty()) {
        std::string joined;
        for (const auto& t : o.tests) joined += (joined.empty() ? "" : ",") + t;
        cfg.set("tests", joined);
    }
    for (const auto& m : o.models) cfg.model(m);
    cfg.check_paths();
    return cfg;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Audit how first-name frequency shapes subword tokenization and contextual embeddings."};
    app.require_subcommand(1);
    Options o;
    app.add_option("--config", o.config, "config file (default: $NAMEFREQ_CONFIG)");
    app.add_option("--out", o.out, "output directory");
    app.add_option("--seed", o.seed, "random seed");
    app.add_option("--models", o.models, "restrict to these model ids")->delimiter(',');
    app.add_option("--tests", o.tests, "bias tests: PU25,PU8,CF,MA,SA")->delimiter(',');
    app.add_option("--jobs", o.jobs, "scanner worker threads")->check(CLI::PositiveNumber);
    app.add_option("--set", o.overrides, "override a config entry, key=value");

    struct Stage {
        const char* name;
        const char* help;
        void (namefreq::Audit::*run)();
    };
    const Stage stages[] = {
        {"registry", "build the name registry", &namefreq::Audit::cmd_registry},
        {"frequency", "count names in each corpus (table 1)", &namefreq::Audit::cmd_frequency},
        {"tokenize", "single-tokenization rates (table 2)", &namefreq::Audit::cmd_tokenize},
        {"contexts", "harvest context templates and write extractor sentences", &namefreq::Audit::cmd_contexts},
        {"bias", "ValNorm layer selection and bias-frequency correlations (table 3)", &namefreq::Audit::cmd_bias},
        {"contextualize", "self-similarity and CKA (tables 4-7)", &namefreq::Audit::cmd_contextualize},
        {"report", "run every stage and write run_manifest.json", &namefreq::Audit::cmd_report},
    };
    const Stage* chosen = nullptr;
    for (const auto& s : stages) {
        app.add_subcommand(s.name, s.help)->callback([&chosen, &s] { chosen = &s; });
    }

    std::string manifest_path;
    auto* validate = app.add_subcommand("validate", "check an embedding manifest");
    validate->add_option("manifest", manifest_path, "manifest.json")->required();

    std::string synth_dir;
    namefreq::SyntheticOptions synth;
    auto* synth_cmd = app.add_subcommand("synth", "write a seeded synthetic fixture");
    synth_cmd->add_option("dir", synth_dir, "output directory")->required();
    synth_cmd->add_option("--fixture-seed", synth.seed, "fixture seed");
    synth_cmd->add_option("--names-per-group", synth.names_per_group);
    synth_cmd->add_option("--contexts", synth.contexts);
    synth_cmd->add_option("--layers", synth.layers);
    synth_cmd->add_option("--dim", synth.dim);
    synth_cmd->add_option("--semantic-layer", synth.semantic_layer);

    CLI11_PARSE(app, argc, argv);

    try {
        if (validate->parsed()) {
            const auto n = namefreq::cmd_validate(manifest_path, std::cout);
            return n == 0 ? 0 : 1;
        }
        if (synth_cmd->parsed()) {
            const auto fx = namefreq::write_synthetic_fixture(synth_dir, synth);
            std::cout << fx.config.string() << '\n';
            return 0;
        }
        namefreq::Audit audit(load_config(o), std::cerr, o.models);
        (audit.*(chosen->run))();
        for (const auto& f : audit.outputs()) std::cout << (audit.config().out / f).string() << '\n';
    } catch (const std::exception& e) {
        std::cerr << "namefreq: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
