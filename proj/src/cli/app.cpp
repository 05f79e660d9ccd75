#include "ghabuse/cli/app.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ghabuse/cli/run_config.hpp"
#include "ghabuse/error.hpp"
#include "ghabuse/eval/evaluate.hpp"
#include "ghabuse/ingest/store.hpp"

namespace ghabuse::cli {
namespace {

struct Flags {
    std::string config;
    std::string out;
    std::string format;
    std::string detectors;
    std::optional<std::uint64_t> seed;
    std::string token_env;
    std::string references;
    std::string background;
    std::string spam_model;
};

RunConfig resolve_config(const Flags& f) {
    RunConfig c;
    if (!f.config.empty()) c = load_run_config(f.config);
    if (!f.out.empty()) c.out = f.out;
    if (!f.format.empty()) c.format = eval::parse_report_format(f.format);
    if (!f.detectors.empty()) c.detectors = parse_detector_list(f.detectors);
    if (f.seed) c.seed = *f.seed;
    if (!f.token_env.empty()) c.token_env = f.token_env;
    if (!f.references.empty()) c.references = f.references;
    if (!f.background.empty()) c.background = f.background;
    if (!f.spam_model.empty()) c.spam_model = f.spam_model;
    c.thresholds.validate();
    return c;
}

void emit(const RunConfig& cfg, const std::string& text, std::ostream& out) {
    if (!cfg.out) {
        out << text;
        out.flush();
        return;
    }
    std::ofstream file(*cfg.out, std::ios::binary | std::ios::trunc);
    if (!file) throw InvalidInput("cannot write " + cfg.out->string());
    file << text;
    if (!file) throw InvalidInput("cannot write " + cfg.out->string());
}

bool selected(const RunConfig& cfg, Detector d) {
    return cfg.detectors.empty() || std::find(cfg.detectors.begin(), cfg.detectors.end(), d) != cfg.detectors.end();
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + "\"";
}

std::string evidence_text(const DetectionVerdict& v) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& e : v.evidence)
        arr.push_back({{"clause", e.clause}, {"observed", e.observed}, {"threshold", e.threshold}, {"holds", e.holds}});
    return arr.dump();
}

std::string render_verdicts(const std::vector<DetectionVerdict>& verdicts, eval::ReportFormat format) {
    std::ostringstream out;
    switch (format) {
        case eval::ReportFormat::jsonl:
            for (const auto& v : verdicts) out << to_json_line(v) << "\n";
            break;
        case eval::ReportFormat::csv:
            out << "detector,subject,flagged,indeterminate,evidence\r\n";
            for (const auto& v : verdicts)
                out << to_string(v.detector) << ',' << csv_field(v.subject) << ',' << (v.flagged ? "true" : "false")
                    << ',' << (v.indeterminate ? "true" : "false") << ',' << csv_field(evidence_text(v)) << "\r\n";
            break;
        case eval::ReportFormat::markdown:
            out << "| detector | subject | flagged | indeterminate | evidence |\n|---|---|---|---|---|\n";
            for (const auto& v : verdicts) {
                std::string ev;
                for (char c : evidence_text(v)) {
                    if (c == '|') ev += '\\';
                    ev += c;
                }
                out << "| " << to_string(v.detector) << " | " << v.subject << " | " << (v.flagged ? "yes" : "no")
                    << " | " << (v.indeterminate ? "yes" : "no") << " | `" << ev << "` |\n";
            }
            break;
    }
    return out.str();
}

/// Artifact availability for scan: explicitly selected detectors must have
/// their inputs, implicitly selected ones are skipped with a note.
bool artifact_ready(const RunConfig& cfg, Detector d, bool have, const char* flag, std::ostream& err) {
    if (!selected(cfg, d)) return false;
    if (have) return true;
    if (!cfg.detectors.empty())
        throw PreconditionViolation(std::string(to_string(d)) + " needs " + flag);
    err << "ghabuse: note: " << to_string(d) << " skipped (no " << flag << ")\n";
    return false;
}

int cmd_scan(const RunConfig& cfg, const std::vector<std::string>& paths, std::ostream& out, std::ostream& err) {
    std::vector<Snapshot> batch;
    for (const auto& p : paths) batch.push_back(ingest::load_snapshot(p));
    std::vector<RepoSnapshot> repos;
    std::vector<UserSnapshot> users;
    for (const auto& s : batch) {
        if (const auto* r = std::get_if<RepoSnapshot>(&s)) repos.push_back(*r);
        else users.push_back(std::get<UserSnapshot>(s));
    }

    std::vector<detectors::PopularReference> refs;
    const bool run_typo = artifact_ready(cfg, Detector::typo_squatting, cfg.references.has_value(), "--references", err);
    if (run_typo) refs = eval::read_references(*cfg.references);
    std::optional<textkit::SpamModel> spam;
    const bool run_spam = artifact_ready(cfg, Detector::issue_spam, cfg.spam_model.has_value(), "--spam-model", err);
    if (run_spam) spam = eval::load_spam_model(*cfg.spam_model);
    std::vector<textkit::Corpus::Document> background;
    if (cfg.background) background = eval::read_background(*cfg.background);
    const auto corpus = detectors::build_readme_corpus(repos, background);
    const auto& th = cfg.thresholds;

    std::vector<DetectionVerdict> verdicts;
    auto append = [&](std::vector<DetectionVerdict> vs) {
        for (auto& v : vs) verdicts.push_back(std::move(v));
    };
    for (const auto& s : batch) {
        if (const auto* repo = std::get_if<RepoSnapshot>(&s)) {
            if (selected(cfg, Detector::fake_stars)) {
                std::vector<UserSnapshot> gazers;
                for (const auto& u : users)
                    if (std::any_of(repo->star_events.begin(), repo->star_events.end(),
                                    [&](const StarEvent& e) { return detectors::iequals(e.user_login, u.login); }))
                        gazers.push_back(u);
                const auto result = detectors::detect_fake_stars(*repo, gazers, th);
                verdicts.push_back(detectors::summarize_fake_stars(*repo, result, cfg.fake_stars_repo_fraction));
            }
            if (selected(cfg, Detector::automatic_updates)) verdicts.push_back(detectors::detect_automatic_updates(*repo, th));
            if (selected(cfg, Detector::keyword_stuffing))
                verdicts.push_back(detectors::detect_keyword_stuffing(*repo, corpus, th));
            if (run_typo) append(detectors::detect_typo_squatting(*repo, refs, th));
            if (selected(cfg, Detector::spoofed_contributor))
                for (const auto& u : users)
                    if (!detectors::attributed_commits(*repo, u.login).empty())
                        verdicts.push_back(detectors::detect_spoofed_contributor(*repo, u, th));
            if (run_spam) append(detectors::detect_issue_spam(*repo, spam->classifier, spam->tfidf, th));
        } else {
            const auto& user = std::get<UserSnapshot>(s);
            if (selected(cfg, Detector::reputation_farming))
                verdicts.push_back(detectors::detect_reputation_farming(user, repos, th));
            if (selected(cfg, Detector::fake_stats)) verdicts.push_back(detectors::detect_fake_stats(user, th));
        }
    }
    emit(cfg, render_verdicts(verdicts, cfg.format), out);
    const bool any = std::any_of(verdicts.begin(), verdicts.end(), [](const auto& v) { return v.flagged; });
    return any ? kExitFlagged : kExitClean;
}

int cmd_eval(const RunConfig& cfg, const std::string& manifest, const std::string& plot_path, std::ostream& out) {
    auto instances = eval::load_instances(manifest);
    std::erase_if(instances, [&](const auto& i) { return !selected(cfg, i.meta.subcategory); });
    const auto dir = std::filesystem::path(manifest).parent_path();
    eval::EvalArtifacts artifacts;
    artifacts.references = eval::read_references(cfg.references.value_or(dir / "popular_references.jsonl"));
    artifacts.background = eval::read_background(cfg.background.value_or(dir / "background_readmes.jsonl"));
    const auto model_path = cfg.spam_model.value_or(dir / "spam_model.json");
    const bool needs_model = std::any_of(instances.begin(), instances.end(),
                                         [](const auto& i) { return i.meta.subcategory == Detector::issue_spam; });
    if (needs_model) artifacts.spam_model = eval::load_spam_model(model_path);
    const auto result = eval::evaluate(instances, cfg.thresholds, artifacts, {cfg.fake_stars_repo_fraction});
    if (!plot_path.empty()) {
        std::ofstream plot(plot_path, std::ios::binary | std::ios::trunc);
        if (!plot) throw InvalidInput("cannot write " + plot_path);
        plot << eval::emit_plot_data(result.rows);
    }
    emit(cfg, eval::emit_report(result.rows, cfg.format), out);
    return kExitClean;
}

int cmd_fetch(const RunConfig& cfg, const std::string& kind, const std::string& name, const ingest::RepoLimits& rl,
              const ingest::UserLimits& ul, const std::string& replay, const std::string& now, std::ostream& out,
              std::ostream& err) {
    if (kind != "repo" && kind != "user") throw InvalidInput("fetch kind must be 'repo' or 'user', got '" + kind + "'");
    auto client_cfg = cfg.client;
    if (const char* tok = std::getenv(cfg.token_env.c_str()); tok && *tok) client_cfg.auth_token = tok;
    client_cfg.validate();
    std::shared_ptr<ingest::Transport> transport;
    if (!replay.empty()) transport = ingest::ReplayTransport::from_file(replay);
    else transport = ingest::make_http_transport(client_cfg.base_url);
    ingest::Clock clock = ingest::system_clock();
    if (!now.empty()) {
        const auto fixed = parse_iso8601(now);
        clock = [fixed] { return fixed; };
    }
    ingest::ApiClient client(client_cfg, transport, clock);
    Snapshot snap;
    ingest::FetchReport report;
    if (kind == "repo") std::tie(snap, report) = ingest::fetch_repo_snapshot(client, name, rl);
    else std::tie(snap, report) = ingest::fetch_user_snapshot(client, name, ul);
    for (const auto& w : report.warnings) err << "ghabuse: warning: " << w << "\n";
    if (report.truncated) err << "ghabuse: warning: " << name << " was truncated at the fetch limits\n";
    emit(cfg, dump_snapshot(snap), out);
    return kExitClean;
}

int cmd_gen_fixtures(const RunConfig& cfg, const std::string& out_dir, std::int64_t positives, std::int64_t negatives,
                     std::ostream& out) {
    auto counts = eval::default_counts();
    if (positives > 0 || negatives > 0) {
        if (positives < 1 || negatives < 1) throw InvalidInput("--positives and --negatives must both be >= 1");
        for (auto& c : counts) c = {positives, negatives};
    }
    const auto g = eval::generate_fixture_corpus(cfg.seed, counts, cfg.thresholds, out_dir);
    std::int64_t pos = 0;
    for (const auto& i : g.instances) pos += i.label;
    nlohmann::ordered_json j;
    j["instances"] = g.instances.size();
    j["positives"] = pos;
    j["negatives"] = static_cast<std::int64_t>(g.instances.size()) - pos;
    j["files_written"] = g.files_written;
    emit(cfg, j.dump() + "\n", out);
    return kExitClean;
}

int cmd_train_spam(const RunConfig& cfg, const std::string& corpus, const std::string& model_out,
                   const textkit::TrainOptions& base, std::ostream& out) {
    const auto data = eval::read_labeled_texts(corpus);
    std::vector<std::string> texts;
    std::vector<int> labels;
    for (const auto& d : data) {
        texts.push_back(d.text);
        labels.push_back(d.label);
    }
    auto opts = base;
    opts.seed = cfg.seed;
    const auto model = textkit::train_spam_model(texts, labels, opts);
    std::int64_t correct = 0;
    for (std::size_t i = 0; i < texts.size(); ++i)
        correct += (model.score(texts[i]) >= model.classifier.threshold) == (labels[i] == 1);
    eval::store_spam_model(model_out, model);
    nlohmann::ordered_json j;
    j["examples"] = texts.size();
    j["vocabulary"] = model.tfidf.dim();
    j["train_accuracy"] = static_cast<double>(correct) / static_cast<double>(texts.size());
    emit(cfg, j.dump() + "\n", out);
    return kExitClean;
}

std::string one_line(std::string s) {
    std::replace(s.begin(), s.end(), '\n', ' ');
    std::replace(s.begin(), s.end(), '\r', ' ');
    return s;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Detects GitHub platform abuse in repository and account snapshots", "ghabuse"};
    app.require_subcommand(1);
    app.fallthrough();
    Flags f;
    app.add_option("--config", f.config, "JSON or key = value config file");
    app.add_option("--out", f.out, "Write output here instead of stdout");
    app.add_option("--format", f.format, "jsonl, csv or markdown");
    app.add_option("--detectors", f.detectors, "Comma-separated detector names");
    app.add_option("--seed", f.seed, "Seed for every random choice");
    app.add_option("--token-env", f.token_env, "Environment variable holding the API token");
    app.add_option("--references", f.references, "popular_references.jsonl for typo squatting");
    app.add_option("--background", f.background, "background_readmes.jsonl for keyword relevance");
    app.add_option("--spam-model", f.spam_model, "Trained spam model JSON");

    auto* fetch = app.add_subcommand("fetch", "Fetch a repo or user snapshot from the GitHub API");
    std::string kind, name, replay, now;
    ingest::RepoLimits rl;
    ingest::UserLimits ul;
    fetch->add_option("kind", kind, "repo or user")->required();
    fetch->add_option("name", name, "owner/name or login")->required();
    fetch->add_option("--max-commits", rl.max_commits);
    fetch->add_option("--max-issues", rl.max_issues);
    fetch->add_option("--max-stars", rl.max_stars);
    fetch->add_option("--max-starred", ul.max_starred);
    fetch->add_option("--max-events", ul.max_events);
    fetch->add_option("--max-owned", ul.max_owned_repos);
    fetch->add_option("--replay", replay, "Serve requests from a recorded transcript");
    fetch->add_option("--now", now, "Fixed snapshot time (ISO-8601)");

    auto* scan = app.add_subcommand("scan", "Run detectors over snapshot files");
    std::vector<std::string> paths;
    scan->add_option("snapshots", paths, "Snapshot files; users and repos act as context for each other")->required();

    auto* evalc = app.add_subcommand("eval", "Score detectors on a labeled manifest");
    std::string manifest, plot;
    evalc->add_option("manifest", manifest, "manifest.jsonl")->required();
    evalc->add_option("--plot-data", plot, "Also write subcategory,metric,value CSV here");

    auto* gen = app.add_subcommand("gen-fixtures", "Generate the synthetic labeled corpus");
    std::string gen_dir;
    std::int64_t positives = 0, negatives = 0;
    gen->add_option("out_dir", gen_dir)->required();
    gen->add_option("--positives", positives, "Positives per subcategory (default: the 392-instance layout)");
    gen->add_option("--negatives", negatives, "Negatives per subcategory");

    auto* train = app.add_subcommand("train-spam", "Train the issue spam classifier");
    std::string train_corpus, model_out;
    textkit::TrainOptions topts{.hidden_dim = 32, .epochs = 300, .learning_rate = 0.5, .seed = 0};
    train->add_option("corpus", train_corpus, "jsonl of {text, label}")->required();
    train->add_option("--model-out", model_out)->required();
    train->add_option("--epochs", topts.epochs);
    train->add_option("--hidden", topts.hidden_dim);
    train->add_option("--learning-rate", topts.learning_rate);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kExitClean;
    } catch (const CLI::ParseError& e) {
        err << "ghabuse: error: " << one_line(e.what()) << "\n";
        return kExitError;
    }

    try {
        const auto cfg = resolve_config(f);
        if (*scan) return cmd_scan(cfg, paths, out, err);
        if (*evalc) return cmd_eval(cfg, manifest, plot, out);
        if (*fetch) return cmd_fetch(cfg, kind, name, rl, ul, replay, now, out, err);
        if (*gen) return cmd_gen_fixtures(cfg, gen_dir, positives, negatives, out);
        if (*train) return cmd_train_spam(cfg, train_corpus, model_out, topts, out);
    } catch (const std::exception& e) {
        err << "ghabuse: error: " << one_line(e.what()) << "\n";
        return kExitError;
    }
    return kExitError;
}

}  // namespace ghabuse::cli
