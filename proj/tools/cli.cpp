#include "cli.hpp"

#include "argcascade/base_model.hpp"
#include "argcascade/calibration.hpp"
#include "argcascade/cascade.hpp"
#include "argcascade/corpus.hpp"
#include "argcascade/csv.hpp"
#include "argcascade/error.hpp"
#include "argcascade/metrics.hpp"
#include "argcascade/refiner.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <memory>
#include <optional>
#include <sstream>

namespace argcascade::cli {
namespace {

namespace fs = std::filesystem;

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(path.parent_path(), ec);
        if (ec) throw IoError("cannot create " + path.parent_path().string() + ": " + ec.message());
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write " + path.string());
    return out;
}

void write_file(const fs::path& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    if (!out) throw IoError("cannot write " + path.string());
}

// Runs `parse` on the opened file and names the file in any parse or
// validation error it raises.
template <class F>
auto parse_file(const fs::path& path, F&& parse) {
    auto in = open_in(path);
    try {
        return parse(in);
    } catch (const ParseError& e) {
        throw ParseError(path.string() + ": " + e.what());
    } catch (const ValidationError& e) {
        throw ValidationError(path.string() + ": " + e.what());
    }
}

std::vector<ArgumentSample> load_samples(const fs::path& path) {
    return parse_file(path, [](std::istream& in) { return corpus::read_interchange(in); });
}

PredictionFile load_prediction_file(const fs::path& path) {
    return parse_file(path, [](std::istream& in) { return load_predictions(in); });
}

std::string fixed(double v, int decimals = 2) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(decimals) << metrics::round_half_up(v, decimals);
    return s.str();
}

std::string shortest(double v) {
    std::ostringstream s;
    s << std::setprecision(15) << v;
    return s.str();
}

// ---------------------------------------------------------------- ingest

struct IngestOptions {
    std::string corpus;
    std::vector<std::string> inputs;
    std::string output;
    std::string portal;
    std::string condition = "without-conclusion";
    std::string topic;
    std::optional<std::size_t> expect_pro;
    std::optional<std::size_t> expect_con;
    std::vector<std::string> expect;
};

std::string group_of(const ArgumentSample& s) { return s.corpus == "ukp" ? "ukp/" + s.topic : s.corpus; }

void print_distribution(std::ostream& out, const std::vector<ArgumentSample>& samples, const LabelScheme& scheme) {
    std::map<std::string, std::vector<std::size_t>> rows;
    std::vector<std::size_t> total(scheme.size(), 0);
    for (const auto& s : samples) {
        auto& row = rows[group_of(s)];
        row.resize(scheme.size(), 0);
        const auto c = *scheme.index_of(s.gold_label);
        ++row[c];
        ++total[c];
    }
    std::size_t width = 5;
    for (const auto& [name, _] : rows) width = std::max(width, name.size());
    auto line = [&](const std::string& name, const std::vector<std::size_t>& counts) {
        out << std::left << std::setw(static_cast<int>(width)) << name;
        std::size_t sum = 0;
        for (auto c : counts) {
            out << std::right << std::setw(9) << c;
            sum += c;
        }
        out << std::right << std::setw(9) << sum << '\n';
    };
    out << std::left << std::setw(static_cast<int>(width)) << "group";
    for (const auto& c : scheme.classes()) out << std::right << std::setw(9) << c;
    out << std::right << std::setw(9) << "total" << '\n';
    for (const auto& [name, counts] : rows) line(name, counts);
    if (rows.size() != 1) line("total", total);
}

std::vector<ArgumentSample> read_corpus(const IngestOptions& o, const std::string& path) {
    if (o.corpus == "argsme") {
        corpus::ArgsmeOptions opts;
        opts.portal = o.portal;
        opts.condition = o.condition == "with-conclusion" ? corpus::ArgsmeCondition::WithConclusion
                                                          : corpus::ArgsmeCondition::WithoutConclusion;
        return parse_file(path, [&](std::istream& in) { return corpus::parse_argsme(in, opts); });
    }
    if (o.corpus == "ukp") {
        const auto topic = corpus::canonical_ukp_topic(o.topic.empty() ? fs::path(path).stem().string() : o.topic);
        return parse_file(path, [&](std::istream& in) { return corpus::parse_ukp(in, topic); });
    }
    return parse_file(path, [](std::istream& in) { return corpus::parse_us2016(in); });
}

int cmd_ingest(const IngestOptions& o, std::ostream& out, std::ostream& err) {
    const auto& scheme = o.corpus == "argsme" ? LabelScheme::argsme_binary()
                         : o.corpus == "ukp"  ? LabelScheme::ukp_ternary()
                                              : LabelScheme::us2016_quaternary();
    if (!o.topic.empty() && o.inputs.size() > 1) throw ConfigError("--topic applies to a single input file");

    std::vector<ArgumentSample> samples;
    for (const auto& path : o.inputs) {
        auto part = read_corpus(o, path);
        if (part.empty()) err << "warning: no samples in " << path << '\n';
        samples.insert(samples.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
    }
    if (!o.output.empty()) {
        auto f = open_out(o.output);
        corpus::write_interchange(f, samples);
        if (!f) throw IoError("cannot write " + o.output);
    }
    print_distribution(out, samples, scheme);

    std::map<std::string, std::size_t> expected;
    if (o.expect_pro) expected[scheme.canonical("PRO")] = *o.expect_pro;
    if (o.expect_con) expected[scheme.canonical("CON")] = *o.expect_con;
    for (const auto& e : o.expect) {
        const auto eq = e.find('=');
        if (eq == std::string::npos) throw ConfigError("--expect wants CLASS=COUNT, got '" + e + "'");
        std::size_t n = 0;
        try {
            std::size_t used = 0;
            const auto v = std::stoll(e.substr(eq + 1), &used);
            if (v < 0 || used != e.size() - eq - 1) throw std::invalid_argument("count");
            n = static_cast<std::size_t>(v);
        } catch (const std::logic_error&) {
            throw ConfigError("--expect count is not a non-negative integer in '" + e + "'");
        }
        const auto name = e.substr(0, eq);
        if (text::iequals(name, "total")) {
            expected["total"] = n;
        } else {
            expected[scheme.canonical(name)] = n;
        }
    }
    if (expected.empty()) return kSuccess;

    auto actual = corpus::class_distribution(samples, scheme);
    actual["total"] = samples.size();
    bool ok = true;
    for (const auto& [label, want] : expected) {
        const auto got = actual[label];
        if (got == want) continue;
        ok = false;
        const auto diff = static_cast<long long>(got) - static_cast<long long>(want);
        err << "expectation failed: " << label << " expected " << want << ", got " << got << " ("
            << (diff > 0 ? "+" : "") << diff << ")\n";
    }
    if (ok) out << "all " << expected.size() << " expectations met\n";
    return ok ? kSuccess : kValidationFailure;
}

// ---------------------------------------------------------------- split

struct SplitOptions {
    std::string samples;
    std::string train_out;
    std::string eval_out;
    double train_fraction = 0.9;
    std::uint64_t seed = 42;
    bool no_stratify = false;
};

int cmd_split(const SplitOptions& o, std::ostream& out) {
    const auto samples = load_samples(o.samples);
    const auto parts = corpus::split(samples, {o.train_fraction, o.seed, !o.no_stratify});
    auto tf = open_out(o.train_out);
    corpus::write_interchange(tf, parts.train);
    auto ef = open_out(o.eval_out);
    corpus::write_interchange(ef, parts.test);
    if (!tf || !ef) throw IoError("cannot write split output");
    out << "train " << parts.train.size() << ", eval " << parts.test.size() << '\n';
    return kSuccess;
}

// ---------------------------------------------------------------- calibrate

struct CalibrateOptions {
    std::string predictions;
    double fraction = 0.0;
    std::string output;
};

void print_profile(std::ostream& out, const calibration::CalibrationProfile& p) {
    out << "delegating k = " << p.k << " of n = " << p.n << " (fraction " << shortest(p.fraction) << ", gamma "
        << shortest(p.gamma) << ")\n";
}

int cmd_calibrate(const CalibrateOptions& o, std::ostream& out) {
    const auto file = load_prediction_file(o.predictions);
    const auto profile = calibration::calibrate(file.records, o.fraction);
    if (!o.output.empty()) write_file(o.output, calibration::to_json(profile) + "\n");
    print_profile(out, profile);
    return kSuccess;
}

// ---------------------------------------------------------------- run / sweep

struct LlmOptions {
    std::string train;
    std::string eval;
    std::string samples;
    std::string mock;
    std::string llm_url = refiner::ChatConfig{}.base_url;
    std::string llm_model = refiner::ChatConfig{}.model;
    std::string api_key;
    std::string cache_dir;
    std::size_t parallelism = 4;
    double rate_limit = 0.0;
};

struct RunOptions {
    LlmOptions llm;
    std::optional<double> fraction; // default: per scheme
    std::string out_dir;
    bool dry_run = false;
};

struct SweepOptions {
    LlmOptions llm;
    std::vector<double> grid;
    std::string output;
    bool allow_spend = false;
};

/// Everything a cascade run reads, loaded and cross-checked once.
struct Inputs {
    PredictionFile train;
    PredictionFile eval;
    std::vector<ArgumentSample> samples;
    std::map<std::string, std::string> gold; // eval ids only

    const LabelScheme& scheme() const { return LabelScheme::by_id(eval.scheme); }
};

Inputs load_inputs(const LlmOptions& o, std::ostream& err) {
    Inputs in;
    in.eval = load_prediction_file(o.eval);
    if (o.train.empty()) {
        err << "note: no --train predictions, calibrating on the eval predictions (uncertainties only)\n";
        in.train = in.eval;
    } else {
        in.train = load_prediction_file(o.train);
    }
    if (in.train.scheme != in.eval.scheme) throw ValidationError("train and eval predictions use different label schemes");
    in.samples = load_samples(o.samples);
    std::map<std::string, const ArgumentSample*> by_id;
    for (const auto& s : in.samples) by_id.emplace(s.id, &s);
    for (const auto& r : in.eval.records) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end()) throw ValidationError("no sample for eval prediction '" + r.sample_id + "'");
        in.gold[r.sample_id] = it->second->gold_label;
    }
    return in;
}

refiner::ChatConfig chat_config(const LlmOptions& o) {
    refiner::ChatConfig c;
    c.base_url = o.llm_url;
    c.model = o.llm_model;
    c.api_key = o.api_key;
    if (!o.cache_dir.empty()) c.cache_dir = o.cache_dir;
    c.parallelism = std::max<std::size_t>(1, o.parallelism);
    c.max_requests_per_second = o.rate_limit;
    return c;
}

/// Builds the refiner named by --mock-llm, or the live chat client.
///  echo            answers with the base prediction
///  oracle          answers with the gold label
///  transcript:PATH replays a prompt-hash -> reply transcript
///  cache-only      serves the response cache, misses become failures
std::unique_ptr<refiner::Refiner> make_refiner(const LlmOptions& o, const Inputs& in) {
    using refiner::RefinementInput;
    if (o.mock.empty()) return std::make_unique<refiner::RemoteRefiner>(chat_config(o));
    if (o.mock == "echo" || o.mock == "oracle") {
        std::map<std::string, std::string> answer = in.gold;
        if (o.mock == "echo") {
            for (const auto& r : in.eval.records) answer[r.sample_id] = r.predicted_label;
        }
        return std::make_unique<refiner::ScriptedRefiner>(
            [answer = std::move(answer)](const RefinementInput& x) -> std::optional<std::string> {
                auto it = answer.find(x.sample_id);
                if (it == answer.end()) return std::nullopt;
                return refiner::canonical_reply(LabelScheme::by_id(x.scheme), it->second);
            });
    }
    auto config = chat_config(o);
    config.require_api_key = false;
    if (o.mock.rfind("transcript:", 0) == 0) {
        auto transport = std::make_shared<refiner::TranscriptTransport>(
            refiner::TranscriptTransport::from_file(o.mock.substr(std::string("transcript:").size())));
        return std::make_unique<refiner::RemoteRefiner>(config, transport);
    }
    if (o.mock == "cache-only") {
        if (o.cache_dir.empty()) throw ConfigError("--mock-llm cache-only needs --cache-dir");
        auto transport = std::make_shared<refiner::TranscriptTransport>(std::map<std::string, std::string>{});
        return std::make_unique<refiner::RemoteRefiner>(config, transport);
    }
    throw ConfigError("unknown --mock-llm mode '" + o.mock + "' (echo, oracle, transcript:PATH, cache-only)");
}

// Rough cost estimate: about four bytes per token, a fixed chat-format
// overhead per request, and a one-sentence reply.
constexpr long long kTokenBytes = 4;
constexpr long long kRequestOverheadTokens = 8;
constexpr long long kReplyTokens = 30;

int dry_run(const RunOptions& o, double fraction, const Inputs& in, std::ostream& out) {
    const auto profile = calibration::calibrate(in.train.records, fraction);
    refiner::RemoteRefiner prompts(chat_config(o.llm));
    std::map<std::string, const ArgumentSample*> by_id;
    for (const auto& s : in.samples) by_id.emplace(s.id, &s);

    std::size_t routed = 0;
    long long prompt_tokens = 0;
    for (const auto& r : in.eval.records) {
        if (!profile.delegates(r.uncertainty)) continue;
        ++routed;
        const auto prompt = prompts.prompt_for(refiner::from_sample(*by_id.at(r.sample_id)));
        prompt_tokens += (static_cast<long long>(prompt.size()) + kTokenBytes - 1) / kTokenBytes + kRequestOverheadTokens;
    }
    print_profile(out, profile);
    out << "dry run: " << routed << " of " << in.eval.records.size() << " eval samples would be sent to "
        << o.llm.llm_model << '\n'
        << "estimated tokens: " << prompt_tokens << " prompt + " << static_cast<long long>(routed) * kReplyTokens
        << " completion\n";
    return kSuccess;
}

// Transport failures leave the base label in place; they are counted so
// the exit code can report them.
std::size_t transport_failures(const std::vector<cascade::CascadeResult>& results) {
    std::size_t n = 0;
    for (const auto& r : results) n += r.source == cascade::Source::LlmFallbackBase && !r.llm_raw;
    return n;
}

int cmd_run(const RunOptions& o, std::ostream& out, std::ostream& err) {
    if (!o.dry_run && o.out_dir.empty()) throw ConfigError("run needs --out-dir (or --dry-run)");
    const auto in = load_inputs(o.llm, err);
    const double fraction = o.fraction.value_or(calibration::default_fraction(in.eval.scheme));
    if (!o.fraction) err << "note: no --fraction, using " << shortest(fraction) << " for " << in.scheme().name() << '\n';
    if (o.dry_run) return dry_run(o, fraction, in, out);

    auto refiner = make_refiner(o.llm, in);
    const auto run = cascade::run_full(in.train.records, in.eval.records, in.samples, fraction, *refiner);
    const auto base = metrics::evaluate(in.eval.records, in.gold, in.scheme());
    const auto report = metrics::evaluate(run.results, in.gold, in.scheme());

    const fs::path dir = o.out_dir;
    write_file(dir / "profile.json", calibration::to_json(run.profile) + "\n");
    {
        auto f = open_out(dir / "results.jsonl");
        cascade::write_results(f, run.results);
        if (!f) throw IoError("cannot write results");
    }
    write_file(dir / "report.json", metrics::to_json(report) + "\n");
    write_file(dir / "report.txt", metrics::to_table(report, "cascade"));
    write_file(dir / "base_report.json", metrics::to_json(base) + "\n");
    write_file(dir / "base_report.txt", metrics::to_table(base, "base model"));

    print_profile(out, run.profile);
    out << metrics::to_table(base, "base model") << '\n'
        << metrics::to_table(report, "cascade") << '\n'
        << metrics::to_table(metrics::compare(base, report));

    if (const auto failed = transport_failures(run.results)) {
        err << "error: " << failed << " delegated samples got no LLM reply and kept the base label\n";
        return kIoFailure;
    }
    return kSuccess;
}

int cmd_sweep(SweepOptions o, std::ostream& out, std::ostream& err) {
    if (o.llm.mock.empty() && !o.allow_spend) {
        throw ConfigError("sweep against a live endpoint needs --allow-spend (or use --mock-llm)");
    }
    if (o.grid.empty()) {
        for (int i = 0; i <= 10; ++i) o.grid.push_back(i / 10.0);
    }
    const auto in = load_inputs(o.llm, err);
    auto refiner = make_refiner(o.llm, in);

    std::ostringstream csv_text;
    csv::write_row(csv_text, {"fraction", "top1", "macro_f1", "llm_calls"});
    std::size_t failed = 0;
    for (const double f : o.grid) {
        const auto run = cascade::run_full(in.train.records, in.eval.records, in.samples, f, *refiner);
        const auto report = metrics::evaluate(run.results, in.gold, in.scheme());
        csv::write_row(csv_text, {shortest(f), fixed(report.top1), fixed(report.macro_f1),
                                  std::to_string(report.cost.llm_calls)});
        failed += transport_failures(run.results);
    }
    if (o.output.empty()) {
        out << csv_text.str();
    } else {
        write_file(o.output, csv_text.str());
        out << "wrote " << o.grid.size() << " rows to " << o.output << '\n';
    }
    if (failed) {
        err << "error: " << failed << " delegated samples got no LLM reply across the sweep\n";
        return kIoFailure;
    }
    return kSuccess;
}

// ---------------------------------------------------------------- report

struct ReportOptions {
    std::string results;
    std::string samples;
    std::string compare;
    std::string json;
};

metrics::EvaluationReport score_results(const fs::path& path, const std::vector<ArgumentSample>& samples) {
    const auto results = parse_file(path, [](std::istream& in) { return cascade::read_results(in); });
    std::map<std::string, const ArgumentSample*> by_id;
    for (const auto& s : samples) by_id.emplace(s.id, &s);
    std::map<std::string, std::string> gold;
    std::optional<SchemeId> scheme;
    for (const auto& r : results) {
        auto it = by_id.find(r.sample_id);
        if (it == by_id.end()) throw ValidationError(path.string() + ": no sample for result '" + r.sample_id + "'");
        if (scheme && *scheme != it->second->scheme) throw ValidationError("results mix label schemes");
        scheme = it->second->scheme;
        gold[r.sample_id] = it->second->gold_label;
    }
    if (!scheme) throw ValidationError(path.string() + ": no results to score");
    return metrics::evaluate(results, gold, LabelScheme::by_id(*scheme));
}

int cmd_report(const ReportOptions& o, std::ostream& out) {
    const auto samples = load_samples(o.samples);
    const auto a = score_results(o.results, samples);
    out << metrics::to_table(a, o.results);
    if (!o.json.empty()) write_file(o.json, metrics::to_json(a) + "\n");
    if (!o.compare.empty()) {
        const auto b = score_results(o.compare, samples);
        out << '\n' << metrics::to_table(b, o.compare) << '\n' << metrics::to_table(metrics::compare(a, b));
    }
    return kSuccess;
}

void add_llm_options(CLI::App* cmd, LlmOptions& o) {
    cmd->add_option("--train", o.train, "base-model predictions used for calibration (default: --eval)");
    cmd->add_option("--eval", o.eval, "base-model predictions to route")->required();
    cmd->add_option("--samples", o.samples, "interchange JSONL holding every eval sample")->required();
    cmd->add_option("--mock-llm", o.mock, "echo | oracle | transcript:PATH | cache-only");
    cmd->add_option("--llm-url", o.llm_url, "chat-completions base URL")->capture_default_str();
    cmd->add_option("--llm-model", o.llm_model, "chat model name")->capture_default_str();
    cmd->add_option("--api-key", o.api_key, "API key")->envname("ARGCASCADE_API_KEY");
    cmd->add_option("--cache-dir", o.cache_dir, "on-disk response cache");
    cmd->add_option("--parallelism", o.parallelism, "concurrent LLM requests")
        ->capture_default_str()
        ->check(CLI::Range(1, 256));
    cmd->add_option("--rate-limit", o.rate_limit, "max LLM requests per second, 0 for none")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app("Confidence-gated argument classification: base model first, LLM for the least certain samples.",
                 "argcascade");
    app.set_config("--config", "", "key = value file, one [section] per subcommand");
    app.require_subcommand(1);
    app.fallthrough();

    IngestOptions ingest;
    auto* c_ingest = app.add_subcommand("ingest", "parse a raw corpus into interchange JSONL");
    c_ingest->add_option("corpus", ingest.corpus, "argsme | ukp | us2016")
        ->required()
        ->transform(CLI::IsMember({"argsme", "ukp", "us2016"}, CLI::ignore_case))
        ->transform(CLI::Transformer({{"args.me", "argsme"}}, CLI::ignore_case));
    c_ingest->add_option("inputs", ingest.inputs, "raw corpus files")->required();
    c_ingest->add_option("-o,--output", ingest.output, "interchange JSONL to write");
    c_ingest->add_option("--portal", ingest.portal, "args.me: keep one debate portal");
    c_ingest->add_option("--condition", ingest.condition, "args.me: with-conclusion | without-conclusion")
        ->capture_default_str()
        ->check(CLI::IsMember({"with-conclusion", "without-conclusion"}));
    c_ingest->add_option("--topic", ingest.topic, "ukp: topic name (default: file name)");
    c_ingest->add_option("--expect-pro", ingest.expect_pro, "expected PRO count");
    c_ingest->add_option("--expect-con", ingest.expect_con, "expected CON count");
    c_ingest->add_option("--expect", ingest.expect, "expected CLASS=COUNT (or total=COUNT), repeatable");

    SplitOptions split;
    auto* c_split = app.add_subcommand("split", "seeded train/eval partition of interchange samples");
    c_split->add_option("samples", split.samples)->required();
    c_split->add_option("--train-out", split.train_out)->required();
    c_split->add_option("--eval-out", split.eval_out)->required();
    c_split->add_option("--train-fraction", split.train_fraction)->capture_default_str();
    c_split->add_option("--seed", split.seed)->capture_default_str();
    c_split->add_flag("--no-stratify", split.no_stratify, "plain shuffle instead of per-class apportioning");

    CalibrateOptions calibrate;
    auto* c_calibrate = app.add_subcommand("calibrate", "derive the uncertainty threshold for a delegation fraction");
    c_calibrate->add_option("predictions", calibrate.predictions)->required();
    c_calibrate->add_option("--fraction", calibrate.fraction)->required()->check(CLI::Range(0.0, 1.0));
    c_calibrate->add_option("-o,--output", calibrate.output, "profile JSON to write");

    RunOptions run_opts;
    auto* c_run = app.add_subcommand("run", "run the cascade and score it against the base model");
    add_llm_options(c_run, run_opts.llm);
    c_run->add_option("--fraction", run_opts.fraction, "share of samples sent to the LLM (default 0.2, US2016 0.25)")
        ->check(CLI::Range(0.0, 1.0));
    c_run->add_option("--out-dir", run_opts.out_dir, "where profile, results and reports go");
    c_run->add_flag("--dry-run", run_opts.dry_run, "print the delegation count and token estimate only");

    SweepOptions sweep;
    auto* c_sweep = app.add_subcommand("sweep", "CSV of metrics over a grid of delegation fractions");
    add_llm_options(c_sweep, sweep.llm);
    c_sweep->add_option("--grid", sweep.grid, "comma-separated fractions (default 0,0.1,...,1)")
        ->delimiter(',')
        ->check(CLI::Range(0.0, 1.0));
    c_sweep->add_option("-o,--output", sweep.output, "CSV file (default: stdout)");
    c_sweep->add_flag("--allow-spend", sweep.allow_spend, "permit a sweep against a live endpoint");

    ReportOptions report;
    auto* c_report = app.add_subcommand("report", "score a results file, optionally against another");
    c_report->add_option("results", report.results)->required();
    c_report->add_option("--samples", report.samples)->required();
    c_report->add_option("--compare", report.compare, "second results file; deltas are second minus first");
    c_report->add_option("--json", report.json, "write the first report as JSON");

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kValidationFailure;
    }

    try {
        if (*c_ingest) return cmd_ingest(ingest, out, err);
        if (*c_split) return cmd_split(split, out);
        if (*c_calibrate) return cmd_calibrate(calibrate, out);
        if (*c_run) return cmd_run(run_opts, out, err);
        if (*c_sweep) return cmd_sweep(sweep, out, err);
        if (*c_report) return cmd_report(report, out);
    } catch (const IoError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const TransportError& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const nlohmann::json::exception& e) {
        err << "error: " << e.what() << '\n';
        return kValidationFailure;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kIoFailure;
    }
    return kValidationFailure;
}

} // namespace argcascade::cli
