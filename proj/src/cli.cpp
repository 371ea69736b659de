#include "toth/cli.hpp"

#include "toth/config.hpp"
#include "toth/error.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <memory>
#include <ostream>
#include <sstream>

namespace toth::cli {

namespace {

namespace fs = std::filesystem;

constexpr const char* kDefaultConfigPath = "toth.toml";

struct CommonFlags {
    std::string config_path;
    std::string provider = "stub";
    std::vector<std::string> sets;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> window;
    std::optional<double> prior;
    std::string fixtures;
    std::string llm_endpoint;
    std::string nli_endpoint;
};

void add_common(CLI::App& cmd, CommonFlags& flags)
{
    cmd.add_option("--config", flags.config_path,
                   "Config file (falls back to $TOTH_CONFIG, then ./toth.toml)");
    cmd.add_option("--provider", flags.provider, "Model providers")
        ->check(CLI::IsMember({"stub", "http"}));
    cmd.add_option("--set", flags.sets, "Override a config key, e.g. --set pipeline.window=2");
    cmd.add_option("--seed", flags.seed, "Generation seed (llm.seed)");
    cmd.add_option("--window", flags.window, "Entailment window (pipeline.window)");
    cmd.add_option("--prior", flags.prior, "Root prior belief (pipeline.prior)");
    cmd.add_option("--fixtures", flags.fixtures, "Stub completion fixtures (stub.fixtures)");
    cmd.add_option("--llm-endpoint", flags.llm_endpoint, "Chat-completions URL (llm.endpoint)");
    cmd.add_option("--nli-endpoint", flags.nli_endpoint, "NLI URL (nli.endpoint)");
}

std::string format_number(double v)
{
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

AppConfig load_config(const CommonFlags& flags)
{
    ConfigValues file;
    std::string path = flags.config_path;
    if (path.empty()) {
        if (const char* env = std::getenv("TOTH_CONFIG"); env != nullptr && *env != '\0') {
            path = env;
        }
    }
    if (!path.empty()) {
        file = read_config_file(path);
    } else if (fs::exists(kDefaultConfigPath)) {
        file = read_config_file(kDefaultConfigPath);
    }

    ConfigValues overrides;
    for (const std::string& assignment : flags.sets) {
        std::size_t eq = assignment.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw Error(ErrorCode::ConfigError, "--set expects key=value, got '" + assignment + "'");
        }
        overrides[assignment.substr(0, eq)] = assignment.substr(eq + 1);
    }
    if (flags.seed) overrides["llm.seed"] = std::to_string(*flags.seed);
    if (flags.window) overrides["pipeline.window"] = std::to_string(*flags.window);
    if (flags.prior) overrides["pipeline.prior"] = format_number(*flags.prior);
    if (!flags.fixtures.empty()) overrides["stub.fixtures"] = flags.fixtures;
    if (!flags.llm_endpoint.empty()) overrides["llm.endpoint"] = flags.llm_endpoint;
    if (!flags.nli_endpoint.empty()) overrides["nli.endpoint"] = flags.nli_endpoint;
    return resolve_config(file, overrides);
}

struct Providers {
    std::unique_ptr<GenerationProvider> generator;
    std::unique_ptr<EntailmentProvider> nli;
};

Providers make_providers(const std::string& kind, const AppConfig& config)
{
    Providers p;
    if (kind == "http") {
        if (config.llm.endpoint.empty()) {
            throw Error(ErrorCode::ConfigError, "--provider http needs llm.endpoint");
        }
        if (config.nli.endpoint.empty()) {
            throw Error(ErrorCode::ConfigError, "--provider http needs nli.endpoint");
        }
        p.generator = std::make_unique<HttpGenerationProvider>(HttpLlmConfig{
            config.llm.endpoint, config.llm.model, std::chrono::milliseconds(config.llm.timeout_ms)});
        p.nli = std::make_unique<HttpEntailmentProvider>(
            HttpNliConfig{config.nli.endpoint, std::chrono::milliseconds(config.nli.timeout_ms)});
        return p;
    }
    if (config.stub_fixtures.empty()) {
        p.generator = std::make_unique<StubGenerationProvider>();
    } else {
        p.generator =
            std::make_unique<StubGenerationProvider>(read_fixture_file(config.stub_fixtures));
    }
    p.nli = std::make_unique<StubEntailmentProvider>();
    return p;
}

void write_file(const fs::path& path, const std::string& content)
{
    std::ofstream file(path, std::ios::binary);
    if (!file) {
        throw Error(ErrorCode::ConfigError, "cannot write '" + path.string() + "'");
    }
    file << content;
}

int exit_code_for(ErrorCode code)
{
    switch (code) {
    case ErrorCode::NoValidGraph: return kNoValidGraph;
    case ErrorCode::ConfigError:
    case ErrorCode::InvalidCalibration:
    case ErrorCode::MalformedRecord:
    case ErrorCode::UnknownKind:
    case ErrorCode::EmptyQuestion: return kConfigError;
    default: return kRuntimeFailure;
    }
}

int cmd_solve(const std::string& question, const std::string& kind, const std::string& dot_dir,
              bool timings, const CommonFlags& flags, std::ostream& out, std::ostream& err)
{
    const AppConfig config = load_config(flags);
    Providers providers = make_providers(flags.provider, config);
    const AnswerKind answer_kind = parse_kind(kind);

    ToThResult result =
        solve(question, answer_kind, *providers.generator, *providers.nli, pipeline_config(config));

    for (const AgentRun& run : result.agents) {
        if (run.error) {
            err << "agent " << style_keyword(run.style) << " failed: " << *run.error << '\n';
        }
    }
    if (!dot_dir.empty()) {
        fs::create_directories(dot_dir);
        for (const AgentRun& run : result.agents) {
            if (run.graph) {
                write_file(fs::path(dot_dir) / (std::string(style_keyword(run.style)) + ".dot"),
                           to_dot(*run.graph));
            }
        }
    }
    err << "selected " << style_keyword(result.selected_style) << " after "
        << result.total_nli_calls << " NLI call(s) in " << result.total_ms << " ms\n";
    out << to_json(result, timings).dump(2) << '\n';
    return kOk;
}

std::vector<Method> parse_methods(const std::string& spec)
{
    if (spec == "all") {
        return {Method::CotGreedy, Method::SelfConsistency, Method::ToTh};
    }
    std::vector<Method> methods;
    std::stringstream ss(spec);
    std::string item;
    while (std::getline(ss, item, ',')) {
        methods.push_back(parse_method(item));
    }
    if (methods.empty()) {
        throw Error(ErrorCode::ConfigError, "--method is empty");
    }
    return methods;
}

int cmd_bench(const std::string& dataset_path, const std::string& method_spec,
              std::optional<std::size_t> limit, const std::string& out_dir, bool csv,
              const CommonFlags& flags, std::ostream& out, std::ostream& err)
{
    const AppConfig config = load_config(flags);
    const std::vector<Method> methods = parse_methods(method_spec);
    Dataset data = load_dataset(dataset_path);
    for (const std::string& w : data.warnings) {
        err << "warning: " << w << '\n';
    }
    if (limit && *limit < data.tasks.size()) {
        data.tasks.resize(*limit);
    }
    Providers providers = make_providers(flags.provider, config);
    const HarnessConfig harness = harness_config(config);

    std::vector<Report> reports;
    for (Method m : methods) {
        err << "running " << to_string(m) << " on " << data.tasks.size() << " task(s)\n";
        reports.push_back(run_method(m, data.tasks, *providers.generator, *providers.nli, harness));
    }

    nlohmann::json doc;
    doc["dataset"] = dataset_path;
    doc["provider"] = flags.provider;
    doc["n_tasks"] = data.tasks.size();
    doc["reports"] = nlohmann::json::array();
    for (const Report& r : reports) {
        doc["reports"].push_back(to_json(r));
    }
    const std::string table = render_table(reports);

    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "report.json", doc.dump(2) + "\n");
    write_file(fs::path(out_dir) / "report.txt", table);
    if (csv) {
        write_file(fs::path(out_dir) / "report.csv", render_csv(reports));
    }
    err << table;
    out << doc.dump(2) << '\n';
    return kOk;
}

int cmd_export_graph(const std::string& result_path, const std::string& out_dir,
                     const std::string& style_filter, std::ostream& out)
{
    std::ifstream in(result_path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot open result file '" + result_path + "'");
    }
    nlohmann::json doc = nlohmann::json::parse(in, nullptr, false);
    if (doc.is_discarded() || !doc.is_object() || !doc.contains("graphs")) {
        throw Error(ErrorCode::MalformedRecord, "'" + result_path + "' is not a solve result");
    }
    std::size_t written = 0;
    for (const auto& jg : doc["graphs"]) {
        ReasoningGraph graph = graph_from_json(jg);
        const std::string style(style_keyword(graph.agent_style));
        if (!style_filter.empty() && style != style_filter) continue;
        const std::string dot = to_dot(graph);
        if (out_dir.empty()) {
            out << dot;
        } else {
            fs::create_directories(out_dir);
            write_file(fs::path(out_dir) / (style + ".dot"), dot);
        }
        ++written;
    }
    if (written == 0) {
        throw Error(ErrorCode::MalformedRecord, "no graphs matched in '" + result_path + "'");
    }
    return kOk;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Multi-agent reasoning with entailment-weighted belief propagation", "toth"};
    app.require_subcommand(1);

    CommonFlags solve_flags;
    std::string question;
    std::string kind = "boolean";
    std::string dot_dir;
    bool timings = false;
    CLI::App* solve_cmd = app.add_subcommand("solve", "Answer one question and print the result JSON");
    solve_cmd->add_option("question", question, "Question text")->required();
    solve_cmd->add_option("--kind", kind, "Answer kind")
        ->check(CLI::IsMember({"boolean", "integer", "text"}));
    solve_cmd->add_option("--export-dot", dot_dir, "Write one DOT file per agent into this directory");
    solve_cmd->add_flag("--timings", timings, "Include stage timings in the JSON");
    add_common(*solve_cmd, solve_flags);

    CommonFlags bench_flags;
    std::string dataset;
    std::string method = "toth";
    std::optional<std::size_t> limit;
    std::string out_dir = "reports";
    bool csv = false;
    CLI::App* bench_cmd = app.add_subcommand("bench", "Evaluate a method over a JSONL dataset");
    bench_cmd->add_option("dataset", dataset, "JSONL dataset")->required();
    bench_cmd->add_option("--method", method,
                          "toth, cot_greedy, self_consistency, a comma list, or all");
    bench_cmd->add_option("--limit", limit, "Evaluate only the first N tasks");
    bench_cmd->add_option("--out", out_dir, "Directory for report.json / report.txt");
    bench_cmd->add_flag("--csv", csv, "Also write report.csv");
    add_common(*bench_cmd, bench_flags);

    std::string result_path;
    std::string export_dir;
    std::string style_filter;
    CLI::App* export_cmd = app.add_subcommand("export-graph", "Render a saved solve result as DOT");
    export_cmd->add_option("result", result_path, "Result JSON written by solve")->required();
    export_cmd->add_option("--out", export_dir, "Write <style>.dot files here instead of stdout");
    export_cmd->add_option("--style", style_filter, "Only this agent's graph")
        ->check(CLI::IsMember({"abductive", "deductive", "inductive"}));

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& ex) {
        err << "error: " << ex.what() << '\n';
        for (CLI::App* sub : app.get_subcommands()) {
            err << sub->help();
        }
        return kConfigError;
    }

    try {
        if (solve_cmd->parsed()) {
            return cmd_solve(question, kind, dot_dir, timings, solve_flags, out, err);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(dataset, method, limit, out_dir, csv, bench_flags, out, err);
        }
        return cmd_export_graph(result_path, export_dir, style_filter, out);
    } catch (const Error& ex) {
        err << "error: " << ex.what() << '\n';
        return exit_code_for(ex.code());
    } catch (const fs::filesystem_error& ex) {
        err << "error: " << ex.what() << '\n';
        return kConfigError;
    }
}

} // namespace toth::cli
