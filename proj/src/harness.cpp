#include "toth/harness.hpp"

#include "toth/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <set>
#include <sstream>
#include <thread>

namespace toth {

std::string Task::stratum() const
{
    if (auto it = difficulty.find("statements"); it != difficulty.end()) {
        return std::to_string(it->second);
    }
    std::string out;
    if (auto it = difficulty.find("depth"); it != difficulty.end()) {
        out += "d" + std::to_string(it->second);
    }
    if (auto it = difficulty.find("length"); it != difficulty.end()) {
        out += (out.empty() ? "l" : "/l") + std::to_string(it->second);
    }
    return out.empty() ? "all" : out;
}

namespace {

const std::set<std::string> kDifficultyKeys = {"statements", "depth", "length"};

Task parse_task(const nlohmann::json& j)
{
    if (!j.is_object()) {
        throw Error(ErrorCode::MalformedRecord, "record is not a JSON object");
    }
    for (const char* key : {"id", "question", "answer", "kind"}) {
        if (!j.contains(key)) {
            throw Error(ErrorCode::MalformedRecord, std::string("missing field '") + key + "'");
        }
    }
    Task task;
    const auto& id = j["id"];
    task.id = id.is_string() ? id.get<std::string>() : id.dump();
    if (!j["question"].is_string() || j["question"].get<std::string>().empty()) {
        throw Error(ErrorCode::MalformedRecord, "question must be a non-empty string");
    }
    task.question = j["question"].get<std::string>();
    if (!j["kind"].is_string()) {
        throw Error(ErrorCode::UnknownKind, "kind must be a string");
    }
    task.kind = parse_kind(j["kind"].get<std::string>());

    const auto& answer = j["answer"];
    if (answer.is_boolean()) {
        task.gold = parse_gold(answer.get<bool>() ? "yes" : "no", task.kind);
    } else if (answer.is_number_integer()) {
        task.gold = parse_gold(std::to_string(answer.get<long long>()), task.kind);
    } else if (answer.is_string()) {
        task.gold = parse_gold(answer.get<std::string>(), task.kind);
    } else {
        throw Error(ErrorCode::MalformedRecord, "answer must be a string, integer or boolean");
    }

    if (auto it = j.find("difficulty"); it != j.end() && !it->is_null()) {
        if (!it->is_object()) {
            throw Error(ErrorCode::MalformedRecord, "difficulty must be an object");
        }
        for (const auto& [key, value] : it->items()) {
            if (!kDifficultyKeys.contains(key)) {
                throw Error(ErrorCode::MalformedRecord, "unknown difficulty tag '" + key + "'");
            }
            if (!value.is_number_integer()) {
                throw Error(ErrorCode::MalformedRecord, "difficulty '" + key + "' must be an integer");
            }
            task.difficulty[key] = value.get<int>();
        }
    }
    return task;
}

} // namespace

Dataset parse_dataset(std::istream& in)
{
    Dataset data;
    std::vector<std::string> problems;
    bool unknown_kind_only = true;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
        try {
            if (j.is_discarded()) {
                throw Error(ErrorCode::MalformedRecord, "invalid JSON");
            }
            data.tasks.push_back(parse_task(j));
        } catch (const Error& ex) {
            unknown_kind_only = unknown_kind_only && ex.code() == ErrorCode::UnknownKind;
            problems.push_back("line " + std::to_string(line_no) + ": " + ex.what());
        }
    }
    if (!problems.empty()) {
        std::string message;
        for (const std::string& p : problems) {
            message += "\n  " + p;
        }
        throw Error(unknown_kind_only ? ErrorCode::UnknownKind : ErrorCode::MalformedRecord,
                    std::to_string(problems.size()) + " bad record(s):" + message);
    }
    if (data.tasks.empty()) {
        data.warnings.push_back("dataset contains no tasks");
    }
    return data;
}

Dataset load_dataset(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Error(ErrorCode::ConfigError, "cannot open dataset '" + path + "'");
    }
    return parse_dataset(in);
}

Answer majority_vote(std::span<const Answer> answers)
{
    if (answers.empty()) {
        throw Error(ErrorCode::EmptyVote, "no answers to vote on");
    }
    // First-seen order doubles as the tie-break.
    std::vector<std::pair<Answer, std::size_t>> counts;
    for (const Answer& a : answers) {
        auto it = std::find_if(counts.begin(), counts.end(),
                               [&](const auto& entry) { return entry.first == a; });
        if (it == counts.end()) {
            counts.emplace_back(a, 1);
        } else {
            ++it->second;
        }
    }
    auto best = counts.begin();
    for (auto it = counts.begin(); it != counts.end(); ++it) {
        if (it->second > best->second) {
            best = it;
        }
    }
    return best->first;
}

std::string_view to_string(Method method) noexcept
{
    switch (method) {
    case Method::ToTh: return "toth";
    case Method::CotGreedy: return "cot_greedy";
    case Method::SelfConsistency: return "self_consistency";
    }
    return "toth";
}

Method parse_method(std::string_view name)
{
    for (Method m : {Method::ToTh, Method::CotGreedy, Method::SelfConsistency}) {
        if (to_string(m) == name) return m;
    }
    throw Error(ErrorCode::ConfigError, "unknown method '" + std::string(name) + "'");
}

std::string cot_prompt(std::string_view question)
{
    if (question.find_first_not_of(" \t\r\n") == std::string_view::npos) {
        throw Error(ErrorCode::EmptyQuestion, "question is blank");
    }
    return format_question(question) + " Let's think step by step.";
}

namespace {

TaskOutcome evaluate(Method method, const Task& task, GenerationProvider& generator,
                     EntailmentProvider& nli, const HarnessConfig& config)
{
    TaskOutcome out;
    out.id = task.id;
    out.stratum = task.stratum();
    out.gold = task.gold;
    try {
        switch (method) {
        case Method::ToTh: {
            ToThResult r = solve(task.question, task.kind, generator, nli, config.pipeline);
            out.selected_style = r.selected_style;
            out.predicted = r.answer;
            if (r.answer_error) out.error = r.answer_error;
            break;
        }
        case Method::CotGreedy: {
            std::string completion = generator.generate(cot_prompt(task.question), config.cot_decoding);
            out.predicted = extract_answer(completion, task.kind);
            break;
        }
        case Method::SelfConsistency: {
            const std::string prompt = cot_prompt(task.question);
            const std::uint64_t base = config.sc_decoding.seed.value_or(0);
            std::vector<Answer> votes;
            for (int i = 0; i < config.sc_samples; ++i) {
                DecodingConfig sample = config.sc_decoding;
                sample.seed = base + static_cast<std::uint64_t>(i);
                std::string completion = generator.generate(prompt, sample);
                try {
                    votes.push_back(extract_answer(completion, task.kind));
                } catch (const Error& ex) {
                    if (ex.code() != ErrorCode::AnswerNotFound) throw;
                }
            }
            out.predicted = majority_vote(votes);
            break;
        }
        }
    } catch (const Error& ex) {
        if (ex.code() == ErrorCode::ProviderUnavailable) {
            throw;
        }
        out.error = ex.what();
    }
    out.correct = out.predicted && *out.predicted == task.gold;
    return out;
}

double round4(double x) { return std::round(x * 1e4) / 1e4; }

std::string fixed4(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return buf;
}

} // namespace

Report tally(Method method, std::vector<TaskOutcome> outcomes)
{
    Report report;
    report.method = method;
    report.outcomes = std::move(outcomes);
    for (const TaskOutcome& o : report.outcomes) {
        StratumTally& t = report.per_difficulty[o.stratum];
        ++t.total;
        if (o.correct) {
            ++t.correct;
            ++report.correct;
        }
        if (method == Method::ToTh && o.selected_style) {
            ++report.selection_counts[std::string(style_keyword(*o.selected_style))];
        }
    }
    return report;
}

Report run_method(Method method, std::span<const Task> tasks, GenerationProvider& generator,
                  EntailmentProvider& nli, const HarnessConfig& config)
{
    if (config.sc_samples < 1) {
        throw Error(ErrorCode::ConfigError, "self-consistency needs at least one sample");
    }
    std::vector<TaskOutcome> outcomes(tasks.size());
    const std::size_t workers = std::clamp<std::size_t>(config.concurrency, 1, std::max<std::size_t>(tasks.size(), 1));
    if (workers == 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) {
            outcomes[i] = evaluate(method, tasks[i], generator, nli, config);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (std::size_t i = next++; i < tasks.size(); i = next++) {
                    try {
                        outcomes[i] = evaluate(method, tasks[i], generator, nli, config);
                    } catch (...) {
                        std::lock_guard lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = tasks.size();
                    }
                }
            });
        }
        for (std::thread& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    Report report = tally(method, std::move(outcomes));
    report.metadata["method"] = std::string(to_string(method));
    switch (method) {
    case Method::ToTh:
        report.metadata["temperature"] = config.pipeline.decoding.temperature;
        report.metadata["max_tokens"] = config.pipeline.decoding.max_tokens;
        report.metadata["window"] = config.pipeline.window;
        report.metadata["prior"] = config.pipeline.prior;
        report.metadata["calibration"] = {{"entailment", config.pipeline.calibration.entailment},
                                          {"neutral", config.pipeline.calibration.neutral},
                                          {"contradiction", config.pipeline.calibration.contradiction}};
        break;
    case Method::CotGreedy:
        report.metadata["temperature"] = config.cot_decoding.temperature;
        report.metadata["max_tokens"] = config.cot_decoding.max_tokens;
        break;
    case Method::SelfConsistency:
        report.metadata["n"] = config.sc_samples;
        report.metadata["temperature"] = config.sc_decoding.temperature;
        report.metadata["max_tokens"] = config.sc_decoding.max_tokens;
        break;
    }
    return report;
}

nlohmann::json to_json(const Report& report)
{
    nlohmann::json out;
    out["method"] = std::string(to_string(report.method));
    out["n_tasks"] = report.n_tasks();
    out["correct"] = report.correct;
    out["overall_accuracy"] = round4(report.overall_accuracy());
    nlohmann::json strata = nlohmann::json::object();
    for (const auto& [key, t] : report.per_difficulty) {
        strata[key] = {{"correct", t.correct}, {"total", t.total}, {"accuracy", round4(t.accuracy())}};
    }
    out["per_difficulty"] = std::move(strata);
    if (report.method == Method::ToTh) {
        out["per_style_selection_counts"] = report.selection_counts;
    }
    out["metadata"] = report.metadata;
    nlohmann::json tasks = nlohmann::json::array();
    for (const TaskOutcome& o : report.outcomes) {
        nlohmann::json t = {{"id", o.id},
                            {"stratum", o.stratum},
                            {"gold", o.gold.value},
                            {"predicted", o.predicted ? nlohmann::json(o.predicted->value) : nlohmann::json(nullptr)},
                            {"correct", o.correct}};
        if (o.selected_style) t["selected_style"] = std::string(style_keyword(*o.selected_style));
        if (o.error) t["error"] = *o.error;
        tasks.push_back(std::move(t));
    }
    out["tasks"] = std::move(tasks);
    return out;
}

std::string render_table(std::span<const Report> reports)
{
    std::set<std::string> columns;
    for (const Report& r : reports) {
        for (const auto& [key, _] : r.per_difficulty) columns.insert(key);
    }
    std::size_t name_width = 6;
    for (const Report& r : reports) name_width = std::max(name_width, to_string(r.method).size());

    auto pad = [](std::string s, std::size_t width) {
        if (s.size() < width) s.insert(0, width - s.size(), ' ');
        return s;
    };
    std::ostringstream os;
    std::string header = std::string("method") + std::string(name_width - 6, ' ');
    for (const std::string& c : columns) header += "  " + pad(c, 7);
    header += "  " + pad("overall", 7);
    os << header << '\n' << std::string(header.size(), '-') << '\n';
    for (const Report& r : reports) {
        std::string name(to_string(r.method));
        os << name << std::string(name_width - name.size(), ' ');
        for (const std::string& c : columns) {
            auto it = r.per_difficulty.find(c);
            os << "  " << pad(it == r.per_difficulty.end() ? "-" : fixed4(it->second.accuracy()), 7);
        }
        os << "  " << pad(fixed4(r.overall_accuracy()), 7) << '\n';
    }
    return os.str();
}

std::string render_csv(std::span<const Report> reports)
{
    std::ostringstream os;
    os << "method,stratum,correct,total,accuracy\n";
    for (const Report& r : reports) {
        const std::string name(to_string(r.method));
        for (const auto& [key, t] : r.per_difficulty) {
            os << name << ',' << key << ',' << t.correct << ',' << t.total << ',' << fixed4(t.accuracy()) << '\n';
        }
        os << name << ",overall," << r.correct << ',' << r.n_tasks() << ',' << fixed4(r.overall_accuracy()) << '\n';
    }
    return os.str();
}

} // namespace toth
