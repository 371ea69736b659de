#include "toth/config.hpp"
#include "toth/error.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

using namespace toth;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& ex) {
        return ex.code();
    }
    ADD_FAILURE() << "no error";
    return ErrorCode::EmptyGraph;
}

} // namespace

TEST(ConfigText, SectionsCommentsAndStrings)
{
    auto v = parse_config_text(R"(
# top comment
[llm]
endpoint = "http://localhost:8000/v1/chat/completions"  # trailing
model = "mistral # not a comment"
temperature = 0.3

[nli.calibration]
neutral=0.55
)");
    EXPECT_EQ(v.at("llm.endpoint"), "http://localhost:8000/v1/chat/completions");
    EXPECT_EQ(v.at("llm.model"), "mistral # not a comment");
    EXPECT_EQ(v.at("llm.temperature"), "0.3");
    EXPECT_EQ(v.at("nli.calibration.neutral"), "0.55");
    EXPECT_EQ(v.size(), 4u);
}

TEST(ConfigText, SyntaxErrorsCarryLineNumbers)
{
    for (const char* text : {"[llm\nx = 1", "[llm]\njust words", "[llm]\nmodel = \"open", " = 3"}) {
        try {
            parse_config_text(text);
            ADD_FAILURE() << text;
        } catch (const Error& ex) {
            EXPECT_EQ(ex.code(), ErrorCode::ConfigError);
            EXPECT_NE(std::string(ex.what()).find("line "), std::string::npos);
        }
    }
}

TEST(Config, Defaults)
{
    AppConfig c = resolve_config({});
    EXPECT_DOUBLE_EQ(c.llm.temperature, 0.7);
    EXPECT_EQ(c.llm.max_tokens, 526);
    EXPECT_DOUBLE_EQ(c.nli.calibration.entailment, 0.95);
    EXPECT_DOUBLE_EQ(c.nli.calibration.neutral, 0.60);
    EXPECT_DOUBLE_EQ(c.nli.calibration.contradiction, 0.10);
    EXPECT_EQ(c.pipeline.window, 1u);
    EXPECT_DOUBLE_EQ(c.pipeline.prior, 0.5);
    EXPECT_EQ(c.harness.self_consistency_n, 20);
    EXPECT_DOUBLE_EQ(c.harness.cot_temperature, 0.0);

    HarnessConfig h = harness_config(c);
    EXPECT_DOUBLE_EQ(h.pipeline.decoding.temperature, 0.7);
    EXPECT_DOUBLE_EQ(h.cot_decoding.temperature, 0.0);
    EXPECT_DOUBLE_EQ(h.sc_decoding.temperature, 0.7);
    EXPECT_EQ(h.sc_decoding.max_tokens, 526);
    EXPECT_EQ(h.sc_samples, 20);
}

TEST(Config, OverridesBeatFileBeatsDefaults)
{
    ConfigValues file = {{"llm.temperature", "0.2"}, {"pipeline.window", "3"}};
    ConfigValues flags = {{"llm.temperature", "0.9"}};
    AppConfig c = resolve_config(file, flags);
    EXPECT_DOUBLE_EQ(c.llm.temperature, 0.9);
    EXPECT_EQ(c.pipeline.window, 3u);
    EXPECT_EQ(c.llm.max_tokens, 526);
}

TEST(Config, EveryKnownKeyIsAccepted)
{
    EXPECT_FALSE(known_config_keys().empty());
    for (const std::string& key : known_config_keys()) {
        EXPECT_NE(key.find('.'), std::string::npos) << key;
    }
}

TEST(Config, TypedValues)
{
    AppConfig c = resolve_config({{"pipeline.entropy_log_base", "e"},
                                  {"pipeline.tie_break", "inductive, deductive,abductive"},
                                  {"pipeline.parallel_agents", "true"},
                                  {"llm.seed", "42"}});
    EXPECT_EQ(c.pipeline.entropy_log_base, LogBase::Natural);
    ASSERT_EQ(c.pipeline.tie_break.size(), 3u);
    EXPECT_EQ(c.pipeline.tie_break[0], AgentStyle::Inductive);
    EXPECT_TRUE(c.pipeline.parallel_agents);
    EXPECT_EQ(c.llm.seed, 42u);
    PipelineConfig p = pipeline_config(c);
    EXPECT_EQ(p.decoding.seed, 42u);
    EXPECT_EQ(p.tie_order[0], AgentStyle::Inductive);
}

TEST(Config, Rejections)
{
    EXPECT_EQ(code_of([] { resolve_config({{"llm.temperatur", "0.5"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"llm.temperature", "warm"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"pipeline.window", "0"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"pipeline.prior", "1.5"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"pipeline.entropy_log_base", "10"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"harness.self_consistency_n", "0"}}); }), ErrorCode::ConfigError);
    EXPECT_EQ(code_of([] { resolve_config({{"nli.calibration.neutral", "1.2"}}); }),
              ErrorCode::InvalidCalibration);
    EXPECT_EQ(code_of([] { resolve_config({{"nli.calibration.contradiction", "-0.1"}}); }),
              ErrorCode::InvalidCalibration);
}

TEST(Config, ExtremeCalibrationIsAllowed)
{
    // Degenerate updates are handled downstream, so 0 and 1 are legal trusts.
    AppConfig c = resolve_config({{"nli.calibration.contradiction", "0"}, {"nli.calibration.entailment", "1"}});
    EXPECT_DOUBLE_EQ(c.nli.calibration.contradiction, 0.0);
}

TEST(Config, ReadsFile)
{
    auto path = std::filesystem::temp_directory_path() / "toth_config_test.toml";
    {
        std::ofstream out(path);
        out << "[harness]\nself_consistency_n = 5\n";
    }
    AppConfig c = resolve_config(read_config_file(path.string()));
    EXPECT_EQ(c.harness.self_consistency_n, 5);
    std::filesystem::remove(path);
    EXPECT_EQ(code_of([&] { read_config_file(path.string()); }), ErrorCode::ConfigError);
}
