#include "toth/agents.hpp"
#include "toth/error.hpp"

#include <gtest/gtest.h>

using namespace toth;

namespace {

ErrorCode code_of(const std::function<void()>& fn)
{
    try {
        fn();
    } catch (const Error& ex) {
        return ex.code();
    }
    ADD_FAILURE() << "expected toth::Error";
    return ErrorCode::ConfigError;
}

} // namespace

TEST(BuildPrompt, DeductiveTemplateIsExact)
{
    const std::string expected =
        "Use the deductive reasoning style to answer the following question.\n"
        "Follow these instructions carefully:\n"
        "- Break the problem into clear, numbered reasoning steps using deductive.\n"
        "- Reference any known principles, patterns, or assumptions involved.\n"
        "- Arrive at a final answer that directly responds to the question.\n"
        "\n"
        "Q: Is X true? \nA:";
    EXPECT_EQ(build_prompt(AgentStyle::Deductive, "Is X true?"), expected);
}

TEST(BuildPrompt, StylesDifferOnlyAtSubstitutionSites)
{
    const std::string q = "Does Fidel tell the truth?";
    auto normalize = [](std::string s, std::string_view keyword) {
        for (std::size_t at = s.find(keyword); at != std::string::npos; at = s.find(keyword, at)) {
            s.replace(at, keyword.size(), "{style}");
        }
        return s;
    };
    const auto a = normalize(build_prompt(AgentStyle::Abductive, q), "abductive");
    const auto d = normalize(build_prompt(AgentStyle::Deductive, q), "deductive");
    const auto i = normalize(build_prompt(AgentStyle::Inductive, q), "inductive");
    EXPECT_EQ(a, d);
    EXPECT_EQ(d, i);
    EXPECT_NE(build_prompt(AgentStyle::Abductive, q), build_prompt(AgentStyle::Inductive, q));
    EXPECT_NE(build_prompt(AgentStyle::Abductive, q), build_prompt(AgentStyle::Abductive, q + " "));
}

TEST(BuildPrompt, EmptyQuestion)
{
    EXPECT_EQ(code_of([] { build_prompt(AgentStyle::Deductive, ""); }), ErrorCode::EmptyQuestion);
    EXPECT_EQ(code_of([] { build_prompt(AgentStyle::Deductive, " \n"); }), ErrorCode::EmptyQuestion);
}

TEST(ClassifyPrompt, RecoversSlotAndQuestion)
{
    auto k = classify_prompt(build_prompt(AgentStyle::Inductive, "What is 2 + 3?"));
    EXPECT_EQ(k.slot, "inductive");
    EXPECT_EQ(k.question, "What is 2 + 3?");
    k = classify_prompt(format_question("Q inside: ok?") + " Let's think step by step.");
    EXPECT_EQ(k.slot, "cot");
    EXPECT_EQ(k.question, "Q inside: ok?");
    EXPECT_EQ(code_of([] { classify_prompt("no frame"); }), ErrorCode::MalformedRecord);
}

TEST(RunAgent, FixtureWithThreeSteps)
{
    StubGenerationProvider stub;
    stub.add("deductive", "q1", {"1. First.\n2. Second.\n3. Final answer: yes"});
    auto t = run_agent(AgentStyle::Deductive, "q1", stub, DecodingConfig{});
    ASSERT_EQ(t.steps.size(), 3u);
    EXPECT_TRUE(t.steps[2].is_final);
    EXPECT_EQ(stub.call_count(), 1u);
}

TEST(RunAgent, ProviderFailureAndUnnumberedProse)
{
    StubGenerationProvider stub;
    stub.add_failure("abductive", "q");
    stub.add("inductive", "q", {"It is plainly yes."});
    stub.add("deductive", "q", {""});
    EXPECT_EQ(code_of([&] { run_agent(AgentStyle::Abductive, "q", stub, {}); }),
              ErrorCode::ProviderUnavailable);
    auto t = run_agent(AgentStyle::Inductive, "q", stub, {});
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_TRUE(t.steps[0].is_final);
    EXPECT_EQ(code_of([&] { run_agent(AgentStyle::Deductive, "q", stub, {}); }), ErrorCode::EmptyTrace);
    EXPECT_EQ(stub.call_count(), 3u);
}

TEST(RunAgent, RejectsBadDecodingConfig)
{
    StubGenerationProvider stub;
    EXPECT_EQ(code_of([&] { run_agent(AgentStyle::Deductive, "q", stub, {-0.1, 526, {}}); }),
              ErrorCode::ConfigError);
    EXPECT_EQ(code_of([&] { run_agent(AgentStyle::Deductive, "q", stub, {0.7, 0, {}}); }),
              ErrorCode::ConfigError);
    EXPECT_EQ(stub.call_count(), 0u);
}

TEST(DecodingConfig, PublishedDefaults)
{
    DecodingConfig c;
    EXPECT_EQ(c.temperature, 0.7);
    EXPECT_EQ(c.max_tokens, 526);
    EXPECT_FALSE(c.seed.has_value());
}

TEST(StubGeneration, SeedSelectsAmongSamples)
{
    StubGenerationProvider stub;
    stub.add("cot", "q", {"a", "b", "c"});
    const std::string prompt = format_question("q") + " Let's think step by step.";
    EXPECT_EQ(stub.generate(prompt, {0.7, 526, 0}), "a");
    EXPECT_EQ(stub.generate(prompt, {0.7, 526, 4}), "b");
    EXPECT_EQ(stub.generate(prompt, {0.7, 526, std::nullopt}), "a");
}

TEST(StubGeneration, FixtureJson)
{
    auto fixtures = nlohmann::json::parse(R"({"items": [
        {"question": "q", "deductive": "1. x. 2. Final answer: no", "cot": ["yes", "no"], "abductive": null}
    ]})");
    StubGenerationProvider stub(fixtures);
    EXPECT_EQ(run_agent(AgentStyle::Deductive, "q", stub, {}).steps.size(), 2u);
    EXPECT_THROW(run_agent(AgentStyle::Abductive, "q", stub, {}), Error);
    EXPECT_EQ(code_of([] { StubGenerationProvider(nlohmann::json::parse(R"({"items": [{"cot": "x"}]})")); }),
              ErrorCode::MalformedRecord);
}

TEST(StubGeneration, SyntheticCompletionIsStableAndParseable)
{
    const std::string q = "Tom has 3 apples and buys 4 more. How many?";
    EXPECT_EQ(synthetic_completion("deductive", q, 0), synthetic_completion("deductive", q, 0));
    auto trace = parse_trace(synthetic_completion("deductive", q, 0));
    EXPECT_GE(trace.steps.size(), 2u);
    EXPECT_LE(trace.steps.size(), 5u);
    EXPECT_TRUE(trace.steps.back().is_final);
    EXPECT_EQ(extract_answer(trace.steps.back().text, AnswerKind::Integer), Answer::integer(7));
    auto yn = parse_trace(synthetic_completion("abductive", "Does Ka lie?", 0));
    EXPECT_NO_THROW(extract_answer(yn.steps.back().text, AnswerKind::Boolean));
}

TEST(ChatRequest, ShapeAndSeed)
{
    auto body = chat_request("m", "hello", DecodingConfig{0.0, 100, 7});
    EXPECT_EQ(body["model"], "m");
    EXPECT_EQ(body["messages"], nlohmann::json::parse(R"([{"role": "user", "content": "hello"}])"));
    EXPECT_EQ(body["temperature"], 0.0);
    EXPECT_EQ(body["max_tokens"], 100);
    EXPECT_EQ(body["seed"], 7);
}

TEST(ChatResponse, MessageTextAndErrors)
{
    EXPECT_EQ(parse_chat_response(R"({"choices": [{"message": {"content": "hi"}}]})"), "hi");
    EXPECT_EQ(parse_chat_response(R"({"choices": [{"text": "legacy"}]})"), "legacy");
    for (const char* bad : {"nope", "{}", R"({"choices": []})", R"({"choices": [{"message": {}}]})"}) {
        EXPECT_EQ(code_of([&] { parse_chat_response(bad); }), ErrorCode::MalformedResponse) << bad;
    }
}
