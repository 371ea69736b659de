#pragma once

#include "toth/harness.hpp"

#include <map>
#include <optional>
#include <string>
#include <string_view>

namespace toth {

/// Flat "section.key" -> raw value map.
using ConfigValues = std::map<std::string, std::string>;

/// Reads the TOML subset used for config files: `[section]` headers,
/// `key = value` lines, `#` comments, and double-quoted strings. Keys are
/// returned fully qualified ("nli.calibration.neutral"). Throws ConfigError
/// with the line number.
ConfigValues parse_config_text(std::string_view text);
ConfigValues read_config_file(const std::string& path);

struct AppConfig {
    struct Llm {
        std::string endpoint;
        std::string model = "mistral-7b-instruct";
        double temperature = 0.7;
        int max_tokens = 526;
        long timeout_ms = 60000;
        std::optional<std::uint64_t> seed;
    } llm;
    struct Nli {
        std::string endpoint;
        long timeout_ms = 10000;
        Calibration calibration;
    } nli;
    struct Pipeline {
        std::size_t window = 1;
        double prior = 0.5;
        LogBase entropy_log_base = LogBase::Two;
        std::vector<AgentStyle> tie_break{kAllStyles.begin(), kAllStyles.end()};
        bool parallel_agents = false;
    } pipeline;
    struct Harness {
        int self_consistency_n = 20;
        std::size_t concurrency = 1;
        double cot_temperature = 0.0;
    } harness;
    std::string stub_fixtures;

    /// Throws ConfigError or InvalidCalibration.
    void validate() const;
};

/// Built-in defaults, then `file`, then `overrides`. Unknown keys and
/// unparseable values are ConfigErrors.
AppConfig resolve_config(const ConfigValues& file, const ConfigValues& overrides = {});

/// Every key resolve_config understands.
const std::vector<std::string>& known_config_keys();

PipelineConfig pipeline_config(const AppConfig& config);
HarnessConfig harness_config(const AppConfig& config);

} // namespace toth
