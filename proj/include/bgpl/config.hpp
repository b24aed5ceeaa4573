#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "bgpl/endpoint.hpp"
#include "bgpl/evolution.hpp"

namespace bgpl {

/// Held-out split and prediction settings shared by the commands.
struct HarnessConfig {
    double test_ratio = 0.0;     // 0 trains on the whole ground truth
    std::uint64_t split_seed = 1;
    std::size_t predict_k = 100;  // representatives used for prediction; 0 keeps all
};

struct Settings {
    EvolutionConfig evolution;
    EndpointConfig endpoint;
    HarnessConfig harness;
};

/// Every addressable key, in a fixed order: evolution keys without a prefix
/// (`population_size`, `mutation.fix_var`, `fitness.overfit_factor`, ...),
/// then `endpoint.*`, `split.*` and `predict.*`.
const std::vector<std::string>& config_keys();

/// One-line description of a key.
const std::string& config_help(const std::string& key);

/// Throws std::invalid_argument for an unknown key or an unparseable value.
void set_config(Settings& s, const std::string& key, std::string_view value);
std::string get_config(const Settings& s, const std::string& key);

/// `key = value` lines; `#` starts a comment line. Errors name the line.
void apply_config_text(Settings& s, std::string_view text);
void apply_config_file(Settings& s, const std::filesystem::path& path);

/// Checks ranges of every section (throws std::invalid_argument).
void validate(const Settings& s);

/// Typed key/value object of all settings; the password is never written.
nlohmann::json config_json(const Settings& s);
/// Inverse of config_json for the keys present.
void apply_config_json(Settings& s, const nlohmann::json& j);

}  // namespace bgpl
