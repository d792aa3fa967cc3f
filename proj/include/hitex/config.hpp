#pragma once

#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

#include "hitex/ranking.hpp"

namespace hitex {

enum class ProfileName { paper_eval, dictionary_example, permissive };

std::string_view to_string(ProfileName p);
std::optional<ProfileName> parse_profile(std::string_view name);

SelectionConfig default_config(ProfileName profile);
// Throws ConfigError for an unknown name.
SelectionConfig default_config(std::string_view profile);

// Accepts a config document (see data/config.schema.json); fields not present
// keep the values of `profile` (or paper_eval). Collects every problem before
// throwing ConfigError.
SelectionConfig validate_config(const nlohmann::json& doc);

// Full explicit form; validate_config(config_to_json(c)) == c.
nlohmann::json config_to_json(const SelectionConfig& config);

nlohmann::json query_to_json(const SearchQuery& query);
// Problems are appended to `errors`; fields absent from `j` keep `base`.
SearchQuery query_from_json(const nlohmann::json& j, std::vector<std::string>& errors, SearchQuery base = {});

// Catalog served by GET /criteria: ids, allowed modes, parameter specs, defaults.
nlohmann::json criteria_catalog_json();

// JSON Schema (draft 2020-12) for config documents; shipped as data/config.schema.json.
nlohmann::json config_json_schema();

}  // namespace hitex
