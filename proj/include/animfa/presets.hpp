#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "animfa/preset_data.hpp" // generated at build time from presets/*.json
#include "animfa/scenario.hpp"

namespace animfa {

inline std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [name, text] : preset_data::entries)
        names.emplace_back(name);
    return names;
}

inline std::string_view preset_text(std::string_view name)
{
    for (const auto& [key, text] : preset_data::entries)
        if (key == name)
            return text;
    std::string known;
    for (const auto& [key, text] : preset_data::entries)
        known += (known.empty() ? "" : ", ") + std::string(key);
    throw Error("unknown preset '" + std::string(name) + "' (known: " + known + ")");
}

inline ScenarioConfig load_preset(std::string_view name)
{
    try {
        return parse_scenario(std::string(preset_text(name)));
    } catch (const Error& e) {
        throw Error("preset " + std::string(name) + ": " + e.what());
    }
}

} // namespace animfa
