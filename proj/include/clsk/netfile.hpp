#pragma once

#include <stdexcept>
#include <string>

#include "clsk/modem.hpp"

namespace clsk {

struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error("config error: " + msg) {}
};

/// Parses the JSON network description (see README for the schema). Throws
/// ConfigError on malformed input.
CommSystem parse_network(const std::string& text);

CommSystem load_network(const std::string& path);

/// Serializes so that parse(serialize(parse(text))) == parse(text) holds
/// field-for-field (numbers round-trip exactly).
std::string serialize_network(const CommSystem& sys);

void save_network(const std::string& path, const CommSystem& sys);

bool same_system(const CommSystem& a, const CommSystem& b);

}  // namespace clsk
