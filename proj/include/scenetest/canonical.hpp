#pragma once

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace scenetest {

/// Canonical text form: sorted keys, no insignificant whitespace, reals with
/// 17 significant digits, -0 written as 0. Throws std::invalid_argument on
/// non-finite numbers.
std::string canonical_dump(const nlohmann::json& j);

/// Lowercase hex SHA-256 of the bytes.
std::string sha256_hex(std::string_view bytes);

/// sha256_hex(canonical_dump(j)).
std::string digest_of(const nlohmann::json& j);

}  // namespace scenetest
