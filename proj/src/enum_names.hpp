#pragma once

#include <string>
#include <string_view>
#include <utility>

#include "scenetest/error.hpp"

namespace scenetest::detail {

template <typename E, std::size_t N>
std::string_view name_of(const std::pair<E, std::string_view> (&table)[N], E value) {
  for (const auto& [e, name] : table) {
    if (e == value) return name;
  }
  return "?";
}

template <typename E, std::size_t N>
E value_of(const std::pair<E, std::string_view> (&table)[N], std::string_view text,
           std::string_view what) {
  for (const auto& [e, name] : table) {
    if (name == text) return e;
  }
  throw ParseError("unknown " + std::string(what) + " '" + std::string(text) + "'");
}

}  // namespace scenetest::detail
