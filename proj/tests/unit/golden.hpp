// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <fstream>

#include <json.hpp>

inline const nlohmann::json& golden() {
  static const nlohmann::json g = [] {
    std::ifstream in(HTOPOS_GOLDEN);
    return nlohmann::json::parse(in);
  }();
  return g;
}
