#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace qkd {

std::array<std::uint8_t, 32> sha256(const std::vector<std::uint8_t>& data);

}  // namespace qkd
