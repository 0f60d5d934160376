#include "qkd/sha256.hpp"

#include <stdexcept>

#include <openssl/evp.h>

namespace qkd {

std::array<std::uint8_t, 32> sha256(const std::vector<std::uint8_t>& data) {
  std::array<std::uint8_t, 32> digest{};
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest.data(), &len, EVP_sha256(), nullptr) != 1 ||
      len != digest.size()) {
    throw std::runtime_error("SHA-256 digest failed");
  }
  return digest;
}

}  // namespace qkd
