#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace qkd {

// Fixed-width bit sequence. Bit 0 is the leftmost (most significant) position.
// Byte and hex packings are big-endian with zero padding on the right, so a
// width that is not a byte multiple still has a stable, lossless encoding when
// the width is carried alongside.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t width) : bits_(width, 0) {}

  static BitString from_bits(std::vector<std::uint8_t> bits);
  // Parses "0101..."; anything but '0'/'1' is rejected.
  static BitString from_string(std::string_view zeros_and_ones);
  // Parses the big-endian hex packing produced by to_hex(). The hex must cover
  // exactly ceil(width / 8) bytes and the padding bits must be zero.
  static BitString from_hex(std::string_view hex, std::size_t width);

  std::size_t width() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  int bit(std::size_t i) const;
  void set_bit(std::size_t i, int value);
  void push_back(int value);
  void reserve(std::size_t n) { bits_.reserve(n); }

  std::string to_string() const;
  std::string to_hex() const;
  std::vector<std::uint8_t> to_bytes() const;

  BitString slice(std::size_t offset, std::size_t length) const;
  bool all_zero() const;
  std::size_t count_ones() const;

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;  // one element per bit, each 0 or 1
};

// Bitwise XOR with the second operand cyclically repeated (or truncated) to the
// first operand's width. Reduces to plain XOR for equal widths. Rejects an
// empty second operand.
BitString xor_ext(const BitString& a, const BitString& b);

BitString concat(const BitString& a, const BitString& b);

// Number of positions at which two equal-width strings differ.
std::size_t hamming_distance(const BitString& a, const BitString& b);

}  // namespace qkd
