#include "qkd/bitstring.hpp"

#include <stdexcept>

namespace qkd {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  throw std::invalid_argument(std::string("invalid hex digit '") + c + "'");
}

constexpr char kHexDigits[] = "0123456789abcdef";

}  // namespace

BitString BitString::from_bits(std::vector<std::uint8_t> bits) {
  for (auto b : bits) {
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
  }
  BitString out;
  out.bits_ = std::move(bits);
  return out;
}

BitString BitString::from_string(std::string_view zeros_and_ones) {
  BitString out;
  out.bits_.reserve(zeros_and_ones.size());
  for (char c : zeros_and_ones) {
    if (c != '0' && c != '1') {
      throw std::invalid_argument("bit string may contain only '0' and '1'");
    }
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t width) {
  const std::size_t num_bytes = (width + 7) / 8;
  if (hex.size() != num_bytes * 2) {
    throw std::invalid_argument("hex length does not match width");
  }
  BitString out;
  out.bits_.reserve(width);
  for (std::size_t i = 0; i < width; ++i) {
    const int nibble = hex_value(hex[i / 4]);
    out.bits_.push_back(static_cast<std::uint8_t>((nibble >> (3 - i % 4)) & 1));
  }
  // The right padding must be zero for the encoding to be canonical.
  for (std::size_t i = width; i < num_bytes * 8; ++i) {
    if ((hex_value(hex[i / 4]) >> (3 - i % 4)) & 1) {
      throw std::invalid_argument("nonzero padding bits in hex encoding");
    }
  }
  return out;
}

int BitString::bit(std::size_t i) const {
  if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
  return bits_[i];
}

void BitString::set_bit(std::size_t i, int value) {
  if (i >= bits_.size()) throw std::out_of_range("bit index out of range");
  if (value != 0 && value != 1) throw std::invalid_argument("bit values must be 0 or 1");
  bits_[i] = static_cast<std::uint8_t>(value);
}

void BitString::push_back(int value) {
  if (value != 0 && value != 1) throw std::invalid_argument("bit values must be 0 or 1");
  bits_.push_back(static_cast<std::uint8_t>(value));
}

std::string BitString::to_string() const {
  std::string s;
  s.reserve(bits_.size());
  for (auto b : bits_) s.push_back(static_cast<char>('0' + b));
  return s;
}

std::vector<std::uint8_t> BitString::to_bytes() const {
  std::vector<std::uint8_t> bytes((bits_.size() + 7) / 8, 0);
  for (std::size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i]) bytes[i / 8] |= static_cast<std::uint8_t>(0x80u >> (i % 8));
  }
  return bytes;
}

std::string BitString::to_hex() const {
  std::string s;
  const auto bytes = to_bytes();
  s.reserve(bytes.size() * 2);
  for (auto b : bytes) {
    s.push_back(kHexDigits[b >> 4]);
    s.push_back(kHexDigits[b & 0xf]);
  }
  return s;
}

BitString BitString::slice(std::size_t offset, std::size_t length) const {
  if (offset + length > bits_.size()) throw std::out_of_range("slice out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + length));
  return out;
}

bool BitString::all_zero() const {
  for (auto b : bits_) {
    if (b) return false;
  }
  return true;
}

std::size_t BitString::count_ones() const {
  std::size_t n = 0;
  for (auto b : bits_) n += b;
  return n;
}

BitString xor_ext(const BitString& a, const BitString& b) {
  if (b.empty()) throw std::invalid_argument("xor_ext: second operand is empty");
  BitString out(a.width());
  for (std::size_t i = 0; i < a.width(); ++i) {
    out.set_bit(i, a.bit(i) ^ b.bit(i % b.width()));
  }
  return out;
}

BitString concat(const BitString& a, const BitString& b) {
  BitString out;
  out.reserve(a.width() + b.width());
  for (std::size_t i = 0; i < a.width(); ++i) out.push_back(a.bit(i));
  for (std::size_t i = 0; i < b.width(); ++i) out.push_back(b.bit(i));
  return out;
}

std::size_t hamming_distance(const BitString& a, const BitString& b) {
  if (a.width() != b.width()) {
    throw std::invalid_argument("hamming_distance: width mismatch");
  }
  std::size_t n = 0;
  for (std::size_t i = 0; i < a.width(); ++i) n += static_cast<std::size_t>(a.bit(i) != b.bit(i));
  return n;
}

}  // namespace qkd
