// Bit strings used across the protocol layers.
//
// Bits are stored one per byte (0 or 1). Hex encoding packs bit i into byte
// i / 8 at position i % 8 (LSB-first) and prints bytes in order.
#pragma once

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace evercommit {

class Rng;

/// Thrown on malformed input (length mismatch, bad encoding, bad parameters).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BitString {
 public:
  BitString() = default;
  explicit BitString(std::size_t len, std::uint8_t fill = 0);
  BitString(std::initializer_list<int> bits);

  /// Parses a string of '0'/'1' characters, index 0 first.
  static BitString from_string(std::string_view s);
  static BitString from_hex(std::string_view hex, std::size_t len);
  static BitString from_uint(std::uint64_t value, std::size_t len);
  static BitString random(std::size_t len, Rng& rng);

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }

  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  std::uint8_t& operator[](std::size_t i) { return bits_[i]; }
  std::uint8_t at(std::size_t i) const;

  void push_back(std::uint8_t b) { bits_.push_back(b & 1u); }
  void flip(std::size_t i) { bits_.at(i) ^= 1u; }

  std::span<const std::uint8_t> view() const { return bits_; }

  std::size_t weight() const;
  bool is_zero() const { return weight() == 0; }

  BitString operator^(const BitString& other) const;
  BitString& operator^=(const BitString& other);
  bool operator==(const BitString& other) const = default;

  /// Concatenation `*this ‖ other`.
  BitString concat(const BitString& other) const;
  BitString slice(std::size_t offset, std::size_t len) const;

  /// Value with bit i at position i; requires size() <= 64.
  std::uint64_t to_uint() const;
  std::string to_string() const;
  std::string to_hex() const;
  /// Packed bytes prefixed with the bit length; usable as a hash-map key.
  std::string key() const;

 private:
  std::vector<std::uint8_t> bits_;
};

}  // namespace evercommit
