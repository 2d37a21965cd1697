#include "evercommit/bits.hpp"

#include <algorithm>

#include "evercommit/rng.hpp"

namespace evercommit {

namespace {

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  return -1;
}

}  // namespace

BitString::BitString(std::size_t len, std::uint8_t fill) : bits_(len, fill & 1u) {}

BitString::BitString(std::initializer_list<int> bits) {
  bits_.reserve(bits.size());
  for (int b : bits) bits_.push_back(static_cast<std::uint8_t>(b & 1));
}

BitString BitString::from_string(std::string_view s) {
  BitString out;
  out.bits_.reserve(s.size());
  for (char c : s) {
    if (c != '0' && c != '1') throw Error("bit string: unexpected character");
    out.bits_.push_back(static_cast<std::uint8_t>(c - '0'));
  }
  return out;
}

BitString BitString::from_hex(std::string_view hex, std::size_t len) {
  if (hex.size() != 2 * ((len + 7) / 8)) throw Error("hex: length does not match bit count");
  BitString out(len);
  for (std::size_t byte = 0; byte < hex.size() / 2; ++byte) {
    int hi = hex_value(hex[2 * byte]);
    int lo = hex_value(hex[2 * byte + 1]);
    if (hi < 0 || lo < 0) throw Error("hex: invalid digit");
    unsigned v = static_cast<unsigned>(hi * 16 + lo);
    for (std::size_t k = 0; k < 8; ++k) {
      std::size_t i = byte * 8 + k;
      std::uint8_t b = (v >> k) & 1u;
      if (i < len) {
        out.bits_[i] = b;
      } else if (b) {
        throw Error("hex: padding bits must be zero");
      }
    }
  }
  return out;
}

BitString BitString::from_uint(std::uint64_t value, std::size_t len) {
  if (len > 64) throw Error("from_uint: length exceeds 64");
  BitString out(len);
  for (std::size_t i = 0; i < len; ++i) out.bits_[i] = (value >> i) & 1u;
  return out;
}

BitString BitString::random(std::size_t len, Rng& rng) {
  BitString out(len);
  std::size_t i = 0;
  while (i < len) {
    std::uint64_t word = rng.next_u64();
    for (std::size_t k = 0; k < 64 && i < len; ++k, ++i) out.bits_[i] = (word >> k) & 1u;
  }
  return out;
}

std::uint8_t BitString::at(std::size_t i) const { return bits_.at(i); }

std::size_t BitString::weight() const {
  return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

BitString BitString::operator^(const BitString& other) const {
  BitString out = *this;
  out ^= other;
  return out;
}

BitString& BitString::operator^=(const BitString& other) {
  if (other.size() != size()) throw Error("xor: length mismatch");
  for (std::size_t i = 0; i < bits_.size(); ++i) bits_[i] ^= other.bits_[i];
  return *this;
}

BitString BitString::concat(const BitString& other) const {
  BitString out = *this;
  out.bits_.insert(out.bits_.end(), other.bits_.begin(), other.bits_.end());
  return out;
}

BitString BitString::slice(std::size_t offset, std::size_t len) const {
  if (offset + len > size()) throw Error("slice: out of range");
  BitString out;
  out.bits_.assign(bits_.begin() + static_cast<std::ptrdiff_t>(offset),
                   bits_.begin() + static_cast<std::ptrdiff_t>(offset + len));
  return out;
}

std::uint64_t BitString::to_uint() const {
  if (size() > 64) throw Error("to_uint: more than 64 bits");
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < size(); ++i) v |= static_cast<std::uint64_t>(bits_[i]) << i;
  return v;
}

std::string BitString::to_string() const {
  std::string s(size(), '0');
  for (std::size_t i = 0; i < size(); ++i) s[i] = bits_[i] ? '1' : '0';
  return s;
}

std::string BitString::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::size_t nbytes = (size() + 7) / 8;
  std::string out;
  out.reserve(2 * nbytes);
  for (std::size_t byte = 0; byte < nbytes; ++byte) {
    unsigned v = 0;
    for (std::size_t k = 0; k < 8; ++k) {
      std::size_t i = byte * 8 + k;
      if (i < size()) v |= static_cast<unsigned>(bits_[i]) << k;
    }
    out.push_back(kDigits[v >> 4]);
    out.push_back(kDigits[v & 0xf]);
  }
  return out;
}

std::string BitString::key() const {
  std::string out;
  std::size_t nbytes = (size() + 7) / 8;
  out.resize(sizeof(std::uint32_t) + nbytes, '\0');
  auto len = static_cast<std::uint32_t>(size());
  for (std::size_t k = 0; k < sizeof(len); ++k) out[k] = static_cast<char>((len >> (8 * k)) & 0xff);
  for (std::size_t i = 0; i < size(); ++i) {
    out[sizeof(len) + i / 8] = static_cast<char>(static_cast<unsigned char>(out[sizeof(len) + i / 8]) |
                                                 (bits_[i] << (i % 8)));
  }
  return out;
}

}  // namespace evercommit
