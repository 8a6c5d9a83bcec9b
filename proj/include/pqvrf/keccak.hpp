#pragma once

// Keccak-256 with the original (pre-FIPS) 0x01 domain padding, as used by Ethereum.

#include <array>
#include <cstdint>
#include <cstring>
#include <string>

#include "pqvrf/bytes.hpp"

namespace pqvrf {

struct Digest {
  std::array<std::uint8_t, 32> bytes{};

  friend bool operator==(const Digest&, const Digest&) = default;
  friend auto operator<=>(const Digest&, const Digest&) = default;

  ByteView view() const { return bytes; }
  std::string hex() const { return to_hex(bytes); }

  static Digest from_hex(std::string_view hex) {
    Bytes b = pqvrf::from_hex(hex);
    if (b.size() != 32) throw DecodeError("digest must be 32 bytes");
    Digest d;
    std::memcpy(d.bytes.data(), b.data(), 32);
    return d;
  }
};

namespace detail {

inline constexpr std::array<std::uint64_t, 24> kKeccakRoundConstants = {
    0x0000000000000001ULL, 0x0000000000008082ULL, 0x800000000000808aULL, 0x8000000080008000ULL,
    0x000000000000808bULL, 0x0000000080000001ULL, 0x8000000080008081ULL, 0x8000000000008009ULL,
    0x000000000000008aULL, 0x0000000000000088ULL, 0x0000000080008009ULL, 0x000000008000000aULL,
    0x000000008000808bULL, 0x800000000000008bULL, 0x8000000000008089ULL, 0x8000000000008003ULL,
    0x8000000000008002ULL, 0x8000000000000080ULL, 0x000000000000800aULL, 0x800000008000000aULL,
    0x8000000080008081ULL, 0x8000000000008080ULL, 0x0000000080000001ULL, 0x8000000080008008ULL};

inline constexpr std::array<int, 24> kRho = {1,  3,  6,  10, 15, 21, 28, 36, 45, 55, 2,  14,
                                             27, 41, 56, 8,  25, 43, 62, 18, 39, 61, 20, 44};
inline constexpr std::array<int, 24> kPi = {10, 7,  11, 17, 18, 3, 5,  16, 8,  21, 24, 4,
                                            15, 23, 19, 13, 12, 2, 20, 14, 22, 9,  6,  1};

inline std::uint64_t rotl(std::uint64_t x, int s) { return (x << s) | (x >> (64 - s)); }

inline void keccak_f1600(std::array<std::uint64_t, 25>& a) {
  for (std::uint64_t rc : kKeccakRoundConstants) {
    std::uint64_t c[5];
    for (int x = 0; x < 5; ++x) c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
    for (int x = 0; x < 5; ++x) {
      std::uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
      for (int y = 0; y < 25; y += 5) a[y + x] ^= d;
    }
    std::uint64_t t = a[1];
    for (int i = 0; i < 24; ++i) {
      std::uint64_t next = a[kPi[i]];
      a[kPi[i]] = rotl(t, kRho[i]);
      t = next;
    }
    for (int y = 0; y < 25; y += 5) {
      std::uint64_t row[5];
      for (int x = 0; x < 5; ++x) row[x] = a[y + x];
      for (int x = 0; x < 5; ++x) a[y + x] = row[x] ^ (~row[(x + 1) % 5] & row[(x + 2) % 5]);
    }
    a[0] ^= rc;
  }
}

}  // namespace detail

// Incremental hasher; absorb any number of chunks, then finish() once.
class Keccak256 {
 public:
  static constexpr std::size_t kRate = 136;

  Keccak256& update(ByteView data) {
    for (std::uint8_t b : data) {
      state_[pos_ / 8] ^= static_cast<std::uint64_t>(b) << (8 * (pos_ % 8));
      if (++pos_ == kRate) {
        detail::keccak_f1600(state_);
        pos_ = 0;
      }
    }
    return *this;
  }
  Keccak256& update(std::string_view s) { return update(as_bytes(s)); }
  Keccak256& update(const Digest& d) { return update(d.view()); }

  Digest finish() {
    state_[pos_ / 8] ^= 0x01ULL << (8 * (pos_ % 8));
    state_[(kRate - 1) / 8] ^= 0x80ULL << (8 * ((kRate - 1) % 8));
    detail::keccak_f1600(state_);
    Digest d;
    for (std::size_t i = 0; i < 32; ++i) d.bytes[i] = static_cast<std::uint8_t>(state_[i / 8] >> (8 * (i % 8)));
    return d;
  }

 private:
  std::array<std::uint64_t, 25> state_{};
  std::size_t pos_ = 0;
};

inline Digest keccak256(ByteView data) { return Keccak256().update(data).finish(); }
inline Digest keccak256(std::string_view data) { return keccak256(as_bytes(data)); }

// Hash of the concatenation of all arguments.
template <typename... Parts>
Digest keccak256_concat(const Parts&... parts) {
  Keccak256 h;
  (h.update(parts), ...);
  return h.finish();
}

}  // namespace pqvrf
