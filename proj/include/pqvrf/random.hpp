#pragma once

#include <concepts>
#include <cstdint>
#include <limits>
#include <random>

#include "pqvrf/bytes.hpp"
#include "pqvrf/keccak.hpp"

namespace pqvrf {

// Counter-mode Keccak generator. Seeded explicitly for reproducible runs,
// or from the OS entropy source otherwise. Models UniformRandomBitGenerator.
class Rng {
 public:
  using result_type = std::uint64_t;

  explicit Rng(ByteView seed) : key_(keccak256_concat(std::string_view("pqvrf-rng"), seed)) {}
  explicit Rng(std::uint64_t seed) {
    Bytes b;
    append_be(b, seed, 8);
    key_ = keccak256_concat(std::string_view("pqvrf-rng"), ByteView(b));
  }

  static Rng from_os() {
    std::random_device rd;
    Bytes seed;
    for (int i = 0; i < 8; ++i) append_be(seed, rd(), 4);
    return Rng(ByteView(seed));
  }

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    result_type v = 0;
    for (int i = 0; i < 8; ++i) v = (v << 8) | next_byte();
    return v;
  }

  std::uint8_t next_byte() {
    if (pos_ == block_.bytes.size()) refill();
    return block_.bytes[pos_++];
  }

  void fill(std::span<std::uint8_t> out) {
    for (auto& b : out) b = next_byte();
  }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  bool next_bit() {
    if (bit_ == 0) {
      cur_ = next_byte();
      bit_ = 8;
    }
    --bit_;
    return (cur_ >> bit_) & 1;
  }

 private:
  void refill() {
    Bytes ctr;
    append_be(ctr, counter_++, 8);
    block_ = keccak256_concat(key_, ByteView(ctr));
    pos_ = 0;
  }

  Digest key_;
  Digest block_;
  std::size_t pos_ = 32;
  std::uint64_t counter_ = 0;
  std::uint8_t cur_ = 0;
  int bit_ = 0;
};

// Anything that yields one bit at a time.
template <typename T>
concept BitSource = requires(T& t) {
  { t.next_bit() } -> std::convertible_to<bool>;
};

class BitSourceExhausted : public Error {
 public:
  BitSourceExhausted() : Error("bit source exhausted") {}
};

// Unbounded deterministic stream: keccak256(prefix || counter) blocks, counter as
// 4-byte big-endian starting at 0, bits consumed MSB-first within each byte.
class KeccakBitStream {
 public:
  explicit KeccakBitStream(Bytes prefix) : prefix_(std::move(prefix)) {}

  std::uint8_t next_byte() {
    if (pos_ == 32) {
      Bytes ctr;
      append_be(ctr, counter_++, 4);
      block_ = keccak256_concat(ByteView(prefix_), ByteView(ctr));
      pos_ = 0;
    }
    return block_.bytes[pos_++];
  }

  bool next_bit() {
    if (bit_ == 0) {
      cur_ = next_byte();
      bit_ = 8;
    }
    --bit_;
    return (cur_ >> bit_) & 1;
  }

  std::uint64_t bits_consumed() const { return (counter_ * 32 - (32 - pos_)) * 8 - bit_; }

 private:
  Bytes prefix_;
  Digest block_;
  std::size_t pos_ = 32;
  std::uint32_t counter_ = 0;
  std::uint8_t cur_ = 0;
  int bit_ = 0;
};

// Fixed buffer of bits; throws BitSourceExhausted past the end.
class FiniteBitSource {
 public:
  explicit FiniteBitSource(Bytes data) : data_(std::move(data)) {}

  bool next_bit() {
    if (index_ >= data_.size() * 8) throw BitSourceExhausted();
    bool b = (data_[index_ / 8] >> (7 - index_ % 8)) & 1;
    ++index_;
    return b;
  }

 private:
  Bytes data_;
  std::size_t index_ = 0;
};

}  // namespace pqvrf
