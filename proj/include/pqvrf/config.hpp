#pragma once

// Run configuration shared by the command-line tool and tests.

#include <cstdint>
#include <optional>
#include <string>

#include "pqvrf/bytes.hpp"

namespace pqvrf {

struct RunConfig {
  std::string group = "modp2048";
  std::string rlwe = "R256";
  std::size_t participants = 5;
  std::size_t reveal_threshold = 0;  // 0: every participant must reveal
  std::size_t rounds = 1;
  std::optional<std::uint64_t> seed;
  std::string output_dir = "out";
  bool literal_alg2 = false;
  bool deterministic = false;

  void validate() const {
    if (participants == 0) throw Error("participants must be at least 1");
    if (participants > 0xffff) throw Error("participants must fit 16 bits");
    if (reveal_threshold > participants) throw Error("reveal threshold exceeds participants");
    if (rounds == 0) throw Error("rounds must be at least 1");
    if (deterministic && !seed) throw Error("deterministic mode requires a seed");
  }
};

}  // namespace pqvrf
