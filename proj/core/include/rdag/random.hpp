#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace rdag {

/// Splits one master seed into independent named streams, so adding a new
/// consumer of randomness never shifts the numbers another one sees.
class SeedStreams {
 public:
  explicit SeedStreams(std::uint64_t master) : master_(master) {}

  std::uint64_t master() const noexcept { return master_; }
  std::uint64_t seed_for(std::string_view stream) const;
  std::mt19937_64 engine(std::string_view stream) const { return std::mt19937_64(seed_for(stream)); }

  /// Seed of run `index` in a batch driven by `master`.
  static std::uint64_t run_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::uint64_t master_;
};

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace rdag
