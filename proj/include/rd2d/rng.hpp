#ifndef RD2D_RNG_HPP
#define RD2D_RNG_HPP

#include <cstdint>
#include <random>

namespace rd2d {

using rng_engine = std::mt19937_64;

// stream tags keep draws of different modules independent under one seed
enum class rng_stream : std::uint32_t {
  scenario = 1,
  channel = 2,
  kappa = 3,
  instance = 4,
};

inline rng_engine make_rng(std::uint64_t seed, rng_stream stream, std::uint64_t sub = 0)
{
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(sub),
                    static_cast<std::uint32_t>(sub >> 32)};
  return rng_engine(seq);
}

} // namespace rd2d

#endif
