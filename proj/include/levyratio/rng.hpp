#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <limits>

namespace levyratio
{
//---------------------------------------------------------------------------//
/*!
 * SplitMix64 mixing step, used to expand a (seed, stream) pair into
 * generator state.
 */
constexpr std::uint64_t splitmix64(std::uint64_t& state) noexcept
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

//---------------------------------------------------------------------------//
/*!
 * A caller-owned random stream (xoshiro256**).
 *
 * Streams are derived deterministically from a master seed and a stream
 * index, so a batch split into partitions draws identical numbers no matter
 * how many worker threads process it. Satisfies UniformRandomBitGenerator.
 */
class RngStream
{
  public:
    using result_type = std::uint64_t;

    RngStream(std::uint64_t seed, std::uint64_t stream_index) noexcept
    {
        std::uint64_t sm = seed ^ (0xd1b54a32d192ed03ULL * (stream_index + 1));
        // Burn one output so that nearby seeds decorrelate
        splitmix64(sm);
        for (auto& word : state_)
        {
            word = splitmix64(sm);
        }
    }

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept
    {
        auto const result = rotl(state_[1] * 5, 7) * 9;
        auto const t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    //! Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept
    {
        return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
    }

    //! Uniform on (0, 1].
    double uniform_pos() noexcept { return 1.0 - uniform(); }

    //! Unit-mean exponential.
    double exponential() noexcept { return -std::log(uniform_pos()); }

    //! Standard normal by the Box-Muller transform (no cached second value).
    double normal() noexcept
    {
        double const r = std::sqrt(-2 * std::log(uniform_pos()));
        return r * std::cos(6.283185307179586 * uniform());
    }

  private:
    std::array<std::uint64_t, 4> state_{};

    static constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
    {
        return (x << k) | (x >> (64 - k));
    }
};

}  // namespace levyratio
