#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include <boost/random/normal_distribution.hpp>
#include <boost/random/uniform_01.hpp>

namespace etcsim {

/// Seeded source of Wiener increments. A stream is fully determined by
/// (seed, trial_index, substream path); two streams built from the same key
/// produce the same sequence bit for bit.
///
/// scale multiplies every increment. 0 gives a noiseless fleet, -1 the
/// sign-flipped fleet used by the symmetry checks.
class NoiseStream {
public:
    NoiseStream(std::uint64_t seed, std::uint64_t trial_index, double scale = 1.0);

    /// Independent child stream. Children with different keys never overlap
    /// in practice; the same key always yields the same child.
    NoiseStream split(std::uint64_t key) const;

    /// Fills out with independent Normal(0, dt) draws (times scale).
    void wiener_increments(double dt, std::span<double> out);
    std::vector<double> wiener_increments(std::size_t n, double dt);

    /// Uniform on [0, 1); unaffected by scale.
    double uniform();

    std::uint64_t seed() const noexcept { return seed_; }
    std::uint64_t trial_index() const noexcept { return trial_index_; }
    double scale() const noexcept { return scale_; }

private:
    NoiseStream(std::uint64_t seed, std::uint64_t trial_index, std::vector<std::uint64_t> path,
                double scale);

    std::uint64_t seed_;
    std::uint64_t trial_index_;
    std::vector<std::uint64_t> path_;
    double scale_;
    std::mt19937_64 engine_;
    boost::random::normal_distribution<double> normal_;
    boost::random::uniform_01<double> uniform_;
};

}  // namespace etcsim
