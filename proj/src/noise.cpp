#include "etcsim/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace etcsim {
namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t trial,
                            const std::vector<std::uint64_t>& path) {
    std::vector<std::uint32_t> key;
    key.reserve(5 + 2 * path.size());
    auto push64 = [&key](std::uint64_t v) {
        key.push_back(static_cast<std::uint32_t>(v));
        key.push_back(static_cast<std::uint32_t>(v >> 32));
    };
    push64(seed);
    push64(trial);
    key.push_back(static_cast<std::uint32_t>(path.size()));
    for (auto p : path) push64(p);
    std::seed_seq seq(key.begin(), key.end());
    return std::mt19937_64(seq);
}

}  // namespace

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t trial_index, double scale)
    : NoiseStream(seed, trial_index, {}, scale) {}

NoiseStream::NoiseStream(std::uint64_t seed, std::uint64_t trial_index,
                         std::vector<std::uint64_t> path, double scale)
    : seed_(seed),
      trial_index_(trial_index),
      path_(std::move(path)),
      scale_(scale),
      engine_(make_engine(seed, trial_index, path_)) {
    if (!std::isfinite(scale)) throw std::invalid_argument("NoiseStream: scale must be finite");
}

NoiseStream NoiseStream::split(std::uint64_t key) const {
    auto child = path_;
    child.push_back(key);
    return NoiseStream(seed_, trial_index_, std::move(child), scale_);
}

void NoiseStream::wiener_increments(double dt, std::span<double> out) {
    if (!(dt > 0.0)) throw std::invalid_argument("wiener_increments: dt must be positive");
    const double sd = std::sqrt(dt) * scale_;
    for (double& v : out) v = sd * normal_(engine_);
}

std::vector<double> NoiseStream::wiener_increments(std::size_t n, double dt) {
    std::vector<double> out(n);
    wiener_increments(dt, out);
    return out;
}

double NoiseStream::uniform() { return uniform_(engine_); }

}  // namespace etcsim
