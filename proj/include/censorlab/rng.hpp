#pragma once

#include <cstdint>
#include <random>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace censorlab {

/// Same output sequence as std::mt19937_64, faster in this build.
using Engine = boost::random::mt19937_64;

/// Independent engine for stream `stream` of `seed`. Monte Carlo batches use
/// (base_seed, batch_index), so results do not depend on how batches are
/// scheduled across threads.
inline Engine make_engine(std::uint64_t seed, std::uint64_t stream = 0) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x9e3779b9u};
    return Engine(seq);
}

/// Standard normal draws (ziggurat).
class NormalSource {
public:
    explicit NormalSource(Engine engine) : engine_(std::move(engine)) {}

    double operator()() { return normal_(engine_); }
    double uniform() { return uniform_(engine_); }

private:
    Engine engine_;
    boost::random::normal_distribution<double> normal_;
    std::uniform_real_distribution<double> uniform_;
};

}  // namespace censorlab
