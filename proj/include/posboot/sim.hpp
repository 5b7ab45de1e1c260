#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "posboot/rng.hpp"

namespace posboot::sim {

struct NormalPower {
    double mean = 7.0;
    double stddev = 3.0;
};
struct UniformPower {
    double lo = 0.0;
    double hi = 50.0;
};
struct ExponentialPower {
    double rate = 1.0;
};
using PowerDist = std::variant<NormalPower, UniformPower, ExponentialPower>;

/// Parses "normal:7,3", "uniform:0,50" or "exp:1".
PowerDist parse_power_dist(const std::string& spec);
std::string to_string(const PowerDist& dist);

/// Arrival round = max(1, ceil(scale * X)), X ~ chi-squared(df).
struct ArrivalSpec {
    double df = 3.0;
    double scale = 1.0;
};

/// Parses "chisq:3,1.0".
ArrivalSpec parse_arrival(const std::string& spec);
std::string to_string(const ArrivalSpec& spec);

/// P(arrival round <= round), the discretised arrival CDF.
double arrival_cdf(const ArrivalSpec& spec, std::uint64_t round);

enum class PosPayout { deterministic, stochastic };

struct SimConfig {
    std::size_t n = 20;
    std::uint64_t stop_T = 1000;
    std::uint64_t total_rounds = 1000;
    double r_b = 1.0;
    double chi = 0.0;  // echoed only; costs do not enter stake
    ArrivalSpec arrival{};
    PowerDist power = NormalPower{};
    PosPayout pos_payout = PosPayout::deterministic;
    std::uint64_t seed = 42;
    bool record_stakes = false;   // per-round stake vectors
    bool record_rewards = false;  // per-payout reward log

    /// Throws input_error when the configuration is invalid.
    void validate() const;
};

struct RoundRecord {
    std::uint64_t round = 0;
    std::size_t joined = 0;
    double omega = 0.0;
    double total_stake = 0.0;
};

struct Reward {
    std::uint64_t round = 0;
    std::size_t miner = 0;
    double amount = 0.0;
};

struct SimTrajectory {
    SimConfig config;
    std::vector<double> powers;
    std::vector<std::uint64_t> arrivals;
    std::vector<RoundRecord> rounds;
    std::vector<double> final_stakes;
    std::vector<std::vector<double>> stake_history;  // only with record_stakes
    std::vector<Reward> rewards;                     // only with record_rewards
};

/// Omega reported for a round in which nobody holds stake yet.
inline constexpr double kOmegaNoStake = 1.0;

std::vector<std::uint64_t> sample_arrivals(const SimConfig& config, rng_engine& rng);

/// Normal draws are resampled until above 0.01; the uniform lower bound is
/// clamped to 0.01.
std::vector<double> sample_powers(const SimConfig& config, rng_engine& rng);

/// W2SB for rounds 1..stop_T (one power-proportional winner among joined
/// miners per round), then PoS until total_rounds. Omega is computed on the
/// edgeless graph of current stakes with theta = mining power.
SimTrajectory run(const SimConfig& config);

/// Smallest round with omega <= z. Throws domain_error unless 0 < z <= 1.
std::optional<std::uint64_t> first_round_below(const SimTrajectory& trajectory, double z);

struct SweepRow {
    double z = 0.0;
    std::optional<double> mean_round;
    double stddev = 0.0;
    std::size_t seeds_reached = 0;
    std::size_t seeds_total = 0;
};

/// Runs `seeds` trajectories (seed s uses derive_seed(config.seed, s)) and
/// summarises first_round_below for each z. z_list must be non-empty and
/// strictly descending. Trajectories run concurrently, merged by seed index.
std::vector<SweepRow> sweep(const SimConfig& config, std::span<const double> z_list, std::size_t seeds);

}  // namespace posboot::sim
