#include "posboot/sim.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <numeric>
#include <random>
#include <thread>

#include <boost/math/distributions/chi_squared.hpp>

#include "posboot/error.hpp"
#include "posboot/io.hpp"
#include "posboot/metrics.hpp"

namespace posboot::sim {

namespace {

constexpr double kMinPower = 0.01;

// Random streams of one trajectory.
enum Stream : std::uint64_t { kPowers = 1, kArrivals = 2, kRounds = 3 };

std::pair<std::string, std::vector<double>> split_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw input_error("expected 'name:params', got '" + spec + "'");
    }
    return {spec.substr(0, colon), io::parse_double_list(std::string_view(spec).substr(colon + 1))};
}

double omega_of(std::span<const double> stakes, std::span<const double> powers) {
    if (!(std::accumulate(stakes.begin(), stakes.end(), 0.0) > 0.0)) {
        return kOmegaNoStake;
    }
    return metrics::cnorm(metrics::scaled_stake(stakes, powers));
}

// Index drawn with probability weight[i] / sum over `candidates`.
std::size_t pick_weighted(std::span<const std::size_t> candidates, std::span<const double> weight,
                          rng_engine& rng) {
    double total = 0.0;
    for (std::size_t i : candidates) {
        total += weight[i];
    }
    const double target = uniform01(rng) * total;
    double acc = 0.0;
    for (std::size_t i : candidates) {
        acc += weight[i];
        if (target < acc) {
            return i;
        }
    }
    return candidates.back();
}

}  // namespace

PowerDist parse_power_dist(const std::string& spec) {
    const auto [name, p] = split_spec(spec);
    if (name == "normal" && p.size() == 2) {
        if (!(p[1] > 0.0)) {
            throw input_error("normal power: stddev must be positive");
        }
        return NormalPower{p[0], p[1]};
    }
    if (name == "uniform" && p.size() == 2) {
        if (!(p[1] > std::max(p[0], kMinPower))) {
            throw input_error("uniform power: need hi > max(lo, 0.01)");
        }
        return UniformPower{p[0], p[1]};
    }
    if ((name == "exp" || name == "exponential") && p.size() == 1) {
        if (!(p[0] > 0.0)) {
            throw input_error("exponential power: rate must be positive");
        }
        return ExponentialPower{p[0]};
    }
    throw input_error("unknown power distribution '" + spec +
                      "' (expected normal:MU,SIGMA | uniform:LO,HI | exp:RATE)");
}

std::string to_string(const PowerDist& dist) {
    if (const auto* d = std::get_if<NormalPower>(&dist)) {
        return "normal:" + io::format_number(d->mean) + "," + io::format_number(d->stddev);
    }
    if (const auto* d = std::get_if<UniformPower>(&dist)) {
        return "uniform:" + io::format_number(d->lo) + "," + io::format_number(d->hi);
    }
    return "exp:" + io::format_number(std::get<ExponentialPower>(dist).rate);
}

ArrivalSpec parse_arrival(const std::string& spec) {
    const auto [name, p] = split_spec(spec);
    if ((name == "chisq" || name == "chi2") && p.size() == 2 && p[0] > 0.0 && p[1] >= 0.0) {
        return {p[0], p[1]};
    }
    throw input_error("unknown arrival spec '" + spec + "' (expected chisq:DF,SCALE with DF > 0, SCALE >= 0)");
}

std::string to_string(const ArrivalSpec& spec) {
    return "chisq:" + io::format_number(spec.df) + "," + io::format_number(spec.scale);
}

double arrival_cdf(const ArrivalSpec& spec, std::uint64_t round) {
    if (round == 0) {
        return 0.0;
    }
    if (spec.scale == 0.0) {
        return 1.0;
    }
    // ceil(scale X) <= round  <=>  X <= round / scale, floored at round 1.
    const boost::math::chi_squared_distribution<double> chi2(spec.df);
    return boost::math::cdf(chi2, static_cast<double>(round) / spec.scale);
}

void SimConfig::validate() const {
    if (n < 2) {
        throw input_error("simulation needs at least 2 miners");
    }
    if (total_rounds < 1) {
        throw input_error("total_rounds must be at least 1");
    }
    if (stop_T > total_rounds) {
        throw input_error("stopping time exceeds total_rounds");
    }
    if (!(r_b > 0.0)) {
        throw input_error("block reward must be positive");
    }
    if (!(arrival.df > 0.0) || !(arrival.scale >= 0.0)) {
        throw input_error("invalid arrival distribution");
    }
}

std::vector<std::uint64_t> sample_arrivals(const SimConfig& config, rng_engine& rng) {
    std::vector<std::uint64_t> out(config.n, 1);
    std::chi_squared_distribution<double> chi2(config.arrival.df);
    for (auto& round : out) {
        const double x = chi2(rng);
        const double r = std::ceil(config.arrival.scale * x);
        round = r < 1.0 ? 1 : static_cast<std::uint64_t>(r);
    }
    return out;
}

std::vector<double> sample_powers(const SimConfig& config, rng_engine& rng) {
    std::vector<double> out(config.n);
    if (const auto* d = std::get_if<NormalPower>(&config.power)) {
        std::normal_distribution<double> normal(d->mean, d->stddev);
        for (double& v : out) {
            do {
                v = normal(rng);
            } while (!(v > kMinPower));
        }
    } else if (const auto* d = std::get_if<UniformPower>(&config.power)) {
        const double lo = std::max(d->lo, kMinPower);
        for (double& v : out) {
            v = lo + (d->hi - lo) * uniform01(rng);
        }
    } else {
        std::exponential_distribution<double> expo(std::get<ExponentialPower>(config.power).rate);
        for (double& v : out) {
            v = expo(rng);
        }
    }
    return out;
}

SimTrajectory run(const SimConfig& config) {
    config.validate();

    SimTrajectory traj;
    traj.config = config;
    {
        auto rng = make_engine(config.seed, kPowers);
        traj.powers = sample_powers(config, rng);
    }
    {
        auto rng = make_engine(config.seed, kArrivals);
        traj.arrivals = sample_arrivals(config, rng);
    }
    auto rng = make_engine(config.seed, kRounds);

    const std::size_t n = config.n;
    std::vector<std::size_t> by_arrival(n);
    std::iota(by_arrival.begin(), by_arrival.end(), std::size_t{0});
    std::stable_sort(by_arrival.begin(), by_arrival.end(),
                     [&](std::size_t a, std::size_t b) { return traj.arrivals[a] < traj.arrivals[b]; });

    // Deterministic PoS keeps the stake vector fixed and grows a common
    // multiplier, so omega (scale-free) stays bit-identical after stop_T.
    std::vector<double> stakes(n, 0.0);
    double multiplier = 1.0;
    std::vector<std::size_t> joined;
    std::size_t next_arrival = 0;
    double omega = kOmegaNoStake;
    bool omega_stale = true;

    traj.rounds.reserve(config.total_rounds);
    for (std::uint64_t t = 1; t <= config.total_rounds; ++t) {
        while (next_arrival < n && traj.arrivals[by_arrival[next_arrival]] <= t) {
            joined.push_back(by_arrival[next_arrival++]);
        }
        std::sort(joined.begin(), joined.end());

        if (t <= config.stop_T) {
            if (!joined.empty()) {
                const std::size_t w = pick_weighted(joined, traj.powers, rng);
                stakes[w] += config.r_b;
                omega_stale = true;
                if (config.record_rewards) {
                    traj.rewards.push_back({t, w, config.r_b});
                }
            }
        } else {
            const double base_total = std::accumulate(stakes.begin(), stakes.end(), 0.0);
            if (base_total > 0.0) {
                if (config.pos_payout == PosPayout::deterministic) {
                    const double total = base_total * multiplier;
                    if (config.record_rewards) {
                        for (std::size_t i = 0; i < n; ++i) {
                            if (stakes[i] > 0.0) {
                                traj.rewards.push_back({t, i, config.r_b * stakes[i] / base_total});
                            }
                        }
                    }
                    multiplier *= (total + config.r_b) / total;
                } else {
                    std::vector<std::size_t> holders;
                    for (std::size_t i = 0; i < n; ++i) {
                        if (stakes[i] > 0.0) {
                            holders.push_back(i);
                        }
                    }
                    const std::size_t w = pick_weighted(holders, stakes, rng);
                    stakes[w] += config.r_b;
                    omega_stale = true;
                    if (config.record_rewards) {
                        traj.rewards.push_back({t, w, config.r_b});
                    }
                }
            }
        }

        if (omega_stale) {
            omega = omega_of(stakes, traj.powers);
            omega_stale = false;
        }
        const double total = std::accumulate(stakes.begin(), stakes.end(), 0.0) * multiplier;
        traj.rounds.push_back({t, joined.size(), omega, total});
        if (config.record_stakes) {
            auto& row = traj.stake_history.emplace_back(stakes);
            for (double& s : row) {
                s *= multiplier;
            }
        }
    }

    traj.final_stakes = stakes;
    for (double& s : traj.final_stakes) {
        s *= multiplier;
    }
    return traj;
}

std::optional<std::uint64_t> first_round_below(const SimTrajectory& trajectory, double z) {
    if (!(z > 0.0 && z <= 1.0)) {
        throw domain_error("first_round_below: z must lie in (0, 1]");
    }
    for (const auto& r : trajectory.rounds) {
        if (r.omega <= z) {
            return r.round;
        }
    }
    return std::nullopt;
}

std::vector<SweepRow> sweep(const SimConfig& config, std::span<const double> z_list, std::size_t seeds) {
    if (z_list.empty()) {
        throw input_error("sweep: z list is empty");
    }
    for (std::size_t i = 1; i < z_list.size(); ++i) {
        if (!(z_list[i] < z_list[i - 1])) {
            throw input_error("sweep: z list must be strictly descending");
        }
    }
    if (seeds < 1) {
        throw input_error("sweep: at least one seed required");
    }
    config.validate();

    auto first_rounds = [&](std::size_t s) {
        SimConfig c = config;
        c.seed = derive_seed(config.seed, s);
        c.record_stakes = false;
        c.record_rewards = false;
        const auto traj = run(c);
        std::vector<std::optional<std::uint64_t>> out;
        for (double z : z_list) {
            out.push_back(first_round_below(traj, z));
        }
        return out;
    };

    std::vector<std::vector<std::optional<std::uint64_t>>> per_seed(seeds);
    const std::size_t workers = std::max<std::size_t>(1, std::thread::hardware_concurrency());
    for (std::size_t begin = 0; begin < seeds; begin += workers) {
        const std::size_t end = std::min(seeds, begin + workers);
        std::vector<std::future<std::vector<std::optional<std::uint64_t>>>> batch;
        for (std::size_t s = begin; s < end; ++s) {
            batch.push_back(std::async(std::launch::async, first_rounds, s));
        }
        for (std::size_t s = begin; s < end; ++s) {
            per_seed[s] = batch[s - begin].get();
        }
    }

    std::vector<SweepRow> rows;
    for (std::size_t k = 0; k < z_list.size(); ++k) {
        SweepRow row;
        row.z = z_list[k];
        row.seeds_total = seeds;
        std::vector<double> reached;
        for (const auto& s : per_seed) {
            if (s[k]) {
                reached.push_back(static_cast<double>(*s[k]));
            }
        }
        row.seeds_reached = reached.size();
        if (!reached.empty()) {
            const double mean =
                std::accumulate(reached.begin(), reached.end(), 0.0) / static_cast<double>(reached.size());
            double ss = 0.0;
            for (double r : reached) {
                ss += (r - mean) * (r - mean);
            }
            row.mean_round = mean;
            row.stddev = reached.size() > 1 ? std::sqrt(ss / static_cast<double>(reached.size() - 1)) : 0.0;
        }
        rows.push_back(row);
    }
    return rows;
}

}  // namespace posboot::sim
