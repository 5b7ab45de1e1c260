#include "posboot/game.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "posboot/error.hpp"

namespace posboot::game {

namespace {

std::vector<double> draw_valuations(const ValuationDist& dist, std::size_t count, rng_engine& rng) {
    std::vector<double> out(count);
    if (const auto* u = std::get_if<UniformValuations>(&dist)) {
        if (!(u->lo > 0.0 && u->hi >= u->lo)) {
            throw input_error("uniform valuations need 0 < lo <= hi");
        }
        for (double& v : out) {
            v = u->lo + (u->hi - u->lo) * uniform01(rng);
        }
    } else if (const auto* ln = std::get_if<LogNormalValuations>(&dist)) {
        std::lognormal_distribution<double> d(ln->mu, ln->sigma);
        for (double& v : out) {
            v = d(rng);
        }
    } else {
        const auto& fixed = std::get<ExplicitValuations>(dist).values;
        if (fixed.size() != count) {
            throw input_error("explicit valuations: expected " + std::to_string(count) + " values, got " +
                              std::to_string(fixed.size()));
        }
        out = fixed;
    }
    for (double v : out) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            throw input_error("valuations must be finite and positive");
        }
    }
    return out;
}

std::string player_id(std::size_t i) {
    return "p" + std::to_string(i + 1);
}

}  // namespace

Scenario generate_scenario(const GeneratorParams& params, rng_engine& rng) {
    const std::size_t n = params.n;
    if (n < 3) {
        throw input_error("generator: n must be at least 3");
    }
    const double raw_k = params.sybil_fraction * static_cast<double>(n);
    if (!(raw_k >= 1.0 - 1e-9)) {
        throw input_error("generator: sybil_fraction * n must be at least 1");
    }
    const auto k = static_cast<std::size_t>(std::ceil(raw_k - 1e-9));
    if (k > n - 1) {
        throw input_error("generator: too many recipients for " + std::to_string(n) + " players");
    }
    if (!(params.stake_per_valuation > 0.0)) {
        throw input_error("generator: stake_per_valuation must be positive");
    }

    const bool fresh = params.recipients == RecipientKind::fresh;
    const std::size_t holders = fresh ? n - k : n;

    // Holder valuations, attacker first. Player layout: attacker at 0; fresh
    // identities at 1..k; remaining holders after.
    std::vector<double> holder_theta = draw_valuations(params.valuations, holders, rng);

    std::vector<std::size_t> holder_slot(holders);
    std::vector<std::size_t> recipients;
    holder_slot[0] = 0;
    if (fresh) {
        for (std::size_t h = 1; h < holders; ++h) {
            holder_slot[h] = k + h;
        }
        for (std::size_t r = 1; r <= k; ++r) {
            recipients.push_back(r);
        }
    } else {
        std::iota(holder_slot.begin(), holder_slot.end(), std::size_t{0});
        std::vector<std::size_t> others(n - 1);
        std::iota(others.begin(), others.end(), std::size_t{1});
        std::shuffle(others.begin(), others.end(), rng);
        recipients.assign(others.begin(), others.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(recipients.begin(), recipients.end());
    }

    const double total_stake =
        params.stake_per_valuation * std::accumulate(holder_theta.begin(), holder_theta.end(), 0.0);
    const double min_edge = params.min_edge_weight.value_or(params.min_edge_fraction * total_stake);
    if (!(min_edge > 0.0)) {
        throw input_error("generator: minimum edge weight must be positive");
    }

    const double nn = static_cast<double>(n);
    const double f_hi = std::min(0.9, (nn - 2.0) / (nn - 1.0));
    const double f_lo = std::min(0.25, f_hi);
    double f = params.transfer_fraction.value_or(f_lo + (f_hi - f_lo) * uniform01(rng));
    if (!(f > 0.0 && f < 1.0)) {
        throw input_error("generator: transfer_fraction must lie in (0, 1)");
    }

    auto needed_fraction = [&] {
        return min_edge * static_cast<double>(k) / (params.stake_per_valuation * holder_theta[0]);
    };
    if (f * params.stake_per_valuation * holder_theta[0] / static_cast<double>(k) < min_edge) {
        if (params.transfer_fraction) {
            throw input_error("generator: fixed transfer_fraction yields edges below the minimum weight");
        }
        if (needed_fraction() > f_hi) {
            // Hand the attacker role to the richest holder.
            auto richest = std::max_element(holder_theta.begin(), holder_theta.end());
            std::iter_swap(holder_theta.begin(), richest);
        }
        if (needed_fraction() > f_hi) {
            throw input_error("generator: no attacker can create edges of the minimum weight");
        }
        f = std::max(f, needed_fraction());
    }

    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids[i] = player_id(i);
    }
    std::vector<double> theta(n, 0.0);
    std::vector<ledger::TransferRecord> records;
    for (std::size_t h = 0; h < holders; ++h) {
        theta[holder_slot[h]] = holder_theta[h];
        records.push_back({0, ledger::genesis_id, ids[holder_slot[h]],
                           params.stake_per_valuation * holder_theta[h]});
    }
    const double sent = f * params.stake_per_valuation * holder_theta[0];
    const double per_edge = sent / static_cast<double>(k);
    for (std::size_t r : recipients) {
        records.push_back({1, ids[0], ids[r], per_edge});
    }

    Scenario s;
    s.attacked.graph = ledger::eliminate_cycles(ledger::ingest(records, ids));
    s.attacked.valuations.theta = std::move(theta);
    s.attacked.valuations.theta_hat = s.attacked.graph.stakes;
    s.clean = remove_edges(s.attacked);
    s.attacker = 0;
    s.recipients = std::move(recipients);
    s.transfer_fraction = f;
    s.min_edge_weight = min_edge;
    return s;
}

Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed) {
    auto rng = make_engine(seed, 0);
    return generate_scenario(params, rng);
}

SystemState remove_edges(const SystemState& state) {
    return {ledger::without_edges(state.graph), state.valuations};
}

std::vector<std::string> metric_names() {
    return {"cnorm", "cnorm-undo", "gini", "entropy", "nakamoto", "constant"};
}

Metric metric_by_name(const std::string& name, double tau_th) {
    using ledger::Convention;
    auto cnorm_with = [](Convention c) {
        return [c](const SystemState& s) {
            const auto omega = ledger::effective_stakes(s.graph, c);
            return metrics::cnorm(metrics::scaled_stake(omega, s.valuations.theta_hat));
        };
    };
    if (name == "cnorm") {
        return {name, cnorm_with(Convention::paper)};
    }
    if (name == "cnorm-undo") {
        return {name, cnorm_with(Convention::undo)};
    }
    if (name == "gini") {
        return {name, [](const SystemState& s) {
                    return metrics::gini(metrics::stake_fractions(s.graph.stakes));
                }};
    }
    if (name == "entropy") {
        return {name, [](const SystemState& s) {
                    return metrics::entropy(metrics::stake_fractions(s.graph.stakes));
                }};
    }
    if (name == "nakamoto") {
        return {name, [tau_th](const SystemState& s) {
                    return static_cast<double>(
                        metrics::nakamoto(metrics::stake_fractions(s.graph.stakes), tau_th));
                }};
    }
    if (name == "constant") {
        return {name, [](const SystemState&) { return 0.0; }};
    }
    std::string valid;
    for (const auto& m : metric_names()) {
        valid += (valid.empty() ? "" : ", ") + m;
    }
    throw input_error("unknown metric '" + name + "' (valid: " + valid + ")");
}

TrialOutcome run_trial(const Scenario& scenario, const Metric& metric, rng_engine& rng) {
    TrialOutcome out;
    out.attacked_first = uniform01(rng) < 0.5;
    const SystemState& a = out.attacked_first ? scenario.attacked : scenario.clean;
    const SystemState& b = out.attacked_first ? scenario.clean : scenario.attacked;
    const bool coin = uniform01(rng) < 0.5;
    try {
        out.v_a = metric.evaluate(a);
        out.v_b = metric.evaluate(b);
    } catch (const posboot::error&) {
        out.failed = true;
        return out;
    }
    const bool guess_first = std::abs(out.v_a - out.v_b) < kTieTolerance ? coin : out.v_a > out.v_b;
    out.correct = guess_first == out.attacked_first;
    return out;
}

GameResult run_game(const Metric& metric, std::size_t kappa, const GeneratorParams& params,
                    std::uint64_t seed) {
    if (kappa < 1) {
        throw input_error("run_game: at least one trial required");
    }
    GameResult result;
    result.metric_name = metric.name;
    result.trials = kappa;
    result.per_trial.reserve(kappa);
    for (std::size_t t = 0; t < kappa; ++t) {
        auto rng = make_engine(seed, t);
        const auto scenario = generate_scenario(params, rng);
        const auto outcome = run_trial(scenario, metric, rng);
        result.successes += outcome.correct ? 1 : 0;
        result.failed += outcome.failed ? 1 : 0;
        result.per_trial.push_back(outcome);
    }
    result.all_correct = result.successes == result.trials;
    return result;
}

}  // namespace posboot::game
