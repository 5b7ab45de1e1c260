#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "posboot/ledger.hpp"
#include "posboot/metrics.hpp"
#include "posboot/rng.hpp"

namespace posboot::game {

/// One PoS system state: graph plus valuations.
struct SystemState {
    ledger::PosGraph graph;
    metrics::ValuationProfile valuations;
};

struct UniformValuations {
    double lo = 1.0;
    double hi = 10.0;
};
struct LogNormalValuations {
    double mu = 1.0;
    double sigma = 0.5;
};
/// Fixed valuations for the genesis holders, attacker first.
struct ExplicitValuations {
    std::vector<double> values;
};
using ValuationDist = std::variant<UniformValuations, LogNormalValuations, ExplicitValuations>;

enum class RecipientKind { fresh, existing };

/// Parameters of the single-attacker star generator.
///
/// Genesis stakes are proportional to valuations. One attacker sends a
/// fraction of its genesis stake, split evenly, to ceil(sybil_fraction * n)
/// recipients. Fresh recipients are new identities with zero genesis; existing
/// recipients are other genesis holders. Reported valuations equal the
/// post-transfer stakes.
struct GeneratorParams {
    std::size_t n = 20;
    double sybil_fraction = 0.1;
    RecipientKind recipients = RecipientKind::fresh;
    ValuationDist valuations = UniformValuations{};
    double stake_per_valuation = 1.0;
    double min_edge_fraction = 0.01;        // of total stake
    std::optional<double> min_edge_weight;  // absolute; overrides the fraction
    std::optional<double> transfer_fraction;
};

inline constexpr const char* generator_name = "single-attacker-star";

struct Scenario {
    SystemState attacked;
    SystemState clean;
    std::size_t attacker = 0;
    std::vector<std::size_t> recipients;
    double transfer_fraction = 0.0;
    double min_edge_weight = 0.0;
};

/// Throws input_error for infeasible parameters.
Scenario generate_scenario(const GeneratorParams& params, rng_engine& rng);
Scenario generate_scenario(const GeneratorParams& params, std::uint64_t seed);

/// The edge-removal map: identical players, stakes and valuations, no edges.
SystemState remove_edges(const SystemState& state);

struct Metric {
    std::string name;
    std::function<double(const SystemState&)> evaluate;
};

/// cnorm, cnorm-undo, gini, entropy, nakamoto, constant.
std::vector<std::string> metric_names();
/// Throws input_error for unknown names.
Metric metric_by_name(const std::string& name, double tau_th = metrics::kDefaultNakamotoThreshold);

inline constexpr double kTieTolerance = 1e-12;

struct TrialOutcome {
    bool correct = false;
    bool failed = false;       // metric threw
    bool attacked_first = false;  // slot a holds the attacked system
    double v_a = 0.0;
    double v_b = 0.0;
};

/// Shuffles the pair, evaluates both slots and guesses that the larger value
/// is the attacked system. Ties are broken by a coin flip from `rng`.
TrialOutcome run_trial(const Scenario& scenario, const Metric& metric, rng_engine& rng);

struct GameResult {
    std::string metric_name;
    std::size_t trials = 0;
    std::size_t successes = 0;
    std::size_t failed = 0;
    bool all_correct = false;
    std::vector<TrialOutcome> per_trial;
};

/// kappa independent trials; trial t draws from make_engine(seed, t).
GameResult run_game(const Metric& metric, std::size_t kappa, const GeneratorParams& params,
                    std::uint64_t seed);

}  // namespace posboot::game
