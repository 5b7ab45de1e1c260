#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "posboot/ledger.hpp"

namespace posboot::metrics {

/// Private (theta) and reported (theta_hat) valuations, one entry per player.
struct ValuationProfile {
    std::vector<double> theta;
    std::vector<double> theta_hat;

    std::size_t size() const { return theta.size(); }
};

/// Relative size below which the scaled-stake denominator counts as zero.
inline constexpr double kDegenerateTolerance = 1e-9;
inline constexpr double kDefaultNakamotoThreshold = 1.0 / 3.0;

/// beta_i = (omega_i / theta_i) / sum_j (omega_j / theta_j).
///
/// Throws domain_error for a non-positive theta or mismatched lengths and
/// degenerate_profile_error when |sum| < 1e-9 * sum |omega_j / theta_j|.
std::vector<double> scaled_stake(std::span<const double> omega, std::span<const double> theta);

/// C-NORM: half the L1 distance of beta from the uniform vector.
double cnorm(std::span<const double> beta);

/// Stake fractions c_i / sum c.
std::vector<double> stake_fractions(std::span<const double> stakes);

/// Normalised Shannon entropy, 0 log 0 := 0. Requires at least two players.
double entropy(std::span<const double> shares);

/// (1 / 2n) * sum_i sum_j |x_i - x_j|, evaluated in O(n log n).
double gini(std::span<const double> shares);

/// Smallest number of players whose combined share strictly exceeds `tau_th`.
/// Greedy by descending share. Throws domain_error if no set qualifies.
std::size_t nakamoto(std::span<const double> shares, double tau_th = kDefaultNakamotoThreshold);

/// Per-player multiplicative box [lo * theta_i, hi * theta_i].
struct ThetaBox {
    std::vector<double> lo;
    std::vector<double> hi;

    static ThetaBox around(std::span<const double> theta, double lo_factor, double hi_factor);
};

struct WorstCase {
    double omega_star = 0.0;
    std::vector<double> argmax_theta;
    std::size_t evaluated = 0;
    std::size_t skipped = 0;  // profiles rejected by the degenerate guard
};

/// Grid maximisation of cnorm(scaled_stake(omega, theta)) over a box.
///
/// Each axis carries `grid` log-spaced points including both bounds. Players
/// with omega_i == 0 have beta_i == 0 for every theta and are not gridded.
/// Throws domain_error if the grid exceeds `max_evaluations` points or no
/// grid point is feasible.
WorstCase cnorm_worstcase(std::span<const double> omega, const ThetaBox& box, std::size_t grid,
                          std::size_t max_evaluations = std::size_t{1} << 30);

WorstCase cnorm_worstcase(const ledger::PosGraph& graph, ledger::Convention convention,
                          const ThetaBox& box, std::size_t grid,
                          std::size_t max_evaluations = std::size_t{1} << 30);

/// 1-based descending rank of the delta-percentile player:
/// ceil((1 - delta/100) * n), clamped to [1, n].
std::size_t percentile_rank(std::size_t n, double delta_percent);

struct DecentralizationCheck {
    bool participation_ok = false;
    double participation = 0.0;
    double beta_max = 0.0;
    double beta_delta = 0.0;
    double ratio = 0.0;           // beta_max / beta_delta
    bool proportional_ok = false;  // ratio <= 1 + epsilon
    double alpha = 0.0;            // cnorm(beta)
    double epsilon_bound = 0.0;    // 2 alpha / beta_delta
    bool satisfied() const { return participation_ok && proportional_ok; }
};

/// Minimum participation and proportionality for a scaled-stake vector, plus
/// the epsilon implied by its C-NORM. Throws domain_error when beta_delta <= 0.
DecentralizationCheck check_decentralization(std::span<const double> beta, std::size_t joined,
                                             std::size_t total, double tau, double delta_percent,
                                             double epsilon);

enum class BaselineBasis { stake_fractions, scaled_stakes };

struct ReportOptions {
    ledger::Convention convention = ledger::Convention::paper;
    double tau_th = kDefaultNakamotoThreshold;
    BaselineBasis baseline_basis = BaselineBasis::stake_fractions;
    // Worst-case search; skipped when the grid would exceed the budget.
    double box_lo = 0.5;
    double box_hi = 2.0;
    std::size_t grid = 3;
    std::size_t max_evaluations = 2'000'000;
};

struct MetricReport {
    double cnorm = 0.0;
    std::optional<double> cnorm_worstcase;
    double gini = 0.0;
    double entropy = 0.0;
    std::size_t nakamoto = 0;
    ledger::Convention convention = ledger::Convention::paper;
    double tau_th = kDefaultNakamotoThreshold;
    BaselineBasis baseline_basis = BaselineBasis::stake_fractions;
    std::vector<double> omega;
    std::vector<double> beta;
};

/// C-NORM at the reported valuations plus the three baselines.
MetricReport evaluate(const ledger::PosGraph& graph, std::span<const double> theta_hat,
                      const ReportOptions& options = {});

/// Rounds to 6 decimals for serialisation.
double round6(double x);

}  // namespace posboot::metrics
