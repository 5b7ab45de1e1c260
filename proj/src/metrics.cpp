#include "posboot/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "posboot/error.hpp"

namespace posboot::metrics {

namespace {

void require_same_length(std::size_t a, std::size_t b, const char* what) {
    if (a != b) {
        throw domain_error(std::string(what) + ": length mismatch (" + std::to_string(a) + " vs " +
                           std::to_string(b) + ")");
    }
}

std::vector<double> log_grid(double lo, double hi, std::size_t points) {
    std::vector<double> out(points);
    const double ratio = std::log(hi / lo);
    for (std::size_t m = 0; m < points; ++m) {
        out[m] = lo * std::exp(ratio * static_cast<double>(m) / static_cast<double>(points - 1));
    }
    out.front() = lo;
    out.back() = hi;
    return out;
}

}  // namespace

std::vector<double> scaled_stake(std::span<const double> omega, std::span<const double> theta) {
    require_same_length(omega.size(), theta.size(), "scaled_stake");
    if (omega.empty()) {
        throw domain_error("scaled_stake: empty profile");
    }
    std::vector<double> ratio(omega.size());
    double sum = 0.0;
    double abs_sum = 0.0;
    for (std::size_t i = 0; i < omega.size(); ++i) {
        if (!(theta[i] > 0.0)) {
            throw domain_error("scaled_stake: valuation of player " + std::to_string(i) +
                               " must be positive");
        }
        ratio[i] = omega[i] / theta[i];
        sum += ratio[i];
        abs_sum += std::abs(ratio[i]);
    }
    if (!(std::abs(sum) >= kDegenerateTolerance * abs_sum) || abs_sum == 0.0) {
        throw degenerate_profile_error("scaled_stake: sum of omega/theta vanishes");
    }
    for (double& r : ratio) {
        r /= sum;
    }
    return ratio;
}

double cnorm(std::span<const double> beta) {
    const double uniform = 1.0 / static_cast<double>(beta.size());
    double total = 0.0;
    for (double b : beta) {
        total += std::abs(b - uniform);
    }
    return 0.5 * total;
}

std::vector<double> stake_fractions(std::span<const double> stakes) {
    const double total = std::accumulate(stakes.begin(), stakes.end(), 0.0);
    if (!(total > 0.0)) {
        throw domain_error("stake_fractions: total stake must be positive");
    }
    std::vector<double> out(stakes.begin(), stakes.end());
    for (double& s : out) {
        s /= total;
    }
    return out;
}

double entropy(std::span<const double> shares) {
    if (shares.size() < 2) {
        throw domain_error("entropy: needs at least two players");
    }
    double h = 0.0;
    for (double s : shares) {
        if (s < 0.0) {
            throw domain_error("entropy: shares must be non-negative");
        }
        if (s > 0.0) {
            h -= s * std::log(s);
        }
    }
    return h / std::log(static_cast<double>(shares.size()));
}

double gini(std::span<const double> shares) {
    const std::size_t n = shares.size();
    if (n == 0) {
        return 0.0;
    }
    std::vector<double> sorted(shares.begin(), shares.end());
    std::sort(sorted.begin(), sorted.end());
    // sum_{i,j} |x_i - x_j| = 2 * sum_k (2k - n - 1) x_(k), k 1-based ascending.
    double acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        acc += (2.0 * static_cast<double>(k + 1) - static_cast<double>(n) - 1.0) * sorted[k];
    }
    return 2.0 * acc / (2.0 * static_cast<double>(n));
}

std::size_t nakamoto(std::span<const double> shares, double tau_th) {
    if (!(tau_th > 0.0 && tau_th < 1.0)) {
        throw domain_error("nakamoto: threshold must lie in (0, 1)");
    }
    std::vector<double> sorted(shares.begin(), shares.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());
    double acc = 0.0;
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        acc += sorted[k];
        if (acc > tau_th) {
            return k + 1;
        }
    }
    throw domain_error("nakamoto: total share does not exceed the threshold");
}

ThetaBox ThetaBox::around(std::span<const double> theta, double lo_factor, double hi_factor) {
    ThetaBox box;
    box.lo.reserve(theta.size());
    box.hi.reserve(theta.size());
    for (double t : theta) {
        box.lo.push_back(t * lo_factor);
        box.hi.push_back(t * hi_factor);
    }
    return box;
}

WorstCase cnorm_worstcase(std::span<const double> omega, const ThetaBox& box, std::size_t grid,
                          std::size_t max_evaluations) {
    const std::size_t n = omega.size();
    require_same_length(n, box.lo.size(), "cnorm_worstcase");
    require_same_length(n, box.hi.size(), "cnorm_worstcase");
    if (grid < 2) {
        throw domain_error("cnorm_worstcase: grid must be at least 2");
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!(box.lo[i] > 0.0) || !(box.hi[i] >= box.lo[i])) {
            throw domain_error("cnorm_worstcase: invalid interval for player " + std::to_string(i));
        }
    }

    std::vector<std::size_t> active;
    for (std::size_t i = 0; i < n; ++i) {
        if (omega[i] != 0.0) {
            active.push_back(i);
        }
    }
    std::size_t points = 1;
    for (std::size_t k = 0; k < active.size(); ++k) {
        if (points > max_evaluations / grid) {
            throw domain_error("cnorm_worstcase: grid of " + std::to_string(grid) + "^" +
                               std::to_string(active.size()) + " points exceeds the evaluation budget");
        }
        points *= grid;
    }

    // Per active axis: theta values and the matching omega/theta ratios.
    std::vector<std::vector<double>> thetas;
    std::vector<std::vector<double>> ratios;
    for (std::size_t i : active) {
        thetas.push_back(log_grid(box.lo[i], box.hi[i], grid));
        auto& r = ratios.emplace_back();
        for (double t : thetas.back()) {
            r.push_back(omega[i] / t);
        }
    }

    const double uniform = 1.0 / static_cast<double>(n);
    const double inactive_term = static_cast<double>(n - active.size()) * uniform;

    WorstCase best;
    best.omega_star = -1.0;
    std::vector<std::size_t> digit(active.size(), 0);
    std::vector<std::size_t> best_digit;
    for (std::size_t p = 0; p < points; ++p) {
        double sum = 0.0;
        double abs_sum = 0.0;
        for (std::size_t k = 0; k < active.size(); ++k) {
            const double r = ratios[k][digit[k]];
            sum += r;
            abs_sum += std::abs(r);
        }
        if (!(std::abs(sum) >= kDegenerateTolerance * abs_sum) || abs_sum == 0.0) {
            ++best.skipped;
        } else {
            double dev = inactive_term;
            for (std::size_t k = 0; k < active.size(); ++k) {
                dev += std::abs(ratios[k][digit[k]] / sum - uniform);
            }
            const double value = 0.5 * dev;
            ++best.evaluated;
            if (value > best.omega_star) {
                best.omega_star = value;
                best_digit = digit;
            }
        }
        for (std::size_t k = 0; k < digit.size(); ++k) {
            if (++digit[k] < grid) {
                break;
            }
            digit[k] = 0;
        }
    }
    if (best.evaluated == 0) {
        throw domain_error("cnorm_worstcase: every grid point is degenerate");
    }

    best.argmax_theta.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        best.argmax_theta[i] = std::sqrt(box.lo[i] * box.hi[i]);
    }
    for (std::size_t k = 0; k < active.size(); ++k) {
        best.argmax_theta[active[k]] = thetas[k][best_digit[k]];
    }
    return best;
}

WorstCase cnorm_worstcase(const ledger::PosGraph& graph, ledger::Convention convention,
                          const ThetaBox& box, std::size_t grid, std::size_t max_evaluations) {
    const auto omega = ledger::effective_stakes(graph, convention);
    return cnorm_worstcase(omega, box, grid, max_evaluations);
}

std::size_t percentile_rank(std::size_t n, double delta_percent) {
    if (n == 0) {
        throw domain_error("percentile_rank: empty profile");
    }
    const double raw = std::ceil((1.0 - delta_percent / 100.0) * static_cast<double>(n));
    if (!(raw >= 1.0)) {
        return 1;
    }
    return std::min(n, static_cast<std::size_t>(raw));
}

DecentralizationCheck check_decentralization(std::span<const double> beta, std::size_t joined,
                                             std::size_t total, double tau, double delta_percent,
                                             double epsilon) {
    if (beta.empty() || total == 0) {
        throw domain_error("check_decentralization: empty system");
    }
    std::vector<double> sorted(beta.begin(), beta.end());
    std::sort(sorted.begin(), sorted.end(), std::greater<>());

    DecentralizationCheck out;
    out.participation = static_cast<double>(joined) / static_cast<double>(total);
    out.participation_ok = out.participation >= tau;
    out.beta_max = sorted.front();
    out.beta_delta = sorted[percentile_rank(sorted.size(), delta_percent) - 1];
    if (!(out.beta_delta > 0.0)) {
        throw domain_error("check_decentralization: delta-percentile scaled stake is not positive");
    }
    out.ratio = out.beta_max / out.beta_delta;
    out.proportional_ok = out.ratio <= 1.0 + epsilon;
    out.alpha = cnorm(beta);
    out.epsilon_bound = 2.0 * out.alpha / out.beta_delta;
    return out;
}

MetricReport evaluate(const ledger::PosGraph& graph, std::span<const double> theta_hat,
                      const ReportOptions& options) {
    require_same_length(graph.size(), theta_hat.size(), "evaluate");

    MetricReport report;
    report.convention = options.convention;
    report.tau_th = options.tau_th;
    report.baseline_basis = options.baseline_basis;
    report.omega = ledger::effective_stakes(graph, options.convention);
    report.beta = scaled_stake(report.omega, theta_hat);
    report.cnorm = cnorm(report.beta);

    try {
        const auto box = ThetaBox::around(theta_hat, options.box_lo, options.box_hi);
        report.cnorm_worstcase =
            cnorm_worstcase(report.omega, box, options.grid, options.max_evaluations).omega_star;
    } catch (const domain_error&) {
        report.cnorm_worstcase.reset();
    }

    const auto shares = options.baseline_basis == BaselineBasis::stake_fractions
                            ? stake_fractions(graph.stakes)
                            : report.beta;
    report.gini = gini(shares);
    report.entropy = entropy(shares);
    report.nakamoto = nakamoto(shares, options.tau_th);
    return report;
}

double round6(double x) {
    const double r = std::round(x * 1e6) / 1e6;
    return r == 0.0 ? 0.0 : r;
}

}  // namespace posboot::metrics
