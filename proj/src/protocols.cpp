#include "posboot/protocols.hpp"

#include <cmath>

namespace posboot::protocols {

double reward_coefficient(double r_b, double b_spent, double gamma) {
    if (!(gamma > 0.0)) {
        throw domain_error("reward_coefficient: gamma must be positive");
    }
    return (r_b - b_spent) * gamma;
}

double utility(double theta_hat, double b, double omega_value, const Penalty& g, double theta) {
    return b * theta_hat - omega_value * g(theta);
}

AirdropVerdict airdrop_ic_check(double b_airdrop, std::size_t k_sybils, double omega_value,
                                const Penalty& g, double theta) {
    if (k_sybils < 1) {
        throw domain_error("airdrop_ic_check: at least one identity required");
    }
    if (b_airdrop < 0.0) {
        throw domain_error("airdrop_ic_check: reward must be non-negative");
    }
    const double penalty = omega_value * g(theta);
    const double honest_reward = b_airdrop;
    const double sybil_reward = b_airdrop * static_cast<double>(k_sybils);
    // The penalty term is shared, so the verdict compares rewards only.
    return {honest_reward - penalty, sybil_reward - penalty, honest_reward >= sybil_reward};
}

PobVerdict pob_ir_check(const PobParams& p, double omega_value, const Penalty& g, double theta) {
    if (!(p.a > 0.0 && p.b_tokens > 0.0 && p.d > 0.0 && p.e > 0.0 && p.gamma > 0.0)) {
        throw input_error("pob_ir_check: a, b, d, e and gamma must be positive");
    }
    const double granted = p.b_tokens * p.e;
    const double burned = p.a * p.d;
    if (granted > burned) {
        throw input_error("pob_ir_check: one-way peg violated (b*e > a*d)");
    }
    const double penalty = omega_value * g(theta);
    const double gain = (granted - burned) * p.gamma * theta;
    return {gain - penalty, -penalty, gain > 0.0};
}

std::optional<W2sbWitness> w2sb_find_deviation(const W2sbParams<double>& p) {
    if (p.m.empty()) {
        return std::nullopt;
    }
    const double M = p.total();
    const auto lo = static_cast<std::size_t>(std::min_element(p.m.begin(), p.m.end()) - p.m.begin());
    const auto hi = static_cast<std::size_t>(std::max_element(p.m.begin(), p.m.end()) - p.m.begin());

    // Upward: positive while a < (r_b / chi) * (1 - m_i/M - chi*M/r_b).
    const double slack = 1.0 - p.m[lo] / M - p.chi * M / p.r_b;
    if (slack > 0.0) {
        const double a = p.chi > 0.0 ? 0.5 * slack * p.r_b / p.chi : M;
        const double gain = w2sb_deviation_utility(p, lo, a, Direction::up);
        if (gain > 0.0) {
            return W2sbWitness{lo, Direction::up, a, gain};
        }
    }
    // Downward: positive while (M - a) * chi > r_b.
    if (p.chi > 0.0) {
        const double limit = std::min(p.m[hi], M - p.r_b / p.chi);
        if (limit > 0.0) {
            const double a = 0.5 * limit;
            const double gain = w2sb_deviation_utility(p, hi, a, Direction::down);
            if (gain > 0.0) {
                return W2sbWitness{hi, Direction::down, a, gain};
            }
        }
    }
    return std::nullopt;
}

const char* to_string(Direction d) {
    return d == Direction::up ? "up" : "down";
}

}  // namespace posboot::protocols
