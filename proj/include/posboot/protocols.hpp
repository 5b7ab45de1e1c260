#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posboot/error.hpp"

// Closed-form utility model and IR/IC analyzers for bootstrapping protocols.
//
// The W2SB and stopping-time formulas are templates over the number type so
// the same code runs in double and in exact rational arithmetic.

namespace posboot::protocols {

/// Centralisation penalty g(theta), non-decreasing in theta.
struct Penalty {
    enum class Kind { linear, constant } kind = Kind::linear;
    double coefficient = 1.0;

    double operator()(double theta) const {
        return kind == Kind::linear ? coefficient * theta : coefficient;
    }

    static Penalty linear(double c = 1.0) { return {Kind::linear, c}; }
    static Penalty constant(double c) { return {Kind::constant, c}; }
};

/// Reward coefficient b = (r_b - b_spent) * gamma.
double reward_coefficient(double r_b, double b_spent, double gamma);

/// U_i = b * theta_hat_i - omega * g(theta_i).
double utility(double theta_hat, double b, double omega_value, const Penalty& g, double theta);

struct AirdropVerdict {
    double honest_utility = 0.0;
    double sybil_utility = 0.0;
    bool is_ic = true;
};

/// One identity versus k Sybil identities under a flat per-identity reward.
/// Omega is unchanged by the split since the identities share no on-chain edges.
AirdropVerdict airdrop_ic_check(double b_airdrop, std::size_t k_sybils, double omega_value,
                                const Penalty& g, double theta);

struct PobParams {
    double a = 1.0;         // old tokens burned
    double b_tokens = 1.0;  // new tokens granted
    double d = 1.0;         // old token / USD
    double e = 1.0;         // new token / USD
    double gamma = 1.0;
};

struct PobVerdict {
    double participate_utility = 0.0;
    double abstain_utility = 0.0;
    bool is_ir = false;
};

/// Throws input_error if the one-way peg b*e <= a*d is violated or a
/// parameter is not positive.
PobVerdict pob_ir_check(const PobParams& params, double omega_value, const Penalty& g, double theta);

template <class Real>
struct W2sbParams {
    std::vector<Real> m;  // mining power per miner
    Real chi{};           // cost per unit power per round
    Real r_b{};           // block reward

    Real total() const { return std::accumulate(m.begin(), m.end(), Real{0}); }
    Real min_power() const { return *std::min_element(m.begin(), m.end()); }
};

struct W2sbConditions {
    bool ir_ok = false;
    bool ic_ok = false;
};

/// Lemma conditions: chi*M/r_b <= 1 (IR) and chi*M/r_b >= 1 - m_min/M (IC).
template <class Real>
W2sbConditions w2sb_conditions(const W2sbParams<Real>& p) {
    if (p.m.empty()) {
        throw domain_error("w2sb_conditions: no miners");
    }
    const Real M = p.total();
    if (!(M > Real{0})) {
        throw domain_error("w2sb_conditions: total mining power must be positive");
    }
    if (!(p.r_b > Real{0})) {
        throw domain_error("w2sb_conditions: block reward must be positive");
    }
    const Real load = p.chi * M / p.r_b;
    return {load <= Real{1}, load >= Real{1} - p.min_power() / M};
}

enum class Direction { down, up };

/// Closed-form E[U(deviate) - U(truthful)] for miner i moving its power by a.
///
///   down: (a / (M - a)) * ((M - a) * chi - r_b)
///   up:   (a * r_b / (M + a)) * (1 - m_i / M - chi * (M + a) / r_b)
///
/// Requires 0 < a < m_i for down and a > 0 for up.
template <class Real>
Real w2sb_deviation_utility(const W2sbParams<Real>& p, std::size_t i, const Real& a, Direction dir) {
    if (i >= p.m.size()) {
        throw domain_error("w2sb_deviation_utility: miner index out of range");
    }
    if (!(a > Real{0})) {
        throw domain_error("w2sb_deviation_utility: deviation must be positive");
    }
    const Real M = p.total();
    if (dir == Direction::down) {
        if (!(a < p.m[i])) {
            throw domain_error("w2sb_deviation_utility: downward deviation must be below m_i");
        }
        return (a / (M - a)) * ((M - a) * p.chi - p.r_b);
    }
    return (a * p.r_b / (M + a)) * (Real{1} - p.m[i] / M - p.chi * (M + a) / p.r_b);
}

/// Expected payoff change computed directly from the per-round payoff
/// r_b * m'_i / M' - chi * m'_i, without the closed-form simplification.
template <class Real>
Real w2sb_expected_gain(const W2sbParams<Real>& p, std::size_t i, const Real& a, Direction dir) {
    const Real M = p.total();
    const Real delta = dir == Direction::up ? a : Real{0} - a;
    const Real m_new = p.m[i] + delta;
    const Real M_new = M + delta;
    return p.r_b * (m_new / M_new - p.m[i] / M) - p.chi * delta;
}

struct W2sbWitness {
    std::size_t miner = 0;
    Direction direction = Direction::up;
    double a = 0.0;
    double gain = 0.0;
};

/// Profitable deviation, if the closed forms admit one. Probes the
/// smallest-power miner upward and the largest-power miner downward.
std::optional<W2sbWitness> w2sb_find_deviation(const W2sbParams<double>& p);

/// Stopping-time lower bound psi * T0 * r_b / ((z - x) * chi) + T0.
template <class Real>
Real theorem3_bound(const Real& psi_t0, const Real& t0, const Real& r_b, const Real& chi,
                    const Real& z, const Real& x) {
    if (!(x > Real{0}) || !(x < z) || !(z <= Real{1})) {
        throw domain_error("stopping-time bound requires 0 < x < z <= 1");
    }
    if (!(chi > Real{0})) {
        throw domain_error("stopping-time bound requires chi > 0");
    }
    if (!(psi_t0 > Real{0}) || !(psi_t0 <= Real{1})) {
        throw domain_error("stopping-time bound requires Psi(T0) in (0, 1]");
    }
    return psi_t0 * t0 * r_b / ((z - x) * chi) + t0;
}

const char* to_string(Direction d);

}  // namespace posboot::protocols
