#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "posboot/ledger.hpp"
#include "posboot/rng.hpp"

namespace fixtures {

inline std::vector<posboot::ledger::TransferRecord> e1_records() {
    return {
        {0, "GENESIS", "p1", 12}, {0, "GENESIS", "p4", 5}, {0, "GENESIS", "p5", 5},
        {0, "GENESIS", "p6", 5},  {0, "GENESIS", "p7", 5}, {1, "p1", "p2", 5},
        {1, "p1", "p3", 5},
    };
}

inline std::vector<std::string> e1_players() {
    return {"p1", "p2", "p3", "p4", "p5", "p6", "p7"};
}

inline posboot::ledger::PosGraph e1_graph() {
    const auto records = e1_records();
    const auto players = e1_players();
    return posboot::ledger::ingest(records, players);
}

// theta_hat of Example 1: reported valuations equal post-transfer stakes.
inline std::vector<double> e1_theta() {
    return {2, 5, 5, 5, 5, 5, 5};
}

// Random graph with two planted directed cycles sharing node 2 plus random
// extra edges; at most one direction per pair.
inline posboot::ledger::PosGraph random_multicycle_graph(posboot::rng_engine& rng) {
    std::uniform_int_distribution<std::size_t> size_dist(5, 14);
    std::uniform_real_distribution<double> weight(0.5, 20.0);
    const std::size_t n = size_dist(rng);

    posboot::ledger::PosGraph g;
    for (std::size_t i = 0; i < n; ++i) {
        g.players.push_back("v" + std::to_string(i));
        g.stakes.push_back(weight(rng));
    }

    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    std::map<std::pair<std::size_t, std::size_t>, double> w;
    auto add = [&](std::size_t a, std::size_t b, double x) {
        if (a == b || w.count({a, b}) || w.count({b, a})) {
            return false;
        }
        w[{a, b}] = x;
        return true;
    };
    // a -> b -> c -> a and c -> d -> e -> c
    add(perm[0], perm[1], weight(rng));
    add(perm[1], perm[2], weight(rng));
    add(perm[2], perm[0], weight(rng));
    add(perm[2], perm[3], weight(rng));
    add(perm[3], perm[4], weight(rng));
    add(perm[4], perm[2], weight(rng));

    std::uniform_int_distribution<std::size_t> node(0, n - 1);
    const std::size_t extra = n * 2;
    for (std::size_t k = 0; k < extra; ++k) {
        add(node(rng), node(rng), weight(rng));
    }
    for (const auto& [key, x] : w) {
        g.edges.push_back({key.first, key.second, x});
    }
    return g;
}

}  // namespace fixtures
