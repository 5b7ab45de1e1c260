#include "posboot/ledger.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <unordered_map>
#include <utility>

#include "posboot/error.hpp"

namespace posboot::ledger {

namespace {

// Relative slack for "equal opposing flows cancel" and overdraft checks.
constexpr double kFlowEpsilon = 1e-12;

class IdTable {
public:
    explicit IdTable(std::span<const std::string> order) {
        for (const auto& id : order) {
            intern(id);
        }
    }

    std::size_t intern(const std::string& id) {
        auto [it, inserted] = index_.try_emplace(id, ids_.size());
        if (inserted) {
            ids_.push_back(id);
        }
        return it->second;
    }

    std::optional<std::size_t> find(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    std::vector<std::string> release() { return std::move(ids_); }
    std::size_t size() const { return ids_.size(); }

private:
    std::unordered_map<std::string, std::size_t> index_;
    std::vector<std::string> ids_;
};

struct Adjacency {
    std::vector<std::vector<std::size_t>> out;  // edge indices per node

    Adjacency(const PosGraph& g, rng_engine* shuffle) : out(g.size()) {
        for (std::size_t e = 0; e < g.edges.size(); ++e) {
            out[g.edges[e].from].push_back(e);
        }
        if (shuffle != nullptr) {
            for (auto& list : out) {
                std::shuffle(list.begin(), list.end(), *shuffle);
            }
        }
    }
};

// Returns the edge indices of one directed cycle, or an empty vector.
std::vector<std::size_t> find_cycle(const PosGraph& g, rng_engine* shuffle) {
    const std::size_t n = g.size();
    Adjacency adj(g, shuffle);

    std::vector<std::size_t> roots(n);
    std::iota(roots.begin(), roots.end(), std::size_t{0});
    if (shuffle != nullptr) {
        std::shuffle(roots.begin(), roots.end(), *shuffle);
    }

    enum class Color : unsigned char { white, gray, black };
    std::vector<Color> color(n, Color::white);
    std::vector<std::size_t> entry_depth(n, 0);

    struct Frame {
        std::size_t node;
        std::size_t next;
    };
    std::vector<Frame> stack;
    std::vector<std::size_t> path;  // edges from the root to stack.back()

    for (std::size_t root : roots) {
        if (color[root] != Color::white) {
            continue;
        }
        color[root] = Color::gray;
        entry_depth[root] = 0;
        stack.push_back({root, 0});
        while (!stack.empty()) {
            Frame& top = stack.back();
            const auto& out = adj.out[top.node];
            if (top.next == out.size()) {
                color[top.node] = Color::black;
                stack.pop_back();
                if (!path.empty()) {
                    path.pop_back();
                }
                continue;
            }
            const std::size_t e = out[top.next++];
            const std::size_t v = g.edges[e].to;
            if (color[v] == Color::gray) {
                std::vector<std::size_t> cycle(path.begin() + static_cast<std::ptrdiff_t>(entry_depth[v]),
                                               path.end());
                cycle.push_back(e);
                return cycle;
            }
            if (color[v] == Color::white) {
                color[v] = Color::gray;
                path.push_back(e);
                entry_depth[v] = path.size();
                stack.push_back({v, 0});
            }
        }
    }
    return {};
}

}  // namespace

std::optional<std::size_t> PosGraph::index_of(const std::string& id) const {
    auto it = std::find(players.begin(), players.end(), id);
    if (it == players.end()) {
        return std::nullopt;
    }
    return static_cast<std::size_t>(it - players.begin());
}

std::vector<double> PosGraph::net_inflow() const {
    std::vector<double> net(size(), 0.0);
    for (const auto& e : edges) {
        net[e.to] += e.weight;
        net[e.from] -= e.weight;
    }
    return net;
}

double PosGraph::total_stake() const {
    return std::accumulate(stakes.begin(), stakes.end(), 0.0);
}

const char* to_string(Convention c) {
    return c == Convention::paper ? "paper" : "undo";
}

Convention convention_from_string(const std::string& name) {
    if (name == "paper") {
        return Convention::paper;
    }
    if (name == "undo") {
        return Convention::undo;
    }
    throw input_error("unknown effective-stake convention '" + name + "' (expected paper|undo)");
}

PosGraph ingest(std::span<const TransferRecord> records, std::span<const std::string> player_order) {
    IdTable ids(player_order);
    std::vector<double> balance(ids.size(), 0.0);
    std::map<std::pair<std::size_t, std::size_t>, double> gross;

    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& r = records[k];
        if (!std::isfinite(r.amount) || r.amount < 0.0) {
            throw ledger_error(k, "amount must be finite and non-negative");
        }
        if (r.to.empty() || r.to == genesis_id) {
            throw ledger_error(k, "invalid recipient '" + r.to + "'");
        }
        if (r.from.empty()) {
            throw ledger_error(k, "missing sender");
        }
        if (r.from == r.to) {
            throw ledger_error(k, "self transfer by '" + r.from + "'");
        }

        if (r.is_genesis()) {
            const std::size_t to = ids.intern(r.to);
            balance.resize(ids.size(), 0.0);
            balance[to] += r.amount;
            continue;
        }

        const auto from = ids.find(r.from);
        const double available = from ? balance[*from] : 0.0;
        if (r.amount > available + kFlowEpsilon * std::max(1.0, r.amount)) {
            throw ledger_error(k, "overdraft: '" + r.from + "' holds " + std::to_string(available) +
                                      ", sends " + std::to_string(r.amount));
        }
        const std::size_t to = ids.intern(r.to);
        balance.resize(ids.size(), 0.0);
        balance[*from] = std::max(0.0, balance[*from] - r.amount);
        balance[to] += r.amount;
        if (r.amount > 0.0) {
            gross[{*from, to}] += r.amount;
        }
    }

    PosGraph g;
    g.stakes = std::move(balance);
    g.stakes.resize(ids.size(), 0.0);
    g.players = ids.release();

    for (const auto& [key, forward] : gross) {
        const auto [i, j] = key;
        auto back_it = gross.find({j, i});
        const double backward = back_it == gross.end() ? 0.0 : back_it->second;
        const double net = forward - backward;
        if (net > kFlowEpsilon * std::max(forward, backward)) {
            g.edges.push_back({i, j, net});
        }
    }
    // gross is ordered by (from, to), so edges are too.
    return g;
}

PosGraph eliminate_cycles(PosGraph graph, rng_engine* shuffle) {
    std::erase_if(graph.edges, [](const Edge& e) { return !(e.weight > 0.0); });

    for (;;) {
        const auto cycle = find_cycle(graph, shuffle);
        if (cycle.empty()) {
            break;
        }
        // Minimum weight on the cycle; ties go to the lowest edge index.
        std::size_t arg = cycle.front();
        for (std::size_t e : cycle) {
            const double w = graph.edges[e].weight;
            if (w < graph.edges[arg].weight || (w == graph.edges[arg].weight && e < arg)) {
                arg = e;
            }
        }
        const double w_min = graph.edges[arg].weight;
        for (std::size_t e : cycle) {
            graph.edges[e].weight -= w_min;
        }
        graph.edges[arg].weight = 0.0;
        std::erase_if(graph.edges, [](const Edge& e) { return !(e.weight > 0.0); });
    }
    return graph;
}

bool is_acyclic(const PosGraph& graph) {
    const std::size_t n = graph.size();
    std::vector<std::size_t> indegree(n, 0);
    std::vector<std::vector<std::size_t>> out(n);
    for (const auto& e : graph.edges) {
        out[e.from].push_back(e.to);
        ++indegree[e.to];
    }
    std::vector<std::size_t> ready;
    for (std::size_t v = 0; v < n; ++v) {
        if (indegree[v] == 0) {
            ready.push_back(v);
        }
    }
    std::size_t visited = 0;
    while (!ready.empty()) {
        const std::size_t v = ready.back();
        ready.pop_back();
        ++visited;
        for (std::size_t w : out[v]) {
            if (--indegree[w] == 0) {
                ready.push_back(w);
            }
        }
    }
    return visited == n;
}

std::vector<double> effective_stakes(const PosGraph& graph, Convention convention) {
    std::vector<double> omega = graph.stakes;
    const double sign = convention == Convention::paper ? 1.0 : -1.0;
    for (const auto& e : graph.edges) {
        omega[e.to] += sign * e.weight;
        omega[e.from] -= sign * e.weight;
    }
    return omega;
}

PosGraph without_edges(PosGraph graph) {
    graph.edges.clear();
    return graph;
}

}  // namespace posboot::ledger
