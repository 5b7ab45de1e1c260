#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "posboot/rng.hpp"

namespace posboot::ledger {

/// Sender id used for minting rows. Genesis rows set node stakes and never
/// produce graph edges.
inline constexpr const char* genesis_id = "GENESIS";

struct TransferRecord {
    std::uint64_t round = 0;
    std::string from;  // genesis_id for minting
    std::string to;
    double amount = 0.0;

    bool is_genesis() const { return from == genesis_id; }
};

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double weight = 0.0;

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// PoS system graph: players with current stakes and netted directed flows.
///
/// Invariants: for any pair at most one direction carries weight, no self
/// loops, every stored weight is strictly positive. Edges are kept sorted by
/// (from, to).
struct PosGraph {
    std::vector<std::string> players;
    std::vector<double> stakes;
    std::vector<Edge> edges;

    std::size_t size() const { return players.size(); }
    std::optional<std::size_t> index_of(const std::string& id) const;

    /// Incoming minus outgoing edge weight per node.
    std::vector<double> net_inflow() const;
    double total_stake() const;
};

/// Effective-stake conventions. `paper` is c + in - out; `undo` reverses the
/// recorded transfers, c + out - in.
enum class Convention { paper, undo };

const char* to_string(Convention c);
Convention convention_from_string(const std::string& name);

/// Applies genesis rows and transfers in record order.
///
/// `player_order` fixes the vertex order; ids it does not list are appended in
/// order of first appearance. Throws ledger_error on negative or non-finite
/// amounts, self transfers, genesis as recipient, and overdrafts.
PosGraph ingest(std::span<const TransferRecord> records,
                std::span<const std::string> player_order = {});

/// Removes directed cycles by subtracting each cycle's minimum weight from
/// every edge on it. Per-node net inflow is preserved. With `shuffle` set, the
/// DFS visit order is randomised, which can change the resulting DAG but not
/// the net flows.
PosGraph eliminate_cycles(PosGraph graph, rng_engine* shuffle = nullptr);

bool is_acyclic(const PosGraph& graph);

std::vector<double> effective_stakes(const PosGraph& graph, Convention convention);

/// Same players and stakes, no edges.
PosGraph without_edges(PosGraph graph);

}  // namespace posboot::ledger
