#include "cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "posboot/error.hpp"
#include "posboot/game.hpp"
#include "posboot/io.hpp"
#include "posboot/ledger.hpp"
#include "posboot/metrics.hpp"
#include "posboot/protocols.hpp"
#include "posboot/rng.hpp"
#include "posboot/sim.hpp"

namespace posboot::cli {

namespace {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

constexpr int kSchema = 1;

struct Global {
    std::uint64_t seed = 42;
    std::string format = "json";
    std::string out;
};

struct MetricsArgs {
    std::string ledger;
    std::string valuations;
    std::string convention = "paper";
    std::string baseline = "stake";
    double tau_th = metrics::kDefaultNakamotoThreshold;
    double tau = 0.5;
    double delta = 50.0;
    double epsilon = 1.0;
    std::size_t grid = 3;
    std::vector<double> box{0.5, 2.0};
    std::string graph_out;
};

struct GameArgs {
    std::vector<std::string> metrics{"all"};
    std::size_t trials = 20;
    std::size_t players = 20;
    std::size_t repetitions = 1;
    double sybil_fraction = 0.1;
    double min_edge_fraction = 0.01;
    std::string recipients = "fresh";
    std::string valuations = "uniform:1,10";
    double tau_th = metrics::kDefaultNakamotoThreshold;
};

struct SimArgs {
    std::size_t players = 20;
    std::uint64_t stop = 1000;
    std::uint64_t rounds = 1000;
    double rb = 1.0;
    double chi = 0.0;
    std::string dist = "normal:7,3";
    std::string arrival = "chisq:3,1";
    std::string pos = "deterministic";
    std::string out = "trajectory.csv";
    std::vector<double> z;
    std::vector<double> sweep;
    std::size_t seeds = 10;
    std::string sweep_out;
    std::string ledger_out;
    std::string valuations_out;
};

struct CheckArgs {
    std::string protocol;
    // airdrop
    double reward = 10.0;
    std::size_t sybils = 2;
    // pob
    double a = 1.0, b = 1.0, d = 1.0, e = 1.0, gamma = 1.0;
    // w2sb
    double chi = 1.0;
    double rb = 1.0;
    std::vector<double> powers;
    // shared
    double omega = 0.0;
    double theta = 1.0;
    std::string penalty = "linear:1";
};

struct BoundArgs {
    double psi = 0.9;
    double t0 = 10.0;
    double rb = 10.0;
    double chi = 1.0;
    double z = 0.5;
    double x = 0.1;
};

double r6(double v) {
    return metrics::round6(v);
}

json rounded(const std::vector<double>& values) {
    json arr = json::array();
    for (double v : values) {
        arr.push_back(r6(v));
    }
    return arr;
}

protocols::Penalty parse_penalty(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string kind = spec.substr(0, colon);
    const double coef = colon == std::string::npos ? 1.0 : io::parse_double(spec.substr(colon + 1));
    if (kind == "linear") {
        if (coef < 0.0) {
            throw input_error("linear penalty coefficient must be non-negative");
        }
        return protocols::Penalty::linear(coef);
    }
    if (kind == "constant") {
        return protocols::Penalty::constant(coef);
    }
    throw input_error("unknown penalty '" + spec + "' (expected linear:C | constant:C)");
}

json penalty_json(const protocols::Penalty& g) {
    return {{"kind", g.kind == protocols::Penalty::Kind::linear ? "linear" : "constant"},
            {"coefficient", g.coefficient}};
}

game::ValuationDist parse_valuation_dist(const std::string& spec) {
    const auto colon = spec.find(':');
    if (colon == std::string::npos) {
        throw input_error("expected 'uniform:LO,HI' or 'lognormal:MU,SIGMA', got '" + spec + "'");
    }
    const std::string name = spec.substr(0, colon);
    const auto p = io::parse_double_list(std::string_view(spec).substr(colon + 1));
    if (name == "uniform" && p.size() == 2) {
        return game::UniformValuations{p[0], p[1]};
    }
    if (name == "lognormal" && p.size() == 2) {
        return game::LogNormalValuations{p[0], p[1]};
    }
    throw input_error("unknown valuation distribution '" + spec + "'");
}

// Writes `body` to `path` atomically, or to `out` when `path` is empty.
void emit(const std::string& path, const std::string& body, std::ostream& out) {
    if (path.empty()) {
        out << body;
        return;
    }
    io::write_atomic(path, body);
}

std::string render(const json& doc, const std::string& format) {
    if (format == "json") {
        return doc.dump(2) + "\n";
    }
    // dsv: flat key,value rows for scalar members.
    std::ostringstream s;
    s << "key,value\n";
    for (const auto& [key, value] : doc.items()) {
        if (value.is_primitive()) {
            s << key << ',' << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
        } else if (value.is_object()) {
            for (const auto& [k2, v2] : value.items()) {
                if (v2.is_primitive()) {
                    s << key << '.' << k2 << ',' << (v2.is_string() ? v2.get<std::string>() : v2.dump())
                      << '\n';
                }
            }
        }
    }
    return s.str();
}

// ---------------------------------------------------------------- metrics

int cmd_metrics(const Global& g, const MetricsArgs& a, std::ostream& out) {
    const auto vals = io::read_valuations(a.valuations);
    const auto rows = io::read_ledger_rows(a.ledger);

    ledger::PosGraph graph;
    try {
        graph = ledger::ingest(rows.records, vals.players);
    } catch (const ledger_error& e) {
        throw io::parse_error(a.ledger, rows.lines.at(e.index()), e.what());
    }
    if (graph.size() != vals.players.size()) {
        std::string extra;
        for (std::size_t i = vals.players.size(); i < graph.size(); ++i) {
            extra += (extra.empty() ? "" : ", ") + graph.players[i];
        }
        throw input_error(a.ledger + ": players missing from valuations file: " + extra);
    }
    graph = ledger::eliminate_cycles(std::move(graph));

    metrics::ReportOptions opts;
    opts.convention = ledger::convention_from_string(a.convention);
    opts.tau_th = a.tau_th;
    if (a.baseline == "stake") {
        opts.baseline_basis = metrics::BaselineBasis::stake_fractions;
    } else if (a.baseline == "scaled") {
        opts.baseline_basis = metrics::BaselineBasis::scaled_stakes;
    } else {
        throw input_error("--baseline must be stake or scaled");
    }
    if (a.box.size() != 2 || !(a.box[0] > 0.0) || !(a.box[1] >= a.box[0])) {
        throw input_error("--box expects LO,HI with 0 < LO <= HI");
    }
    opts.box_lo = a.box[0];
    opts.box_hi = a.box[1];
    opts.grid = a.grid;

    const auto report = metrics::evaluate(graph, vals.theta_hat, opts);

    json doc;
    doc["schema"] = kSchema;
    doc["command"] = "metrics";
    doc["convention"] = ledger::to_string(report.convention);
    doc["tau_th"] = r6(report.tau_th);
    doc["baseline_basis"] =
        report.baseline_basis == metrics::BaselineBasis::stake_fractions ? "stake_fractions" : "scaled_stakes";
    doc["cnorm"] = r6(report.cnorm);
    doc["cnorm_worstcase"] = report.cnorm_worstcase ? json(r6(*report.cnorm_worstcase)) : json(nullptr);
    doc["worstcase_search"] = {{"box", {opts.box_lo, opts.box_hi}}, {"grid", opts.grid}};
    doc["gini"] = r6(report.gini);
    doc["entropy"] = r6(report.entropy);
    doc["nakamoto"] = report.nakamoto;
    doc["players"] = vals.players;
    doc["omega"] = rounded(report.omega);
    doc["beta"] = rounded(report.beta);

    const std::size_t joined = static_cast<std::size_t>(
        std::count_if(graph.stakes.begin(), graph.stakes.end(), [](double s) { return s > 0.0; }));
    json verdict;
    verdict["tau"] = a.tau;
    verdict["delta"] = a.delta;
    verdict["epsilon"] = a.epsilon;
    try {
        const auto beta_true = metrics::scaled_stake(report.omega, vals.theta);
        const auto c = metrics::check_decentralization(beta_true, joined, graph.size(), a.tau, a.delta, a.epsilon);
        verdict["participation"] = r6(c.participation);
        verdict["participation_ok"] = c.participation_ok;
        verdict["beta_max"] = r6(c.beta_max);
        verdict["beta_delta"] = r6(c.beta_delta);
        verdict["ratio"] = r6(c.ratio);
        verdict["proportional_ok"] = c.proportional_ok;
        verdict["alpha"] = r6(c.alpha);
        verdict["epsilon_bound"] = r6(c.epsilon_bound);
        verdict["satisfied"] = c.satisfied();
    } catch (const domain_error& e) {
        verdict["satisfied"] = nullptr;
        verdict["error"] = e.what();
    }
    doc["decentralization"] = verdict;

    if (!a.graph_out.empty()) {
        json gj;
        gj["schema"] = kSchema;
        gj["players"] = graph.players;
        gj["stakes"] = graph.stakes;
        gj["edges"] = json::array();
        for (const auto& e : graph.edges) {
            gj["edges"].push_back({{"from", graph.players[e.from]}, {"to", graph.players[e.to]}, {"weight", e.weight}});
        }
        io::write_atomic(a.graph_out, gj.dump(2) + "\n");
    }

    emit(g.out, render(doc, g.format), out);
    return kOk;
}

// ------------------------------------------------------------------- game

int cmd_game(const Global& g, const GameArgs& a, std::ostream& out) {
    std::vector<std::string> names;
    for (const auto& m : a.metrics) {
        if (m == "all") {
            for (const auto& n : game::metric_names()) {
                if (n != "constant") {
                    names.push_back(n);
                }
            }
        } else {
            names.push_back(m);
        }
    }
    std::vector<game::Metric> chosen;
    for (const auto& n : names) {
        chosen.push_back(game::metric_by_name(n, a.tau_th));
    }

    game::GeneratorParams params;
    params.n = a.players;
    params.sybil_fraction = a.sybil_fraction;
    params.min_edge_fraction = a.min_edge_fraction;
    params.valuations = parse_valuation_dist(a.valuations);
    if (a.recipients == "fresh") {
        params.recipients = game::RecipientKind::fresh;
    } else if (a.recipients == "existing") {
        params.recipients = game::RecipientKind::existing;
    } else {
        throw input_error("--recipients must be fresh or existing");
    }
    // Surface infeasible generator settings as usage errors before running.
    game::generate_scenario(params, g.seed);

    json doc;
    doc["schema"] = kSchema;
    doc["command"] = "game";
    doc["generator"] = game::generator_name;
    doc["params"] = {{"players", a.players},
                     {"sybil_fraction", a.sybil_fraction},
                     {"recipients", a.recipients},
                     {"valuations", a.valuations},
                     {"min_edge_fraction", a.min_edge_fraction},
                     {"kappa", a.trials},
                     {"repetitions", a.repetitions},
                     {"seed", g.seed},
                     {"tau_th", a.tau_th}};
    doc["results"] = json::array();

    std::ostringstream table;
    table << std::left << std::setw(12) << "metric" << std::right << std::setw(8) << "kappa" << std::setw(8)
          << "reps" << std::setw(12) << "successes" << std::setw(10) << "rate" << std::setw(10) << "D_k=1"
          << '\n';

    for (const auto& metric : chosen) {
        std::size_t successes = 0;
        std::size_t failed = 0;
        std::size_t all_correct = 0;
        json games = json::array();
        json per_trial = json::array();
        for (std::size_t r = 0; r < a.repetitions; ++r) {
            const std::uint64_t game_seed = a.repetitions == 1 ? g.seed : derive_seed(g.seed, r);
            const auto res = game::run_game(metric, a.trials, params, game_seed);
            successes += res.successes;
            failed += res.failed;
            all_correct += res.all_correct ? 1 : 0;
            if (a.repetitions <= 100) {
                games.push_back({{"seed", game_seed}, {"successes", res.successes}, {"all_correct", res.all_correct}});
            }
            if (r == 0) {
                for (const auto& t : res.per_trial) {
                    per_trial.push_back({{"v_a", r6(t.v_a)},
                                         {"v_b", r6(t.v_b)},
                                         {"attacked_first", t.attacked_first},
                                         {"correct", t.correct},
                                         {"failed", t.failed}});
                }
            }
        }
        const std::size_t total = a.trials * a.repetitions;
        const double rate = static_cast<double>(successes) / static_cast<double>(total);
        doc["results"].push_back({{"metric", metric.name},
                                  {"kappa", a.trials},
                                  {"repetitions", a.repetitions},
                                  {"successes", successes},
                                  {"trials_total", total},
                                  {"failed_trials", failed},
                                  {"success_rate", r6(rate)},
                                  {"all_correct_games", all_correct},
                                  {"all_correct", all_correct == a.repetitions},
                                  {"games", games},
                                  {"per_trial_values", per_trial}});
        table << std::left << std::setw(12) << metric.name << std::right << std::setw(8) << a.trials
              << std::setw(8) << a.repetitions << std::setw(12)
              << (std::to_string(successes) + "/" + std::to_string(total)) << std::setw(10) << std::fixed
              << std::setprecision(4) << rate << std::setw(10)
              << (std::to_string(all_correct) + "/" + std::to_string(a.repetitions)) << '\n';
    }

    if (g.out.empty()) {
        out << (g.format == "json" ? doc.dump(2) + "\n" : table.str());
    } else {
        io::write_atomic(g.out, doc.dump(2) + "\n");
        out << table.str();
    }
    return kOk;
}

// --------------------------------------------------------------- simulate

fs::path sidecar_path(const fs::path& trajectory) {
    auto p = trajectory;
    p.replace_extension(".json");
    if (p == trajectory) {
        p += ".json";
    }
    return p;
}

int cmd_simulate(const Global& g, const SimArgs& a, std::ostream& out) {
    sim::SimConfig cfg;
    cfg.n = a.players;
    cfg.stop_T = a.stop;
    cfg.total_rounds = a.rounds;
    cfg.r_b = a.rb;
    cfg.chi = a.chi;
    cfg.power = sim::parse_power_dist(a.dist);
    cfg.arrival = sim::parse_arrival(a.arrival);
    if (a.pos == "deterministic") {
        cfg.pos_payout = sim::PosPayout::deterministic;
    } else if (a.pos == "stochastic") {
        cfg.pos_payout = sim::PosPayout::stochastic;
    } else {
        throw input_error("--pos must be deterministic or stochastic");
    }
    cfg.seed = g.seed;
    cfg.record_rewards = !a.ledger_out.empty();
    cfg.validate();

    const auto traj = sim::run(cfg);

    std::ostringstream csv;
    csv << "round,joined,omega\n";
    for (const auto& r : traj.rounds) {
        csv << r.round << ',' << r.joined << ',' << io::format_number(r.omega) << '\n';
    }
    const fs::path traj_path = a.out;
    io::write_atomic(traj_path, csv.str());

    json first = json::object();
    for (double z : a.z) {
        const auto r = sim::first_round_below(traj, z);
        first[io::format_number(z)] = r ? json(*r) : json(nullptr);
    }

    json side;
    side["schema"] = kSchema;
    side["command"] = "simulate";
    side["config"] = {{"players", cfg.n},
                      {"stop_T", cfg.stop_T},
                      {"total_rounds", cfg.total_rounds},
                      {"r_b", cfg.r_b},
                      {"chi", cfg.chi},
                      {"power", sim::to_string(cfg.power)},
                      {"arrival", sim::to_string(cfg.arrival)},
                      {"pos_payout", a.pos},
                      {"seed", cfg.seed}};
    side["powers"] = traj.powers;
    side["arrivals"] = traj.arrivals;
    side["final_stakes"] = traj.final_stakes;
    side["final_omega"] = traj.rounds.back().omega;
    side["first_round_below"] = first;
    io::write_atomic(sidecar_path(traj_path), side.dump(2) + "\n");

    out << "wrote " << traj_path.string() << " (" << traj.rounds.size() << " rounds) and "
        << sidecar_path(traj_path).string() << '\n';
    for (double z : a.z) {
        const auto r = sim::first_round_below(traj, z);
        out << "first_round_below z=" << io::format_number(z) << ": " << (r ? std::to_string(*r) : "none") << '\n';
    }

    if (!a.ledger_out.empty()) {
        std::vector<ledger::TransferRecord> rows;
        rows.reserve(traj.rewards.size());
        for (const auto& rw : traj.rewards) {
            rows.push_back({rw.round, ledger::genesis_id, "m" + std::to_string(rw.miner + 1), rw.amount});
        }
        io::write_atomic(a.ledger_out, io::format_ledger(rows));
    }
    if (!a.valuations_out.empty()) {
        io::ValuationRows v;
        for (std::size_t i = 0; i < cfg.n; ++i) {
            v.players.push_back("m" + std::to_string(i + 1));
            v.theta_hat.push_back(traj.powers[i]);
            v.theta.push_back(traj.powers[i]);
        }
        io::write_atomic(a.valuations_out, io::format_valuations(v));
    }

    if (!a.sweep.empty()) {
        const auto rows = sim::sweep(cfg, a.sweep, a.seeds);
        std::ostringstream s;
        s << "z,mean_round,std,seeds\n";
        for (const auto& r : rows) {
            s << io::format_number(r.z) << ',' << (r.mean_round ? io::format_number(*r.mean_round) : "nan") << ','
              << (r.mean_round ? io::format_number(r.stddev) : "nan") << ',' << r.seeds_reached << '\n';
        }
        if (a.sweep_out.empty()) {
            out << s.str();
        } else {
            io::write_atomic(a.sweep_out, s.str());
            out << "wrote " << a.sweep_out << " (" << rows.size() << " rows)\n";
        }
    }
    return kOk;
}

// ------------------------------------------------------------------ check

int cmd_check(const Global& g, const CheckArgs& a, std::ostream& out) {
    const auto penalty = parse_penalty(a.penalty);
    json doc;
    doc["schema"] = kSchema;
    doc["command"] = "check";
    doc["protocol"] = a.protocol;

    if (a.protocol == "airdrop") {
        const auto v = protocols::airdrop_ic_check(a.reward, a.sybils, a.omega, penalty, a.theta);
        doc["params"] = {{"reward", a.reward}, {"sybils", a.sybils}, {"omega", a.omega}, {"theta", a.theta},
                         {"penalty", penalty_json(penalty)}};
        doc["checks"] = {{"ir", a.reward > 0.0}, {"ic", v.is_ic}};
        doc["utilities"] = {{"honest", v.honest_utility}, {"sybil", v.sybil_utility}};
        doc["witness"] = v.is_ic ? json(nullptr)
                                 : json{{"kind", "sybil_split"},
                                        {"k", a.sybils},
                                        {"gain", v.sybil_utility - v.honest_utility}};
    } else if (a.protocol == "pob") {
        const protocols::PobParams p{a.a, a.b, a.d, a.e, a.gamma};
        const auto v = protocols::pob_ir_check(p, a.omega, penalty, a.theta);
        doc["params"] = {{"a", a.a}, {"b", a.b}, {"d", a.d}, {"e", a.e}, {"gamma", a.gamma},
                         {"omega", a.omega}, {"theta", a.theta}, {"penalty", penalty_json(penalty)}};
        doc["checks"] = {{"ir", v.is_ir}, {"ic", nullptr}};
        doc["utilities"] = {{"participate", v.participate_utility}, {"abstain", v.abstain_utility}};
        doc["witness"] = v.is_ir ? json(nullptr)
                                 : json{{"kind", "abstain"},
                                        {"gain", v.abstain_utility - v.participate_utility}};
    } else if (a.protocol == "w2sb") {
        if (a.powers.empty()) {
            throw input_error("w2sb needs --powers");
        }
        for (double m : a.powers) {
            if (!(m > 0.0)) {
                throw input_error("mining powers must be positive");
            }
        }
        const protocols::W2sbParams<double> p{a.powers, a.chi, a.rb};
        const auto c = protocols::w2sb_conditions(p);
        const double M = p.total();
        doc["params"] = {{"chi", a.chi}, {"rb", a.rb}, {"powers", a.powers}, {"M", M},
                         {"m_min", p.min_power()}, {"load", a.chi * M / a.rb}};
        doc["checks"] = {{"ir", c.ir_ok}, {"ic", c.ic_ok}};
        json witness = nullptr;
        if (const auto w = protocols::w2sb_find_deviation(p)) {
            witness = {{"kind", "deviation"},
                       {"miner", w->miner},
                       {"direction", protocols::to_string(w->direction)},
                       {"a", w->a},
                       {"gain", w->gain}};
        } else if (!c.ir_ok) {
            const auto i = static_cast<std::size_t>(std::max_element(a.powers.begin(), a.powers.end()) -
                                                    a.powers.begin());
            witness = {{"kind", "abstain"},
                       {"miner", i},
                       {"gain", a.chi * a.powers[i] - a.rb * a.powers[i] / M}};
        }
        doc["witness"] = witness;
    } else {
        throw input_error("--protocol must be one of airdrop, pob, w2sb");
    }

    emit(g.out, render(doc, g.format), out);
    return kOk;
}

// ------------------------------------------------------------------ bound

int cmd_bound(const Global& g, const BoundArgs& a, std::ostream& out) {
    if (!(a.z > a.x)) {
        throw input_error("bound requires z > x");
    }
    const double t = protocols::theorem3_bound(a.psi, a.t0, a.rb, a.chi, a.z, a.x);
    json doc;
    doc["schema"] = kSchema;
    doc["command"] = "bound";
    doc["params"] = {{"psi", a.psi}, {"T0", a.t0}, {"rb", a.rb}, {"chi", a.chi}, {"z", a.z}, {"x", a.x}};
    doc["T_lower"] = r6(t);
    emit(g.out, render(doc, g.format), out);
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"posboot: PoS bootstrapping analysis (centralisation metrics, protocol checks, W2SB simulation)"};
    app.option_defaults()->always_capture_default();
    app.require_subcommand(1);
    app.fallthrough();

    Global g;
    app.add_option("--seed", g.seed, "Random seed")->envname("POSBOOT_SEED");
    app.add_option("--format", g.format, "Output format")->check(CLI::IsMember({"json", "dsv"}));
    app.add_option("-o,--out", g.out, "Output file (default: stdout)");

    MetricsArgs ma;
    auto* metrics_cmd = app.add_subcommand("metrics", "C-NORM and baseline metrics for a ledger");
    metrics_cmd->add_option("--ledger", ma.ledger, "Ledger file (round,from,to,amount)")->required();
    metrics_cmd->add_option("--valuations", ma.valuations, "Valuations file (player,theta_hat,theta)")->required();
    metrics_cmd->add_option("--convention", ma.convention, "Effective-stake convention")
        ->check(CLI::IsMember({"paper", "undo"}));
    metrics_cmd->add_option("--baseline", ma.baseline, "Baseline basis")->check(CLI::IsMember({"stake", "scaled"}));
    metrics_cmd->add_option("--tau-th", ma.tau_th, "Nakamoto threshold")->check(CLI::Range(0.0, 1.0));
    metrics_cmd->add_option("--tau", ma.tau, "Minimum participation")->check(CLI::Range(0.0, 1.0));
    metrics_cmd->add_option("--delta", ma.delta, "Percentile for proportionality")->check(CLI::Range(0.0, 100.0));
    metrics_cmd->add_option("--epsilon", ma.epsilon, "Proportionality tolerance")->check(CLI::NonNegativeNumber);
    metrics_cmd->add_option("--grid", ma.grid, "Worst-case grid points per player")->check(CLI::Range(2, 64));
    metrics_cmd->add_option("--box", ma.box, "Worst-case box factors LO,HI")->delimiter(',')->expected(2);
    metrics_cmd->add_option("--graph-out", ma.graph_out, "Write the DAG as JSON");

    GameArgs ga;
    auto* game_cmd = app.add_subcommand("game", "Centralisation game between attacked and clean systems");
    game_cmd->add_option("--metric", ga.metrics, "Metric name(s) or 'all'")->delimiter(',');
    game_cmd->add_option("--trials", ga.trials, "Trials per game (kappa)")->check(CLI::PositiveNumber);
    game_cmd->add_option("--players", ga.players, "Players per system")->check(CLI::Range(3, 100000));
    game_cmd->add_option("--repetitions", ga.repetitions, "Independent games")->check(CLI::PositiveNumber);
    game_cmd->add_option("--sybil-fraction", ga.sybil_fraction, "Recipients = ceil(fraction * n)");
    game_cmd->add_option("--min-edge-fraction", ga.min_edge_fraction, "Minimum edge weight / total stake");
    game_cmd->add_option("--recipients", ga.recipients, "fresh or existing identities")
        ->check(CLI::IsMember({"fresh", "existing"}));
    game_cmd->add_option("--valuations", ga.valuations, "uniform:LO,HI or lognormal:MU,SIGMA");
    game_cmd->add_option("--tau-th", ga.tau_th, "Nakamoto threshold")->check(CLI::Range(0.0, 1.0));

    SimArgs sa;
    auto* sim_cmd = app.add_subcommand("simulate", "W2SB then PoS with dynamic miner arrival");
    sim_cmd->add_option("--players", sa.players, "Number of miners")->check(CLI::Range(2, 10000000));
    sim_cmd->add_option("--stop", sa.stop, "W2SB stopping round");
    sim_cmd->add_option("--rounds", sa.rounds, "Total rounds")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--rb", sa.rb, "Block reward")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--chi", sa.chi, "Cost per unit power (recorded only)");
    sim_cmd->add_option("--dist", sa.dist, "Mining power: normal:MU,SIGMA | uniform:LO,HI | exp:RATE");
    sim_cmd->add_option("--arrival", sa.arrival, "Arrival: chisq:DF,SCALE");
    sim_cmd->add_option("--pos", sa.pos, "PoS payout")->check(CLI::IsMember({"deterministic", "stochastic"}));
    sim_cmd->add_option("--traj-out", sa.out, "Trajectory file (round,joined,omega)");
    sim_cmd->add_option("--z", sa.z, "Report first round with omega <= z")->delimiter(',');
    sim_cmd->add_option("--sweep", sa.sweep, "Descending z list for a multi-seed sweep")->delimiter(',');
    sim_cmd->add_option("--seeds", sa.seeds, "Seeds per sweep")->check(CLI::PositiveNumber);
    sim_cmd->add_option("--sweep-out", sa.sweep_out, "Sweep file (z,mean_round,std,seeds)");
    sim_cmd->add_option("--ledger-out", sa.ledger_out, "Reward log as a ledger file");
    sim_cmd->add_option("--valuations-out", sa.valuations_out, "Miner powers as a valuations file");

    CheckArgs ca;
    auto* check_cmd = app.add_subcommand("check", "IR/IC analysis for airdrop, pob or w2sb");
    check_cmd->add_option("--protocol", ca.protocol, "Protocol")
        ->required()
        ->check(CLI::IsMember({"airdrop", "pob", "w2sb"}));
    check_cmd->add_option("--reward", ca.reward, "Airdrop reward per identity");
    check_cmd->add_option("--sybils", ca.sybils, "Airdrop identities per player")->check(CLI::PositiveNumber);
    check_cmd->add_option("--a", ca.a, "PoB: old tokens burned");
    check_cmd->add_option("--b", ca.b, "PoB: new tokens granted");
    check_cmd->add_option("--d", ca.d, "PoB: old token price");
    check_cmd->add_option("--e", ca.e, "PoB: new token price");
    check_cmd->add_option("--gamma", ca.gamma, "PoB: utility scale");
    check_cmd->add_option("--chi", ca.chi, "W2SB: cost per unit power")->check(CLI::NonNegativeNumber);
    check_cmd->add_option("--rb", ca.rb, "W2SB: block reward")->check(CLI::PositiveNumber);
    check_cmd->add_option("--powers", ca.powers, "W2SB: mining powers")->delimiter(',');
    check_cmd->add_option("--omega", ca.omega, "C-NORM of the system state");
    check_cmd->add_option("--theta", ca.theta, "Player valuation");
    check_cmd->add_option("--penalty", ca.penalty, "g(theta): linear:C | constant:C");

    BoundArgs ba;
    auto* bound_cmd = app.add_subcommand("bound", "Lower bound on the W2SB stopping time");
    bound_cmd->add_option("--psi", ba.psi, "Arrival CDF at T0");
    bound_cmd->add_option("--t0", ba.t0, "Round by which most miners joined");
    bound_cmd->add_option("--rb", ba.rb, "Block reward");
    bound_cmd->add_option("--chi", ba.chi, "Cost per unit power");
    bound_cmd->add_option("--z", ba.z, "Target C-NORM");
    bound_cmd->add_option("--x", ba.x, "Tail mass of late joiners");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*metrics_cmd) {
            return cmd_metrics(g, ma, out);
        }
        if (*game_cmd) {
            return cmd_game(g, ga, out);
        }
        if (*sim_cmd) {
            return cmd_simulate(g, sa, out);
        }
        if (*check_cmd) {
            return cmd_check(g, ca, out);
        }
        if (*bound_cmd) {
            return cmd_bound(g, ba, out);
        }
    } catch (const input_error& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const posboot::error& e) {
        err << "error: " << e.what() << '\n';
        return kDomain;
    }
    return kUsage;
}

}  // namespace posboot::cli
