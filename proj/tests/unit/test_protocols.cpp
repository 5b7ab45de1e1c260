#include <doctest.h>

#include <boost/multiprecision/cpp_int.hpp>

#include "posboot/error.hpp"
#include "posboot/protocols.hpp"

using namespace posboot;
using namespace posboot::protocols;
using doctest::Approx;
using Q = boost::multiprecision::cpp_rational;

TEST_CASE("utility") {
    CHECK(utility(0, 5, 0, Penalty::linear(), 3) == 0.0);
    CHECK(utility(3, 2, 0.5, Penalty::linear(), 4) == Approx(4.0));
    CHECK(utility(3, 2, 0.0, Penalty::linear(), 100) == utility(3, 2, 0.0, Penalty::linear(), 1));
    CHECK(reward_coefficient(10, 4, 0.5) == Approx(3.0));
}

TEST_CASE("airdrop") {
    const auto v = airdrop_ic_check(10, 3, 0, Penalty::linear(), 1);
    CHECK(v.honest_utility == Approx(10));
    CHECK(v.sybil_utility == Approx(30));
    CHECK_FALSE(v.is_ic);
    CHECK(airdrop_ic_check(10, 1, 0.3, Penalty::linear(), 1).is_ic);
    CHECK(airdrop_ic_check(0, 5, 0.3, Penalty::linear(), 1).is_ic);
    for (std::size_t k = 2; k <= 100; ++k) {
        CHECK_FALSE(airdrop_ic_check(1e-3, k, 0.9, Penalty::constant(50), 7).is_ic);
    }
}

TEST_CASE("proof of burn") {
    const auto v = pob_ir_check({1, 1, 2, 1, 1}, 0, Penalty::linear(), 5);
    CHECK(v.participate_utility == Approx(-5));
    CHECK(v.abstain_utility == Approx(0));
    CHECK_FALSE(v.is_ir);

    const auto edge = pob_ir_check({2, 2, 1, 1, 1}, 0.2, Penalty::linear(), 5);
    CHECK(edge.participate_utility == Approx(edge.abstain_utility));
    CHECK_FALSE(edge.is_ir);

    const auto zero = pob_ir_check({1, 1, 2, 1, 1}, 0.2, Penalty::linear(), 0);
    CHECK(zero.participate_utility == Approx(zero.abstain_utility));

    CHECK_THROWS_AS(pob_ir_check({1, 3, 1, 1, 1}, 0, Penalty::linear(), 1), input_error);
    CHECK_THROWS_AS(pob_ir_check({0, 1, 1, 1, 1}, 0, Penalty::linear(), 1), input_error);
}

TEST_CASE("w2sb conditions") {
    W2sbParams<double> p{{1, 1, 1, 1}, 1.0, 4.0};
    auto c = w2sb_conditions(p);
    CHECK(c.ir_ok);
    CHECK(c.ic_ok);
    p.chi = 0.5;
    c = w2sb_conditions(p);
    CHECK(c.ir_ok);
    CHECK_FALSE(c.ic_ok);
    p.chi = 0.0;
    CHECK_FALSE(w2sb_conditions(p).ic_ok);
    W2sbParams<double> solo{{3}, 0.0, 1.0};
    CHECK(w2sb_conditions(solo).ic_ok);
}

TEST_CASE("w2sb deviation closed forms") {
    const W2sbParams<double> p{{1, 1, 1, 1}, 1.0, 4.0};
    CHECK(w2sb_deviation_utility(p, 0, 0.5, Direction::down) == Approx(-0.5 / 3.5 * 0.5));
    CHECK(std::abs(w2sb_deviation_utility(p, 0, 1e-9, Direction::down)) < 1e-8);
    CHECK(std::abs(w2sb_deviation_utility(p, 0, 1e-9, Direction::up)) < 1e-8);
    CHECK_THROWS_AS(w2sb_deviation_utility(p, 0, 1.0, Direction::down), domain_error);

    const W2sbParams<double> loose{{1, 1, 1, 1}, 0.5, 4.0};
    CHECK(w2sb_deviation_utility(loose, 0, 1.0, Direction::up) > 0.0);
    const auto w = w2sb_find_deviation(loose);
    REQUIRE(w.has_value());
    CHECK(w->direction == Direction::up);
    CHECK(w->gain > 0.0);
    CHECK_FALSE(w2sb_find_deviation(p).has_value());
}

TEST_CASE("w2sb upward closed form equals the direct expected gain") {
    const W2sbParams<Q> p{{Q(1), Q(2), Q(3, 2), Q(5)}, Q(1, 3), Q(7)};
    for (std::size_t i = 0; i < p.m.size(); ++i) {
        for (const Q a : {Q(1, 10), Q(1), Q(9, 4)}) {
            CHECK(w2sb_deviation_utility(p, i, a, Direction::up) == w2sb_expected_gain(p, i, a, Direction::up));
        }
    }
}

TEST_CASE("stopping-time bound") {
    CHECK(theorem3_bound(0.9, 10.0, 10.0, 1.0, 0.5, 0.1) == Approx(235.0));
    CHECK(theorem3_bound(Q(9, 10), Q(10), Q(10), Q(1), Q(1, 2), Q(1, 10)) == Q(235));
    CHECK(theorem3_bound(0.9, 10.0, 0.0, 1.0, 0.5, 0.1) == 10.0);
    const double first = theorem3_bound(0.9, 10.0, 10.0, 1.0, 0.5, 0.1) - 10.0;
    const double halved = theorem3_bound(0.9, 10.0, 10.0, 2.0, 0.5, 0.1) - 10.0;
    CHECK(halved == Approx(first / 2));
    CHECK_THROWS_AS(theorem3_bound(0.9, 10.0, 10.0, 1.0, 0.1, 0.1), domain_error);
    CHECK_THROWS_AS(theorem3_bound(0.9, 10.0, 10.0, 0.0, 0.5, 0.1), domain_error);
    CHECK_THROWS_AS(theorem3_bound(1.5, 10.0, 10.0, 1.0, 0.5, 0.1), domain_error);

    double prev = 1e300;
    for (double z = 0.11; z <= 1.0; z += 0.01) {
        const double t = theorem3_bound(0.9, 10.0, 10.0, 1.0, z, 0.1);
        CHECK(t < prev);
        prev = t;
    }
}
