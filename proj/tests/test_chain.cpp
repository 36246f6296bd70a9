#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <vector>

#include "nelab/chain.hpp"
#include "oracles.hpp"

using namespace nelab;
using Catch::Approx;
using Catch::Matchers::ContainsSubstring;

namespace {

// three states over a 2-bit ones-count space; O = all ones, absorbing
LumpedChain tiny_chain(double b_to_mid, double b_to_opt) {
    LumpedChain c;
    c.spec = ProblemSpec::onemax(2);
    c.states = {{0, 0, false}, {1, 0, false}, {2, 0, false}};
    c.kernel = {0.0, 1.0, 0.0, // A always steps to B
                0.0, b_to_mid, b_to_opt,
                0.0, 0.0, 1.0};
    c.optimal = {0, 0, 1};
    c.initial = {1.0, 0.0, 0.0};
    return c;
}

void compare_kernels(const LumpedChain& chain, const std::vector<double>& reference, double tol) {
    int S = chain.size();
    REQUIRE(static_cast<int>(reference.size()) == S * S);
    for (int i = 0; i < S; ++i)
        for (int j = 0; j < S; ++j) {
            INFO("entry (" << chain.states[i].label() << " -> " << chain.states[j].label()
                           << ")");
            CHECK(chain.at(i, j) ==
                  Approx(reference[static_cast<std::size_t>(i) * S + j]).margin(tol));
        }
}

} // namespace

TEST_CASE("offspring ones-count law") {
    std::vector<double> d = offspring_ones_distribution(2, 1, 0.25);
    REQUIRE(d.size() == 3);
    CHECK(d[0] == Approx(3.0 / 16).margin(1e-15));
    CHECK(d[1] == Approx(10.0 / 16).margin(1e-15));
    CHECK(d[2] == Approx(3.0 / 16).margin(1e-15));

    // (ones-count of flipped bits) aggregated over all 2^n strings
    for (double p : {0.17, 0.5, 0.75}) {
        std::vector<double> q = offspring_ones_distribution(6, 2, p);
        double total = 0;
        BitString x = BitString::from_string("110000");
        std::vector<double> ref(7, 0.0);
        for (std::uint64_t lbl = 0; lbl < 64; ++lbl) {
            BitString y = BitString::from_label(lbl, 6);
            ref[y.ones()] += oracle::mutation_prob(x, y, p);
        }
        for (int j = 0; j <= 6; ++j) {
            total += q[j];
            CHECK(q[j] == Approx(ref[j]).margin(1e-14));
        }
        CHECK(total == Approx(1.0).margin(1e-12));
    }

    CHECK_THROWS_AS(offspring_ones_distribution(0, 0, 0.2), ArgumentError);
    CHECK_THROWS_AS(offspring_ones_distribution(4, 5, 0.2), ArgumentError);
    CHECK_THROWS_AS(offspring_ones_distribution(4, 2, 0.0), ArgumentError);
    CHECK_THROWS_AS(offspring_ones_distribution(4, 2, 1.0), ArgumentError);
}

TEST_CASE("noiseless kernels against brute-force enumeration") {
    struct Case {
        ProblemSpec spec;
        int lambda;
        double p;
    };
    for (const Case& c : {Case{ProblemSpec::trap(4), 1, 0.3},
                          Case{ProblemSpec::onemax(5), 2, 0.2},
                          Case{ProblemSpec::jump(2, 5), 1, 0.25},
                          Case{ProblemSpec::jump(5, 5), 2, 1.0 / 5}}) {
        LumpedChain chain = noiseless_chain(c.spec, c.lambda, c.p);
        CHECK_NOTHROW(validate(chain));
        compare_kernels(chain, oracle::noiseless_kernel(c.spec, c.lambda, c.p), 1e-12);
    }
}

TEST_CASE("deceptive landscape needs the full jump from the all-zeros state") {
    // from all zeros the only acceptable move is straight to the optimum, so
    // the hitting time from there is geometric
    for (int n : {3, 4, 5}) {
        for (double p : {0.1, 1.0 / n}) {
            for (int lambda : {1, 2, 4}) {
                LumpedChain chain = noiseless_chain(ProblemSpec::trap(n), lambda, p);
                EfhtVector efht = efht_solve(chain);
                double closed = 1.0 / (1.0 - std::pow(1.0 - std::pow(p, n), lambda));
                CHECK(efht.values[0] == Approx(closed).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("re-evaluated noisy kernels against brute-force enumeration") {
    struct Case {
        ProblemSpec spec;
        NoiseModel model;
        SelectionRule rule;
        double p;
    };
    for (const Case& c :
         {Case{ProblemSpec::trap(4), NoiseModel::one_bit(0.4), SelectionRule::standard(), 0.3},
          Case{ProblemSpec::onemax(4), NoiseModel::additive(-1.5, 2.5), SelectionRule::hard(1.0),
               0.25},
          Case{ProblemSpec::jump(2, 4), NoiseModel::multiplicative(0.5, 2.0),
               SelectionRule::smooth(), 0.2},
          Case{ProblemSpec::onemax(5), NoiseModel::additive(0.5, 0.5), SelectionRule::standard(),
               0.3}}) {
        LumpedChain chain = noisy_chain_reeval(c.spec, c.model, c.rule, c.p);
        CHECK_NOTHROW(validate(chain));
        compare_kernels(chain, oracle::reeval_kernel(c.spec, c.model, c.rule, c.p), 1e-12);
    }
}

TEST_CASE("stored-value kernels against brute-force enumeration") {
    for (double pn : {0.3, 1.0}) {
        LumpedChain chain = noisy_chain_singleeval(ProblemSpec::onemax(4), pn, 0.3);
        CHECK_NOTHROW(validate(chain));
        compare_kernels(chain,
                        oracle::singleeval_kernel(ProblemSpec::onemax(4), pn, 0.3, chain.states),
                        1e-12);
    }
    CHECK_THROWS_AS(noisy_chain_singleeval(ProblemSpec::trap(4), 0.5, 0.3), UnsupportedError);
}

TEST_CASE("stored-value chain, exact transition out of the deceptive corner") {
    // from (n-1 ones, stored n): only a truthful evaluation of the generated
    // optimum is accepted
    int n = 4;
    double p = 0.3, pn = 0.6;
    LumpedChain chain = noisy_chain_singleeval(ProblemSpec::onemax(n), pn, p);
    int from = -1;
    for (int s = 0; s < chain.size(); ++s)
        if (chain.states[s].ones == n - 1 && chain.states[s].stored == n)
            from = s;
    REQUIRE(from >= 0);
    double mass = 0;
    for (int j = 0; j < chain.size(); ++j)
        if (chain.optimal[j])
            mass += chain.at(from, j);
    CHECK(mass == Approx(p * 0.7 * 0.7 * 0.7 * (1.0 - pn)).margin(1e-15));
}

TEST_CASE("chain validation rejects malformed chains") {
    LumpedChain ok = tiny_chain(2.0 / 3, 1.0 / 3);
    CHECK_NOTHROW(validate(ok));

    LumpedChain bad = ok;
    bad.kernel[0] = 0.5; // row 0 sums to 1.5
    CHECK_THROWS_WITH(validate(bad), ContainsSubstring("does not sum to 1"));

    bad = ok;
    bad.kernel[1] = -0.1;
    CHECK_THROWS_AS(validate(bad), ArgumentError);

    bad = ok;
    bad.at(2, 2) = 0.9;
    bad.at(2, 0) = 0.1; // optimal state leaks
    CHECK_THROWS_WITH(validate(bad), ContainsSubstring("not absorbing"));

    bad = ok;
    bad.optimal = {0, 0, 0};
    CHECK_THROWS_WITH(validate(bad), ContainsSubstring("no optimal state"));

    bad = ok;
    bad.initial = {0.5, 0.0, 0.0};
    CHECK_THROWS_WITH(validate(bad), ContainsSubstring("initial distribution"));

    bad = ok;
    bad.optimal = {0, 0};
    CHECK_THROWS_WITH(validate(bad), ContainsSubstring("inconsistent field sizes"));
}

TEST_CASE("hitting times of a hand-solvable chain") {
    LumpedChain chain = tiny_chain(2.0 / 3, 1.0 / 3);
    EfhtVector efht = efht_solve(chain);
    CHECK(efht.values[0] == Approx(4.0).margin(1e-9));
    CHECK(efht.values[1] == Approx(3.0).margin(1e-9));
    CHECK(efht.values[2] == 0.0);
    CHECK(efht_from_uniform_init(chain, efht) == Approx(4.0).margin(1e-9));
}

TEST_CASE("unreachable optimum is reported with the stuck states") {
    LumpedChain chain = tiny_chain(2.0 / 3, 1.0 / 3);
    chain.at(0, 1) = 0.0;
    chain.at(0, 0) = 1.0; // state 0 now a non-optimal sink
    CHECK_THROWS_AS(efht_solve(chain), SingularityError);
    CHECK_THROWS_WITH(efht_solve(chain), ContainsSubstring("{0}"));
}

TEST_CASE("grouping states by hitting time") {
    EfhtVector efht;
    efht.states = {{0, 0, false}, {1, 0, false}, {2, 0, false}, {3, 0, false}};
    efht.values = {9.0, 5.0, 0.0, 5.0 + 4e-10};
    efht.optimal = {0, 0, 1, 0};
    EfhtPartition part = efht_partition(efht, 1e-9);
    REQUIRE(part.classes.size() == 3);
    CHECK(part.classes[0] == std::vector<int>{2});
    CHECK(part.classes[1] == std::vector<int>{1, 3});
    CHECK(part.classes[2] == std::vector<int>{0});
    CHECK(part.class_efht[0] == 0.0);
    CHECK(part.class_efht[1] == Approx(5.0).margin(1e-9));
    CHECK(part.class_efht[2] == 9.0);

    // a non-optimal state with zero hitting time cannot be partitioned
    efht.values[1] = 0.0;
    CHECK_THROWS_WITH(efht_partition(efht, 1e-9),
                      ContainsSubstring("groups with the optimal class"));

    EfhtVector split;
    split.states = {{0, 0, false}, {1, 0, false}, {2, 0, false}};
    split.values = {0.0, 2.0, 7.0};
    split.optimal = {1, 0, 1}; // absorbing state with a positive hitting time
    CHECK_THROWS_WITH(efht_partition(split, 1e-9),
                      ContainsSubstring("outside the first class"));
}

TEST_CASE("prefix-mass comparison between two chains") {
    LumpedChain base = tiny_chain(2.0 / 3, 1.0 / 3);
    EfhtPartition part = efht_partition(efht_solve(base));

    SECTION("identical chains satisfy both directions") {
        DominanceResult res = dominance_check(base, base, part);
        CHECK(res.verdict == DominanceVerdict::Both);
        CHECK_FALSE(res.easier_violation.has_value());
        CHECK_FALSE(res.harder_violation.has_value());
    }

    SECTION("mass shifted toward the optimum is easier, and only easier") {
        LumpedChain noisy = tiny_chain(0.6, 0.4);
        DominanceResult res = dominance_check(noisy, base, part);
        CHECK(res.verdict == DominanceVerdict::EasierConditionHolds);
        REQUIRE(res.harder_violation.has_value());
        CHECK(res.harder_violation->state == 1);
        CHECK(res.harder_violation->prefix == 0);
        CHECK(res.harder_violation->cum_noisy == Approx(0.4));
        CHECK(res.harder_violation->cum_noiseless == Approx(1.0 / 3));
    }

    SECTION("mass shifted away from the optimum is harder") {
        LumpedChain noisy = tiny_chain(0.75, 0.25);
        DominanceResult res = dominance_check(noisy, base, part);
        CHECK(res.verdict == DominanceVerdict::HarderConditionHolds);
        REQUIRE(res.easier_violation.has_value());
        CHECK(res.easier_violation->state == 1);
    }

    SECTION("opposite shifts in different states satisfy neither direction") {
        LumpedChain noisy = tiny_chain(0.75, 0.25);
        noisy.at(0, 1) = 0.9;
        noisy.at(0, 2) = 0.1; // state 0 easier, state 1 harder
        DominanceResult res = dominance_check(noisy, base, part);
        CHECK(res.verdict == DominanceVerdict::Neither);
        CHECK(res.easier_violation.has_value());
        CHECK(res.harder_violation.has_value());
    }

    SECTION("state spaces must match") {
        LumpedChain other = tiny_chain(2.0 / 3, 1.0 / 3);
        other.states[1].ones = 2;
        CHECK_THROWS_AS(dominance_check(other, base, part), ArgumentError);
    }
}

TEST_CASE("drift extremes of the hitting-time potential") {
    LumpedChain chain = tiny_chain(2.0 / 3, 1.0 / 3);
    EfhtVector efht = efht_solve(chain);

    // the hitting time itself drifts by exactly one per step
    DriftReport rep = drift_report(chain, efht);
    CHECK(rep.c_l == Approx(1.0).margin(1e-9));
    CHECK(rep.c_u == Approx(1.0).margin(1e-9));
    CHECK(rep.lower_bound_available);
    CHECK(rep.upper_bound_available);
    CHECK(rep.lower[0] == Approx(efht.values[0]).epsilon(1e-9));
    CHECK(rep.upper[0] == Approx(efht.values[0]).epsilon(1e-9));

    EfhtVector doubled = efht;
    for (double& v : doubled.values)
        v *= 2.0;
    DriftReport rep2 = drift_report(chain, doubled);
    CHECK(rep2.c_l == Approx(2.0).margin(1e-9));
    CHECK(rep2.c_u == Approx(2.0).margin(1e-9));
    CHECK(rep2.upper[1] == Approx(efht.values[1]).epsilon(1e-9));

    // a potential that rises in expectation somewhere loses its upper bound
    EfhtVector skewed = efht;
    skewed.values = {1.0, 10.0, 0.0}; // state 0 steps to potential 10
    DriftReport rep3 = drift_report(chain, skewed);
    CHECK(rep3.c_l < 0.0);
    CHECK_FALSE(rep3.upper_bound_available);
    CHECK(rep3.lower_bound_available); // state 1 still drifts downward
    CHECK(rep3.upper[0] == 0.0);

    EfhtVector bad = efht;
    bad.values[2] = 0.5; // nonzero on the optimal state
    CHECK_THROWS_AS(drift_report(chain, bad), ArgumentError);
    bad = efht;
    bad.values[0] = 0.0; // zero off the optimal set
    CHECK_THROWS_AS(drift_report(chain, bad), ArgumentError);
}

TEST_CASE("prefix-dominance expectation inequality") {
    CHECK(lemma4_oracle({0.3, 0.7}, {0.5, 0.5}, {1.0, 2.0}));
    CHECK(lemma4_oracle({0.5, 0.5}, {0.5, 0.5}, {0.0, 3.0})); // equality edge
    CHECK(lemma4_oracle({0.0, 0.2, 0.8}, {0.1, 0.5, 0.4}, {1.0, 4.0, 9.0}));

    CHECK_THROWS_WITH(lemma4_oracle({0.6, 0.4}, {0.5, 0.5}, {1.0, 2.0}),
                      ContainsSubstring("index 0"));
    CHECK_THROWS_AS(lemma4_oracle({0.5, 0.5}, {0.5, 0.5}, {2.0, 1.0}), ArgumentError);
    CHECK_THROWS_AS(lemma4_oracle({0.5, 0.5}, {0.5, 0.5}, {-1.0, 2.0}), ArgumentError);
    CHECK_THROWS_AS(lemma4_oracle({0.9, 0.2}, {0.5, 0.5}, {1.0, 2.0}), ArgumentError);
    CHECK_THROWS_AS(lemma4_oracle({-0.1, 1.1}, {0.5, 0.5}, {1.0, 2.0}), ArgumentError);
    CHECK_THROWS_AS(lemma4_oracle({}, {}, {}), ArgumentError);
}

TEST_CASE("sampled kernel rows agree with the exact kernels") {
    const std::uint64_t steps = 200000;
    auto check_row = [&](const std::vector<double>& est, const LumpedChain& chain, int i) {
        for (int j = 0; j < chain.size(); ++j) {
            double q = chain.at(i, j);
            double sigma = std::sqrt(q * (1 - q) / static_cast<double>(steps));
            INFO("row " << i << " column " << j);
            CHECK(std::abs(est[j] - q) < 4 * sigma + 1.0 / static_cast<double>(steps));
        }
    };

    ProblemSpec spec = ProblemSpec::onemax(4);
    NoiseModel model = NoiseModel::one_bit(0.5);
    LumpedChain exact = noisy_chain_reeval(spec, model, SelectionRule::standard(), 0.25);
    check_row(mc_row_estimate(spec, model, 1, 0.25, 2, steps, 91), exact, 2);

    ProblemSpec trap = ProblemSpec::trap(4);
    LumpedChain two = noiseless_chain(trap, 2, 0.3);
    check_row(mc_row_estimate(trap, NoiseModel::noiseless(), 2, 0.3, 1, steps, 92), two, 1);
}
