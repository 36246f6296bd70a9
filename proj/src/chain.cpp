#include "nelab/chain.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "nelab/numerics.hpp"

namespace nelab {

std::string ChainState::label() const {
    if (!has_stored)
        return std::to_string(ones);
    return std::to_string(ones) + "|" + std::to_string(stored);
}

const char* verdict_name(DominanceVerdict v) {
    switch (v) {
    case DominanceVerdict::EasierConditionHolds: return "EasierConditionHolds";
    case DominanceVerdict::HarderConditionHolds: return "HarderConditionHolds";
    case DominanceVerdict::Both: return "Both";
    case DominanceVerdict::Neither: return "Neither";
    }
    return "?";
}

void validate(const LumpedChain& chain, double row_tol) {
    std::size_t s = chain.states.size();
    if (s == 0)
        throw ArgumentError("LumpedChain: empty state list");
    if (chain.kernel.size() != s * s || chain.optimal.size() != s || chain.initial.size() != s)
        throw ArgumentError("LumpedChain: inconsistent field sizes");
    bool any_optimal = false;
    for (std::size_t i = 0; i < s; ++i) {
        CompensatedSum<double> row;
        for (std::size_t j = 0; j < s; ++j) {
            double v = chain.kernel[i * s + j];
            if (!(v >= 0.0) || v > 1.0 + row_tol)
                throw ArgumentError("LumpedChain: kernel entry outside [0,1]");
            row.add(v);
        }
        if (std::abs(row.value() - 1.0) > row_tol)
            throw ArgumentError("LumpedChain: row " + chain.states[i].label() +
                                " does not sum to 1");
        if (chain.optimal[i]) {
            any_optimal = true;
            if (std::abs(chain.at(static_cast<int>(i), static_cast<int>(i)) - 1.0) > row_tol)
                throw ArgumentError("LumpedChain: optimal state " + chain.states[i].label() +
                                    " is not absorbing");
        }
    }
    if (!any_optimal)
        throw ArgumentError("LumpedChain: no optimal state");
    CompensatedSum<double> init;
    for (double v : chain.initial) {
        if (!(v >= 0.0))
            throw ArgumentError("LumpedChain: negative initial mass");
        init.add(v);
    }
    if (std::abs(init.value() - 1.0) > 1e-12)
        throw ArgumentError("LumpedChain: initial distribution does not sum to 1");
}

namespace {

// pmf of Binomial(m, p) by forward recurrence; exact enough at the sizes the
// chains use (relative error grows like m ulps)
std::vector<double> binomial_pmf(int m, double p) {
    std::vector<double> b(static_cast<std::size_t>(m) + 1);
    double q = 1.0 - p;
    double cur = std::pow(q, m);
    b[0] = cur;
    for (int k = 0; k < m; ++k) {
        cur *= static_cast<double>(m - k) / (k + 1) * (p / q);
        b[static_cast<std::size_t>(k) + 1] = cur;
    }
    return b;
}

double pow_int(double x, int e) {
    double r = 1.0;
    for (int i = 0; i < e; ++i)
        r *= x;
    return r;
}

std::vector<ChainState> ones_states(int n) {
    std::vector<ChainState> st(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
        st[i] = {i, 0, false};
    return st;
}

void check_mutation_p(double p) {
    if (!(p > 0.0 && p < 0.5))
        throw ArgumentError("chain: mutation probability must lie in (0, 0.5)");
}

void check_lumpable(const ProblemSpec& spec) {
    validate(spec);
    switch (spec.family) {
    case Family::Trap:
    case Family::OneMax:
    case Family::Jump:
        return; // fitness is a function of the ones-count for all three
    }
    throw UnsupportedError("chain: family is not lumpable by ones-count");
}

// P[offspring accepted] for a parent class a and offspring class b under
// fresh independent evaluations
double accept_probability(const SelectionRule& rule, int n, const ValueDist& parent,
                          const ValueDist& offspring) {
    switch (rule.kind) {
    case RuleKind::Standard:
        return prob_ge(offspring, parent, 0.0);
    case RuleKind::HardThreshold:
        return prob_ge(offspring, parent, rule.tau);
    case RuleKind::SmoothThreshold:
        // gap > 1 always accepted; the exact gap-1 mass takes the 1/(5n) coin;
        // gap in (0,1] otherwise rejected
        return prob_gt(offspring, parent, 1.0) +
               prob_gap_eq(offspring, parent, 1.0) / (5.0 * n);
    }
    return 0.0;
}

} // namespace

std::vector<double> offspring_ones_distribution(int n, int i, double p) {
    if (n < 1)
        throw ArgumentError("offspring_ones_distribution: n must be >= 1");
    if (i < 0 || i > n)
        throw ArgumentError("offspring_ones_distribution: ones-count out of range");
    if (!(p > 0.0 && p < 1.0))
        throw ArgumentError("offspring_ones_distribution: p must lie in (0, 1)");
    std::vector<double> down = binomial_pmf(i, p);     // flips among the i one-bits
    std::vector<double> up = binomial_pmf(n - i, p);   // flips among the n-i zero-bits
    std::vector<double> out(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        CompensatedSum<double> s;
        for (int k = 0; k <= i; ++k) {
            int l = j - i + k; // gained ones among the zero-bits
            if (l < 0 || l > n - i)
                continue;
            s.add(down[k] * up[l]);
        }
        out[j] = s.value();
    }
    return out;
}

LumpedChain noiseless_chain(const ProblemSpec& spec, int lambda, double p) {
    check_lumpable(spec);
    if (lambda < 1)
        throw ArgumentError("noiseless_chain: lambda must be >= 1");
    check_mutation_p(p);
    int n = spec.n;
    LumpedChain chain;
    chain.spec = spec;
    chain.states = ones_states(n);
    chain.kernel.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    chain.optimal.assign(n + 1, 0);
    chain.optimal[n] = 1;
    chain.initial = binomial_pmf(n, 0.5);

    // classes sorted by true value; selection keeps the parent unless some
    // offspring ranks strictly higher
    std::vector<int> order(static_cast<std::size_t>(n) + 1);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        return value_by_ones(spec, a) < value_by_ones(spec, b);
    });
    std::vector<int> rank(static_cast<std::size_t>(n) + 1);
    for (int r = 0; r <= n; ++r)
        rank[order[r]] = r;

    for (int i = 0; i < n; ++i) {
        std::vector<double> q = offspring_ones_distribution(n, i, p);
        std::vector<double> cum(static_cast<std::size_t>(n) + 1);
        CompensatedSum<double> c;
        for (int r = 0; r <= n; ++r) {
            c.add(q[order[r]]);
            cum[r] = std::min(c.value(), 1.0);
        }
        int ri = rank[i];
        chain.at(i, i) = pow_int(cum[ri], lambda);
        for (int r = ri + 1; r <= n; ++r) {
            // cum[r]^lambda - cum[r-1]^lambda, factored through the exact class
            // mass q to dodge cancellation
            double lo = cum[r - 1];
            double hi = cum[r];
            CompensatedSum<double> poly;
            for (int t = 0; t < lambda; ++t)
                poly.add(pow_int(hi, t) * pow_int(lo, lambda - 1 - t));
            chain.at(i, order[r]) = q[order[r]] * poly.value();
        }
    }
    chain.at(n, n) = 1.0;
    return chain;
}

LumpedChain noisy_chain_reeval(const ProblemSpec& spec, const NoiseModel& model,
                               const SelectionRule& rule, double p) {
    check_lumpable(spec);
    validate(model);
    validate(rule);
    check_mutation_p(p);
    int n = spec.n;
    LumpedChain chain;
    chain.spec = spec;
    chain.states = ones_states(n);
    chain.kernel.assign(static_cast<std::size_t>(n + 1) * (n + 1), 0.0);
    chain.optimal.assign(n + 1, 0);
    chain.optimal[n] = 1;
    chain.initial = binomial_pmf(n, 0.5);

    std::vector<ValueDist> dist(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j)
        dist[j] = noisy_value_dist(model, spec, j);

    for (int i = 0; i < n; ++i) {
        std::vector<double> q = offspring_ones_distribution(n, i, p);
        CompensatedSum<double> stay;
        stay.add(q[i]); // same-class offspring keep the class either way
        for (int j = 0; j <= n; ++j) {
            if (j == i)
                continue;
            double a = accept_probability(rule, n, dist[i], dist[j]);
            chain.at(i, j) = q[j] * a;
            stay.add(q[j] * (1.0 - a));
        }
        chain.at(i, i) = stay.value();
    }
    chain.at(n, n) = 1.0;
    return chain;
}

LumpedChain noisy_chain_singleeval(const ProblemSpec& spec, double pn, double p) {
    validate(spec);
    if (spec.family != Family::OneMax)
        throw UnsupportedError("noisy_chain_singleeval: only the ones-counting family is supported");
    if (!(pn >= 0.0 && pn <= 1.0))
        throw ArgumentError("noisy_chain_singleeval: pn must lie in [0,1]");
    check_mutation_p(p);
    int n = spec.n;

    LumpedChain chain;
    chain.spec = spec;
    // states (ones i, stored value L), L within one of i and inside [0, n]
    std::vector<std::vector<int>> idx(static_cast<std::size_t>(n) + 1,
                                      std::vector<int>(static_cast<std::size_t>(n) + 1, -1));
    for (int i = 0; i <= n; ++i)
        for (int L = std::max(0, i - 1); L <= std::min(n, i + 1); ++L) {
            idx[i][L] = static_cast<int>(chain.states.size());
            chain.states.push_back({i, L, true});
        }
    int S = static_cast<int>(chain.states.size());
    chain.kernel.assign(static_cast<std::size_t>(S) * S, 0.0);
    chain.optimal.assign(S, 0);
    chain.initial.assign(S, 0.0);

    // one-bit noise law of the reported value of a solution with j ones
    auto noise_law = [&](int j) {
        std::vector<std::pair<int, double>> out;
        if (1.0 - pn > 0.0)
            out.emplace_back(j, 1.0 - pn);
        double down = pn * static_cast<double>(j) / n;
        double up = pn * static_cast<double>(n - j) / n;
        if (down > 0.0)
            out.emplace_back(j - 1, down);
        if (up > 0.0)
            out.emplace_back(j + 1, up);
        return out;
    };

    std::vector<double> bin = binomial_pmf(n, 0.5);
    for (int i = 0; i <= n; ++i)
        for (auto [L, w] : noise_law(i))
            chain.initial[idx[i][L]] = bin[i] * w;

    for (int s = 0; s < S; ++s) {
        const ChainState& st = chain.states[s];
        if (st.ones == n) {
            chain.optimal[s] = 1;
            chain.kernel[static_cast<std::size_t>(s) * S + s] = 1.0;
            continue;
        }
        std::vector<double> q = offspring_ones_distribution(n, st.ones, p);
        CompensatedSum<double> rejected;
        for (int j = 0; j <= n; ++j) {
            if (q[j] == 0.0)
                continue;
            for (auto [z, w] : noise_law(j)) {
                double mass = q[j] * w;
                if (z >= st.stored)
                    chain.kernel[static_cast<std::size_t>(s) * S + idx[j][z]] += mass;
                else
                    rejected.add(mass);
            }
        }
        chain.kernel[static_cast<std::size_t>(s) * S + s] += rejected.value();
    }
    return chain;
}

std::vector<double> mc_row_estimate(const ProblemSpec& spec, const NoiseModel& model, int lambda,
                                    double p, int ones, std::uint64_t steps, std::uint64_t seed) {
    check_lumpable(spec);
    if (ones < 0 || ones > spec.n)
        throw ArgumentError("mc_row_estimate: ones-count out of range");
    if (steps < 1)
        throw ArgumentError("mc_row_estimate: steps must be >= 1");
    AlgoConfig cfg{lambda, p, SelectionRule::standard(), EvalPolicy::ReEvaluation};
    Stepper st(cfg, spec, model);
    BitString parent = [&] {
        BitString x(spec.n);
        std::vector<std::uint64_t> words((spec.n + 63) / 64, 0);
        for (int k = 0; k < ones; ++k)
            words[k / 64] |= 1ULL << (k % 64);
        return BitString::from_words(std::move(words), spec.n);
    }();
    RandomSource rng(seed);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(spec.n) + 1, 0);
    for (std::uint64_t t = 0; t < steps; ++t) {
        st.reset_unevaluated(parent);
        counts[st.step(rng)]++;
    }
    std::vector<double> freq(counts.size());
    for (std::size_t j = 0; j < counts.size(); ++j)
        freq[j] = static_cast<double>(counts[j]) / static_cast<double>(steps);
    return freq;
}

EfhtVector efht_solve(const LumpedChain& chain) {
    validate(chain);
    int S = chain.size();
    // backward reachability of the optimal set over positive-probability edges
    std::vector<char> reach(chain.optimal.begin(), chain.optimal.end());
    bool grew = true;
    while (grew) {
        grew = false;
        for (int i = 0; i < S; ++i) {
            if (reach[i])
                continue;
            for (int j = 0; j < S; ++j) {
                if (reach[j] && chain.at(i, j) > 0.0) {
                    reach[i] = 1;
                    grew = true;
                    break;
                }
            }
        }
    }
    std::string stuck;
    for (int i = 0; i < S; ++i)
        if (!reach[i])
            stuck += (stuck.empty() ? "" : ", ") + chain.states[i].label();
    if (!stuck.empty())
        throw SingularityError("efht_solve: optimal set unreachable from states {" + stuck + "}");

    std::vector<int> row_of(S, -1);
    std::vector<int> nonopt;
    for (int i = 0; i < S; ++i)
        if (!chain.optimal[i]) {
            row_of[i] = static_cast<int>(nonopt.size());
            nonopt.push_back(i);
        }
    int m = static_cast<int>(nonopt.size());

    EfhtVector out;
    out.states = chain.states;
    out.optimal.assign(chain.optimal.begin(), chain.optimal.end());
    out.values.assign(S, 0.0);
    if (m == 0)
        return out;

    using Mat = Eigen::Matrix<long double, Eigen::Dynamic, Eigen::Dynamic>;
    using Vec = Eigen::Matrix<long double, Eigen::Dynamic, 1>;
    Mat A = Mat::Zero(m, m);
    Vec b = Vec::Ones(m);
    for (int r = 0; r < m; ++r) {
        int i = nonopt[r];
        // the diagonal of I - P is the total leaving mass, accumulated instead
        // of computed as 1 - P[i][i] to dodge cancellation in sticky rows
        CompensatedSum<long double> leave;
        for (int j = 0; j < S; ++j) {
            if (j == i)
                continue;
            long double pij = chain.at(i, j);
            leave.add(pij);
            if (!chain.optimal[j])
                A(r, row_of[j]) = -pij;
        }
        A(r, r) = leave.value();
    }
    Eigen::PartialPivLU<Mat> lu(A);
    Vec x = lu.solve(b);
    x += lu.solve(b - A * x); // one refinement pass

    Vec residual = A * x - b;
    for (int r = 0; r < m; ++r) {
        long double scale = 1.0L;
        for (int c = 0; c < m; ++c)
            scale += std::abs(A(r, c) * x(c));
        if (!(std::abs(residual(r)) <= 1e-9L * scale) || !(x(r) >= 0.0L))
            throw SingularityError("efht_solve: system ill-conditioned at state " +
                                   chain.states[nonopt[r]].label());
    }
    for (int r = 0; r < m; ++r)
        out.values[nonopt[r]] = static_cast<double>(x(r));
    return out;
}

EfhtPartition efht_partition(const EfhtVector& efht, double tol) {
    if (efht.states.size() != efht.values.size() || efht.states.size() != efht.optimal.size())
        throw ArgumentError("efht_partition: inconsistent vector sizes");
    if (!(tol >= 0.0))
        throw ArgumentError("efht_partition: tolerance must be >= 0");
    int S = static_cast<int>(efht.states.size());
    std::vector<int> order(S);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return efht.values[a] < efht.values[b]; });

    EfhtPartition part;
    for (int k = 0; k < S; ++k) {
        int s = order[k];
        // anchor-based grouping: a class spans values within tol of its first
        // member, so chained drift cannot merge distinct plateaus
        if (part.classes.empty() ||
            efht.values[s] - efht.values[part.classes.back().front()] > tol) {
            part.classes.emplace_back();
        }
        part.classes.back().push_back(s);
    }
    part.class_efht.reserve(part.classes.size());
    for (const auto& cls : part.classes) {
        CompensatedSum<double> mean;
        for (int s : cls)
            mean.add(efht.values[s]);
        part.class_efht.push_back(mean.value() / static_cast<double>(cls.size()));
    }
    for (int s : part.classes.front())
        if (!efht.optimal[s])
            throw ArgumentError("efht_partition: non-optimal state " + efht.states[s].label() +
                                " groups with the optimal class");
    for (std::size_t c = 1; c < part.classes.size(); ++c)
        for (int s : part.classes[c])
            if (efht.optimal[s])
                throw ArgumentError("efht_partition: optimal state outside the first class");
    return part;
}

DominanceResult dominance_check(const LumpedChain& noisy, const LumpedChain& noiseless,
                                const EfhtPartition& partition, double tol) {
    if (noisy.states != noiseless.states || noisy.optimal != noiseless.optimal)
        throw ArgumentError("dominance_check: chains do not share a state space");
    std::size_t S = noisy.states.size();
    std::vector<char> seen(S, 0);
    for (const auto& cls : partition.classes)
        for (int s : cls) {
            if (s < 0 || static_cast<std::size_t>(s) >= S || seen[s])
                throw ArgumentError("dominance_check: partition does not cover the state space");
            seen[s] = 1;
        }
    if (std::count(seen.begin(), seen.end(), 1) != static_cast<long>(S))
        throw ArgumentError("dominance_check: partition does not cover the state space");

    DominanceResult res;
    bool easier = true;
    bool harder = true;
    int prefixes = static_cast<int>(partition.classes.size()) - 1;
    for (std::size_t x = 0; x < S; ++x) {
        if (noisy.optimal[x])
            continue;
        CompensatedSum<double> cn, cl;
        for (int i = 0; i < prefixes; ++i) {
            for (int y : partition.classes[i]) {
                cn.add(noisy.at(static_cast<int>(x), y));
                cl.add(noiseless.at(static_cast<int>(x), y));
            }
            double vn = cn.value();
            double vl = cl.value();
            if (easier && vn < vl - tol) {
                easier = false;
                res.easier_violation = {static_cast<int>(x), i, vn, vl};
            }
            if (harder && vn > vl + tol) {
                harder = false;
                res.harder_violation = {static_cast<int>(x), i, vn, vl};
            }
        }
    }
    if (easier && harder)
        res.verdict = DominanceVerdict::Both;
    else if (easier)
        res.verdict = DominanceVerdict::EasierConditionHolds;
    else if (harder)
        res.verdict = DominanceVerdict::HarderConditionHolds;
    else
        res.verdict = DominanceVerdict::Neither;
    return res;
}

DriftReport drift_report(const LumpedChain& chain, const EfhtVector& V) {
    validate(chain);
    if (V.states != chain.states)
        throw ArgumentError("drift_report: potential defined on a different state space");
    int S = chain.size();
    for (int i = 0; i < S; ++i) {
        double v = V.values[i];
        if (!std::isfinite(v))
            throw ArgumentError("drift_report: potential must be finite");
        if (chain.optimal[i] ? (v != 0.0) : !(v > 0.0))
            throw ArgumentError("drift_report: potential must be 0 exactly on optimal states and"
                                " positive elsewhere");
    }
    DriftReport rep;
    bool first = true;
    for (int i = 0; i < S; ++i) {
        if (chain.optimal[i])
            continue;
        CompensatedSum<double> next;
        for (int j = 0; j < S; ++j)
            next.add(chain.at(i, j) * V.values[j]);
        double d = V.values[i] - next.value();
        if (first || d < rep.c_l)
            rep.c_l = d;
        if (first || d > rep.c_u)
            rep.c_u = d;
        first = false;
    }
    if (first)
        throw ArgumentError("drift_report: chain has no non-optimal state");
    rep.lower_bound_available = rep.c_u > 0.0;
    rep.upper_bound_available = rep.c_l > 0.0;
    rep.lower.assign(S, 0.0);
    rep.upper.assign(S, 0.0);
    for (int i = 0; i < S; ++i) {
        if (chain.optimal[i])
            continue;
        if (rep.lower_bound_available)
            rep.lower[i] = V.values[i] / rep.c_u;
        if (rep.upper_bound_available)
            rep.upper[i] = V.values[i] / rep.c_l;
    }
    return rep;
}

bool lemma4_oracle(const std::vector<double>& P, const std::vector<double>& Q,
                   const std::vector<double>& E) {
    std::size_t s = P.size();
    if (s == 0 || Q.size() != s || E.size() != s)
        throw ArgumentError("lemma4_oracle: vectors must share a positive length");
    CompensatedSum<double> sp, sq;
    for (std::size_t i = 0; i < s; ++i) {
        if (!(P[i] >= 0.0) || !(Q[i] >= 0.0))
            throw ArgumentError("lemma4_oracle: negative probability entry");
        sp.add(P[i]);
        sq.add(Q[i]);
    }
    if (std::abs(sp.value() - 1.0) > 1e-9)
        throw ArgumentError("lemma4_oracle: P does not sum to 1");
    if (std::abs(sq.value() - 1.0) > 1e-9)
        throw ArgumentError("lemma4_oracle: Q does not sum to 1");
    if (!(E[0] >= 0.0) || !std::isfinite(E[0]))
        throw ArgumentError("lemma4_oracle: E must be non-negative");
    for (std::size_t i = 1; i < s; ++i)
        if (!std::isfinite(E[i]) || !(E[i] > E[i - 1]))
            throw ArgumentError("lemma4_oracle: E must be strictly increasing");
    CompensatedSum<double> pp, pq;
    for (std::size_t i = 0; i + 1 < s; ++i) { // the full sums are both 1
        pp.add(P[i]);
        pq.add(Q[i]);
        if (pp.value() > pq.value() + 1e-12)
            throw ArgumentError("lemma4_oracle: prefix sums of P exceed those of Q at index " +
                                std::to_string(i));
    }
    CompensatedSum<long double> dp, dq;
    for (std::size_t i = 0; i < s; ++i) {
        dp.add(static_cast<long double>(P[i]) * E[i]);
        dq.add(static_cast<long double>(Q[i]) * E[i]);
    }
    long double scale = std::max<long double>({1.0L, std::abs(dp.value()), std::abs(dq.value())});
    return dp.value() >= dq.value() - 1e-12L * scale;
}

double efht_from_uniform_init(const LumpedChain& chain, const EfhtVector& efht) {
    if (efht.states != chain.states)
        throw ArgumentError("efht_from_uniform_init: state-space mismatch");
    CompensatedSum<double> s;
    for (int i = 0; i < chain.size(); ++i)
        s.add(chain.initial[i] * efht.values[i]);
    return s.value();
}

} // namespace nelab
