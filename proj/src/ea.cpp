#include "nelab/ea.hpp"

#include <cmath>
#include <cstring>

namespace nelab {

void validate(const SelectionRule& rule) {
    if (rule.kind == RuleKind::HardThreshold && !(rule.tau >= 0.0 && std::isfinite(rule.tau)))
        throw ArgumentError("SelectionRule: hard threshold tau must be finite and >= 0");
}

void validate(const AlgoConfig& cfg) {
    if (cfg.lambda < 1)
        throw ArgumentError("AlgoConfig: lambda must be >= 1");
    if (!(cfg.p > 0.0 && cfg.p < 0.5))
        throw ArgumentError("AlgoConfig: mutation probability must lie in (0, 0.5)");
    validate(cfg.rule);
    if (cfg.rule.kind != RuleKind::Standard && cfg.lambda != 1)
        throw ArgumentError("AlgoConfig: threshold rules are defined for lambda = 1 only");
}

namespace {

// Flip each of n bits independently with probability p by jumping between flip
// positions with geometric gaps; O(np+1) draws instead of n. Returns the
// change in ones-count.
int flip_bits(std::uint64_t* words, int n, double log1mp, RandomSource& rng) {
    int delta = 0;
    int pos = 0;
    for (;;) {
        double u = rng.next_unit();
        if (u <= 0.0)
            break;
        double gap = std::floor(std::log(u) / log1mp);
        if (gap >= static_cast<double>(n - pos))
            break;
        pos += static_cast<int>(gap);
        std::uint64_t bit = 1ULL << (pos % 64);
        delta += (words[pos / 64] & bit) ? -1 : 1;
        words[pos / 64] ^= bit;
        if (++pos >= n)
            break;
    }
    return delta;
}

} // namespace

BitString mutate(const BitString& x, double p, RandomSource& rng) {
    if (!(p > 0.0 && p < 0.5))
        throw ArgumentError("mutate: p must lie in (0, 0.5)");
    std::vector<std::uint64_t> words = x.words();
    flip_bits(words.data(), x.size(), std::log1p(-p), rng);
    return BitString::from_words(std::move(words), x.size());
}

bool accept(const SelectionRule& rule, int n, double fN_parent, double fN_offspring,
            RandomSource& rng) {
    if (n < 1)
        throw ArgumentError("accept: n must be >= 1");
    validate(rule);
    switch (rule.kind) {
    case RuleKind::Standard:
        return fN_offspring >= fN_parent;
    case RuleKind::HardThreshold:
        return fN_offspring >= fN_parent + rule.tau;
    case RuleKind::SmoothThreshold: {
        double g = fN_offspring - fN_parent;
        if (g <= 0.0)
            return false;
        if (g == 1.0)
            return rng.bernoulli(1.0 / (5.0 * n));
        if (g > 1.0)
            return true;
        return false; // fractional gap in (0,1): conservative reject
    }
    }
    return false;
}

Stepper::Stepper(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model)
    : cfg_(cfg), spec_(spec), model_(model) {
    validate(cfg_);
    validate(spec_);
    validate(model_);
    words_per_ = (spec.n + 63) / 64;
    log1mp_ = std::log1p(-cfg.p);
    parent_.resize(words_per_);
    children_.resize(static_cast<std::size_t>(cfg.lambda) * words_per_);
    child_ones_.resize(cfg.lambda);
    child_value_.resize(cfg.lambda);
}

void Stepper::reset(const BitString& parent, RandomSource& rng) {
    if (parent.size() != spec_.n)
        throw ArgumentError("Stepper: parent length does not match problem size");
    std::copy(parent.words().begin(), parent.words().end(), parent_.begin());
    ones_ = parent.ones();
    value_ = noisy_fitness_words(model_, spec_, parent_, ones_, rng);
    evals_ = 1;
}

void Stepper::reset_unevaluated(const BitString& parent) {
    if (cfg_.policy != EvalPolicy::ReEvaluation)
        throw ArgumentError("Stepper: unevaluated reset requires the re-evaluation policy");
    if (parent.size() != spec_.n)
        throw ArgumentError("Stepper: parent length does not match problem size");
    std::copy(parent.words().begin(), parent.words().end(), parent_.begin());
    ones_ = parent.ones();
    value_ = 0;
    evals_ = 0;
}

std::uint64_t Stepper::step_cost() const {
    std::uint64_t c = cfg_.lambda;
    if (cfg_.policy == EvalPolicy::ReEvaluation)
        c += 1;
    return c;
}

void Stepper::adopt(int child) {
    std::uint64_t* cw = children_.data() + static_cast<std::size_t>(child) * words_per_;
    std::copy(cw, cw + words_per_, parent_.begin());
    ones_ = child_ones_[child];
    value_ = child_value_[child];
}

int Stepper::step(RandomSource& rng) {
    for (int o = 0; o < cfg_.lambda; ++o) {
        std::uint64_t* cw = children_.data() + static_cast<std::size_t>(o) * words_per_;
        std::copy(parent_.begin(), parent_.end(), cw);
        int delta = flip_bits(cw, spec_.n, log1mp_, rng);
        child_ones_[o] = ones_ + delta;
    }
    double parent_value;
    if (cfg_.policy == EvalPolicy::ReEvaluation) {
        parent_value = noisy_fitness_words(model_, spec_, parent_, ones_, rng);
        ++evals_;
    } else {
        parent_value = value_;
    }
    for (int o = 0; o < cfg_.lambda; ++o) {
        std::uint64_t* cw = children_.data() + static_cast<std::size_t>(o) * words_per_;
        child_value_[o] =
            noisy_fitness_words(model_, spec_, {cw, static_cast<std::size_t>(words_per_)},
                                child_ones_[o], rng);
        ++evals_;
    }
    if (cfg_.lambda == 1) {
        if (accept(cfg_.rule, spec_.n, parent_value, child_value_[0], rng))
            adopt(0);
        else if (cfg_.policy == EvalPolicy::ReEvaluation)
            value_ = parent_value;
    } else {
        // argmax over parent and offspring; parent wins ties, then lowest index
        int best = -1;
        double best_value = parent_value;
        for (int o = 0; o < cfg_.lambda; ++o) {
            if (child_value_[o] > best_value) {
                best_value = child_value_[o];
                best = o;
            }
        }
        if (best >= 0)
            adopt(best);
        else if (cfg_.policy == EvalPolicy::ReEvaluation)
            value_ = parent_value;
    }
    return ones_;
}

BitString Stepper::parent() const {
    return BitString::from_words(parent_, spec_.n);
}

namespace {

BitString random_solution(int n, RandomSource& rng) {
    std::vector<std::uint64_t> words((n + 63) / 64);
    for (auto& w : words)
        w = rng.next_u64();
    return BitString::from_words(std::move(words), n);
}

RunRecord run_impl(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model,
                   const BitString* initial, std::uint64_t budget, std::uint64_t seed) {
    if (budget < 1)
        throw ArgumentError("run: budget must be >= 1");
    RandomSource rng(seed);
    Stepper st(cfg, spec, model);
    // the stepper constructor validated everything; draw the initial solution
    // only after that so bad configs never consume randomness
    BitString start = initial ? *initial : random_solution(spec.n, rng);
    st.reset(start, rng);

    RunRecord rec;
    rec.seed = seed;
    std::uint64_t n2 = cfg.lambda == 1 ? 1 : static_cast<std::uint64_t>(cfg.lambda);
    std::uint64_t cost = st.step_cost();
    if (st.parent_ones() != spec.n) {
        while (st.evals() + cost <= budget) {
            st.step(rng);
            ++rec.iterations;
            if (st.parent_ones() == spec.n)
                break;
        }
    }
    rec.success = st.parent_ones() == spec.n;
    rec.evaluations_actual = st.evals();
    rec.evaluations_paper = 1 + n2 * rec.iterations;
    rec.final_ones = st.parent_ones();
    return rec;
}

} // namespace

RunRecord run(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model,
              std::uint64_t budget, std::uint64_t seed) {
    return run_impl(cfg, spec, model, nullptr, budget, seed);
}

RunRecord run_from(const AlgoConfig& cfg, const ProblemSpec& spec, const NoiseModel& model,
                   const BitString& initial, std::uint64_t budget, std::uint64_t seed) {
    if (initial.size() != spec.n)
        throw ArgumentError("run_from: initial solution length does not match problem size");
    return run_impl(cfg, spec, model, &initial, budget, seed);
}

} // namespace nelab
