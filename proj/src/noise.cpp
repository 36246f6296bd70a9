#include "nelab/noise.hpp"

#include <algorithm>
#include <cmath>

namespace nelab {

void validate(const NoiseModel& model) {
    switch (model.kind) {
    case NoiseKind::Noiseless:
        break;
    case NoiseKind::Additive:
    case NoiseKind::Multiplicative:
        if (!std::isfinite(model.d1) || !std::isfinite(model.d2))
            throw ArgumentError("NoiseModel: d1/d2 must be finite");
        if (model.d1 > model.d2)
            throw ArgumentError("NoiseModel: d1 must not exceed d2");
        break;
    case NoiseKind::OneBit:
        if (!(model.pn >= 0.0 && model.pn <= 1.0))
            throw ArgumentError("NoiseModel: pn must lie in [0,1]");
        break;
    }
}

const char* noise_name(NoiseKind k) {
    switch (k) {
    case NoiseKind::Noiseless: return "none";
    case NoiseKind::Additive: return "additive";
    case NoiseKind::Multiplicative: return "multiplicative";
    case NoiseKind::OneBit: return "one_bit";
    }
    return "?";
}

double noisy_fitness_words(const NoiseModel& model, const ProblemSpec& spec,
                           std::span<const std::uint64_t> words, int ones, RandomSource& rng) {
    validate(model);
    double f = value_by_ones(spec, ones);
    switch (model.kind) {
    case NoiseKind::Noiseless:
        return f;
    case NoiseKind::Additive:
        if (model.d1 == model.d2)
            return f + model.d1;
        return f + model.d1 + (model.d2 - model.d1) * rng.next_unit();
    case NoiseKind::Multiplicative:
        if (model.d1 == model.d2)
            return f * model.d1;
        return f * (model.d1 + (model.d2 - model.d1) * rng.next_unit());
    case NoiseKind::OneBit: {
        if (model.pn == 0.0)
            return f;
        if (model.pn < 1.0 && !rng.bernoulli(model.pn))
            return f;
        int k = static_cast<int>(rng.below(static_cast<std::uint64_t>(spec.n)));
        bool was_one = (words[k / 64] >> (k % 64)) & 1ULL;
        return value_by_ones(spec, ones + (was_one ? -1 : 1));
    }
    }
    return f;
}

double noisy_fitness(const NoiseModel& model, const ProblemSpec& spec, const BitString& x,
                     RandomSource& rng) {
    if (x.size() != spec.n)
        throw ArgumentError("noisy_fitness: solution length does not match problem size");
    return noisy_fitness_words(model, spec, x.words(), x.ones(), rng);
}

double ValueDist::total_weight() const {
    double s = 0;
    for (const auto& a : atoms)
        s += a.w;
    for (const auto& u : intervals)
        s += u.w;
    return s;
}

ValueDist noisy_value_dist(const NoiseModel& model, const ProblemSpec& spec, int ones) {
    validate(model);
    double f = value_by_ones(spec, ones); // also range-checks ones
    ValueDist d;
    switch (model.kind) {
    case NoiseKind::Noiseless:
        d.atoms.push_back({f, 1.0});
        break;
    case NoiseKind::Additive:
        if (model.d1 == model.d2)
            d.atoms.push_back({f + model.d1, 1.0});
        else
            d.intervals.push_back({f + model.d1, f + model.d2, 1.0});
        break;
    case NoiseKind::Multiplicative:
        if (f == 0.0 || model.d1 == model.d2) {
            d.atoms.push_back({f * model.d1, 1.0});
        } else {
            // negative f reverses the interval orientation
            double lo = std::min(f * model.d1, f * model.d2);
            double hi = std::max(f * model.d1, f * model.d2);
            d.intervals.push_back({lo, hi, 1.0});
        }
        break;
    case NoiseKind::OneBit: {
        int n = spec.n;
        double w_down = model.pn * static_cast<double>(ones) / n;
        double w_up = model.pn * static_cast<double>(n - ones) / n;
        if (1.0 - model.pn > 0.0)
            d.atoms.push_back({f, 1.0 - model.pn});
        if (w_down > 0.0)
            d.atoms.push_back({value_by_ones(spec, ones - 1), w_down});
        if (w_up > 0.0)
            d.atoms.push_back({value_by_ones(spec, ones + 1), w_up});
        break;
    }
    }
    return d;
}

namespace {

// P[A >= B + t] for A ~ U[a1,a2], B ~ U[b1,b2]. The inner probability as a
// function of b is piecewise linear with knees at a1-t and a2-t; integrate the
// pieces in closed form.
double uniform_pair_ge(double a1, double a2, double b1, double b2, double t) {
    double lo = a1 - t;
    double hi = a2 - t;
    double full = 0.0;
    double flat_end = std::min(b2, lo);
    if (flat_end > b1)
        full += (a2 - a1) * (flat_end - b1);
    double c = std::max(b1, lo);
    double d = std::min(b2, hi);
    if (d > c)
        full += (d - c) * (hi - 0.5 * (c + d));
    return full / ((a2 - a1) * (b2 - b1));
}

// P[U >= v] and P[U <= v] for U ~ U[lo,hi]; strictness is immaterial for the
// continuous part
double interval_ge_point(double lo, double hi, double v) {
    return std::clamp((hi - v) / (hi - lo), 0.0, 1.0);
}

double interval_le_point(double lo, double hi, double v) {
    return std::clamp((v - lo) / (hi - lo), 0.0, 1.0);
}

double pair_prob(const ValueDist& a, const ValueDist& b, double t, bool strict) {
    double p = 0.0;
    for (const auto& aa : a.atoms) {
        for (const auto& bb : b.atoms) {
            bool ok = strict ? (aa.value > bb.value + t) : (aa.value >= bb.value + t);
            if (ok)
                p += aa.w * bb.w;
        }
        for (const auto& bu : b.intervals) // P[value >= B + t] = P[B <= value - t]
            p += aa.w * bu.w * interval_le_point(bu.lo, bu.hi, aa.value - t);
    }
    for (const auto& au : a.intervals) {
        for (const auto& bb : b.atoms)
            p += au.w * bb.w * interval_ge_point(au.lo, au.hi, bb.value + t);
        for (const auto& bu : b.intervals)
            p += au.w * bu.w * uniform_pair_ge(au.lo, au.hi, bu.lo, bu.hi, t);
    }
    return p;
}

} // namespace

double prob_ge(const ValueDist& a, const ValueDist& b, double t) {
    return pair_prob(a, b, t, false);
}

double prob_gt(const ValueDist& a, const ValueDist& b, double t) {
    return pair_prob(a, b, t, true);
}

double prob_gap_eq(const ValueDist& a, const ValueDist& b, double g) {
    // only atom pairs can produce an exact gap
    double p = 0.0;
    for (const auto& aa : a.atoms)
        for (const auto& bb : b.atoms)
            if (aa.value == bb.value + g)
                p += aa.w * bb.w;
    return p;
}

double comparison_probabilities(const NoiseModel& model, const ProblemSpec& spec, int ones_a,
                                int ones_b, double t) {
    ValueDist da = noisy_value_dist(model, spec, ones_a);
    ValueDist db = noisy_value_dist(model, spec, ones_b);
    return prob_ge(da, db, t);
}

} // namespace nelab
