#include "nelab/lab.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "nelab/numerics.hpp"

namespace nelab {

void validate(const ExperimentConfig& cfg) {
    validate(cfg.spec);
    validate(cfg.algo);
    validate(cfg.model);
    if (cfg.runs_per_point < 1)
        throw ArgumentError("ExperimentConfig: runs_per_point must be >= 1");
    if (cfg.budget < 1)
        throw ArgumentError("ExperimentConfig: budget must be >= 1");
    if (cfg.initial_mode == InitialMode::Fixed) {
        if (static_cast<int>(cfg.fixed_initial.size()) != cfg.spec.n)
            throw ArgumentError("ExperimentConfig: fixed initial length does not match n");
        for (char c : cfg.fixed_initial)
            if (c != '0' && c != '1')
                throw ArgumentError("ExperimentConfig: fixed initial must be a bit string");
    }
    if (cfg.initial_mode == InitialMode::Sweep && cfg.spec.n > 25)
        throw ArgumentError("ExperimentConfig: per-solution sweep is limited to n <= 25");
}

bool ErtReport::lower_bound() const {
    for (const auto& r : rows)
        if (r.censored > 0)
            return true;
    return false;
}

namespace {

struct PointStats {
    CompensatedSum<double> sum;
    CompensatedSum<double> sumsq;
    std::uint64_t successes = 0;
    std::uint64_t censored = 0;
    std::uint64_t runs = 0;

    void add(const RunRecord& rec) {
        double v = static_cast<double>(rec.evaluations_paper);
        sum.add(v);
        sumsq.add(v * v);
        successes += rec.success ? 1 : 0;
        censored += rec.success ? 0 : 1;
        ++runs;
    }

    ErtRow row(std::int64_t label) const {
        ErtRow r;
        r.initial_label = label;
        r.runs = runs;
        r.censored = censored;
        double n = static_cast<double>(runs);
        r.mean_evaluations_paper = sum.value() / n;
        double var = 0.0;
        if (runs > 1) {
            var = (sumsq.value() - n * r.mean_evaluations_paper * r.mean_evaluations_paper) /
                  (n - 1.0);
            var = std::max(var, 0.0);
        }
        r.std_error = std::sqrt(var / n);
        r.success_rate = static_cast<double>(successes) / n;
        return r;
    }
};

} // namespace

ErtReport ert_sweep(const ExperimentConfig& cfg) {
    validate(cfg);
    std::vector<std::int64_t> labels;
    if (cfg.initial_mode == InitialMode::Sweep) {
        labels.resize(std::size_t{1} << cfg.spec.n);
        for (std::size_t i = 0; i < labels.size(); ++i)
            labels[i] = static_cast<std::int64_t>(i);
        if (labels.size() * cfg.runs_per_point > (std::uint64_t{1} << 20))
            std::cerr << "ert_sweep: warning: " << labels.size() * cfg.runs_per_point
                      << " total runs requested\n";
    } else if (cfg.initial_mode == InitialMode::Fixed) {
        labels.push_back(
            static_cast<std::int64_t>(BitString::from_string(cfg.fixed_initial).label()));
    } else {
        labels.push_back(-1);
    }

    ErtReport report;
    for (std::size_t li = 0; li < labels.size(); ++li) {
        PointStats stats;
        for (std::uint64_t r = 0; r < cfg.runs_per_point; ++r) {
            std::uint64_t seed = derive_seed(cfg.master_seed, li, r);
            RunRecord rec;
            if (cfg.initial_mode == InitialMode::Uniform) {
                rec = run(cfg.algo, cfg.spec, cfg.model, cfg.budget, seed);
            } else {
                BitString init =
                    BitString::from_label(static_cast<std::uint64_t>(labels[li]), cfg.spec.n);
                rec = run_from(cfg.algo, cfg.spec, cfg.model, init, cfg.budget, seed);
            }
            stats.add(rec);
        }
        report.rows.push_back(stats.row(labels[li]));
    }
    return report;
}

GapReport gap_sweep(const ExperimentConfig& cfg_noisy, const ExperimentConfig& cfg_noiseless) {
    ExperimentConfig a = cfg_noisy;
    ExperimentConfig b = cfg_noiseless;
    a.model = b.model = NoiseModel::noiseless();
    // everything but the noise model must agree
    bool same = a.spec.family == b.spec.family && a.spec.n == b.spec.n && a.spec.m == b.spec.m &&
                a.algo.lambda == b.algo.lambda && a.algo.p == b.algo.p &&
                a.algo.rule.kind == b.algo.rule.kind && a.algo.rule.tau == b.algo.rule.tau &&
                a.algo.policy == b.algo.policy && a.runs_per_point == b.runs_per_point &&
                a.budget == b.budget && a.master_seed == b.master_seed &&
                a.initial_mode == b.initial_mode && a.fixed_initial == b.fixed_initial;
    if (!same)
        throw ArgumentError("gap_sweep: configs differ beyond the noise model");

    ErtReport noisy = ert_sweep(cfg_noisy);
    ErtReport noiseless = ert_sweep(cfg_noiseless);
    GapReport out;
    for (std::size_t i = 0; i < noisy.rows.size(); ++i) {
        const ErtRow& rn = noisy.rows[i];
        const ErtRow& r0 = noiseless.rows[i];
        GapRow g;
        g.initial_label = rn.initial_label;
        g.gap = (rn.mean_evaluations_paper - r0.mean_evaluations_paper) /
                r0.mean_evaluations_paper;
        double a1 = rn.std_error / r0.mean_evaluations_paper;
        double a2 = rn.mean_evaluations_paper * r0.std_error /
                    (r0.mean_evaluations_paper * r0.mean_evaluations_paper);
        g.std_error = std::sqrt(a1 * a1 + a2 * a2);
        g.lower_bound = rn.censored > 0 || r0.censored > 0;
        out.rows.push_back(g);
    }
    return out;
}

namespace {

NoiseModel model_for_level(NoiseKind family, double level) {
    switch (family) {
    case NoiseKind::Noiseless:
        return NoiseModel::noiseless();
    case NoiseKind::OneBit:
        return NoiseModel::one_bit(level);
    case NoiseKind::Additive:
        if (level < 0)
            throw ArgumentError("pnt_scan: additive level must be >= 0");
        return NoiseModel::additive(-level, level);
    case NoiseKind::Multiplicative:
        if (level < 1)
            throw ArgumentError("pnt_scan: multiplicative level must be >= 1");
        return NoiseModel::multiplicative(1.0 / level, level);
    }
    throw ArgumentError("pnt_scan: unknown noise family");
}

} // namespace

PntReport pnt_scan(const ProblemSpec& family, const AlgoConfig& algo, NoiseKind noise_family,
                   const std::vector<double>& levels, const std::vector<int>& sizes,
                   std::uint64_t runs, std::uint64_t budget, std::uint64_t seed) {
    validate(algo);
    if (levels.empty() || sizes.empty())
        throw ArgumentError("pnt_scan: levels and sizes must be non-empty");
    if (runs < 1 || budget < 1)
        throw ArgumentError("pnt_scan: runs and budget must be >= 1");
    PntReport report;
    std::size_t point = 0;
    for (int n : sizes) {
        ProblemSpec spec = family;
        spec.n = n;
        validate(spec);
        for (double level : levels) {
            NoiseModel model = model_for_level(noise_family, level);
            validate(model);
            PointStats stats;
            for (std::uint64_t r = 0; r < runs; ++r)
                stats.add(run(algo, spec, model, budget, derive_seed(seed, point, r)));
            ErtRow row = stats.row(-1);
            report.rows.push_back(
                {n, level, row.mean_evaluations_paper, row.success_rate, row.runs, row.censored});
            ++point;
        }
    }
    return report;
}

namespace {

CoverTimeResult cover_time_impl(int vertices, std::uint64_t walks, std::uint64_t seed,
                                int fixed_start) {
    if (vertices < 2)
        throw ArgumentError("cover_time_path: need at least 2 vertices");
    if (walks < 1)
        throw ArgumentError("cover_time_path: need at least 1 walk");
    if (fixed_start >= vertices)
        throw ArgumentError("cover_time_path: start vertex out of range");
    RandomSource rng(seed);
    CompensatedSum<double> sum, sumsq;
    std::vector<char> visited(vertices);
    for (std::uint64_t w = 0; w < walks; ++w) {
        std::fill(visited.begin(), visited.end(), 0);
        int pos = fixed_start >= 0
                      ? fixed_start
                      : static_cast<int>(rng.below(static_cast<std::uint64_t>(vertices)));
        visited[pos] = 1;
        int remaining = vertices - 1;
        std::uint64_t steps = 0;
        while (remaining > 0) {
            if (pos == 0)
                pos = 1;
            else if (pos == vertices - 1)
                pos = vertices - 2;
            else
                pos += rng.bernoulli(0.5) ? 1 : -1;
            ++steps;
            if (!visited[pos]) {
                visited[pos] = 1;
                --remaining;
            }
        }
        double s = static_cast<double>(steps);
        sum.add(s);
        sumsq.add(s * s);
    }
    CoverTimeResult res;
    res.vertices = vertices;
    res.walks = walks;
    double n = static_cast<double>(walks);
    res.mean_steps = sum.value() / n;
    double var = 0.0;
    if (walks > 1)
        var = std::max(0.0, (sumsq.value() - n * res.mean_steps * res.mean_steps) / (n - 1.0));
    res.std_error = std::sqrt(var / n);
    res.bound = 2.0 * (vertices - 1) * (vertices - 1);
    res.within_bound = res.mean_steps <= res.bound;
    return res;
}

} // namespace

CoverTimeResult cover_time_path(int vertices, std::uint64_t walks, std::uint64_t seed) {
    return cover_time_impl(vertices, walks, seed, -1);
}

CoverTimeResult cover_time_path_from(int vertices, std::uint64_t walks, std::uint64_t seed,
                                     int start) {
    if (start < 0)
        throw ArgumentError("cover_time_path: start vertex out of range");
    return cover_time_impl(vertices, walks, seed, start);
}

Lemma4Instance random_lemma4_instance(int m, RandomSource& rng) {
    if (m < 1)
        throw ArgumentError("random_lemma4_instance: m must be >= 1");
    Lemma4Instance inst;
    inst.e.resize(m);
    inst.q.resize(m);
    double e = rng.next_unit();
    for (int i = 0; i < m; ++i) {
        inst.e[i] = e;
        e += 0.01 + rng.next_unit(); // gap bounded away from 0, keeps E strictly increasing
    }
    double total = 0.0;
    for (int i = 0; i < m; ++i) {
        inst.q[i] = -std::log1p(-rng.next_unit()); // Exp(1); normalized = uniform on simplex
        total += inst.q[i];
    }
    if (total <= 0.0) {
        for (double& w : inst.q)
            w = 1.0 / m;
    } else {
        for (double& w : inst.q)
            w /= total;
    }
    inst.p = inst.q;
    if (m > 1) {
        std::uint64_t moves = rng.below(static_cast<std::uint64_t>(2 * m + 1));
        for (std::uint64_t k = 0; k < moves; ++k) {
            int i = static_cast<int>(rng.below(static_cast<std::uint64_t>(m - 1)));
            int j = i + 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(m - 1 - i)));
            double delta = rng.next_unit() * inst.p[i];
            inst.p[i] -= delta;
            inst.p[j] += delta;
        }
    }
    return inst;
}

Lemma4FuzzResult lemma4_fuzz(std::uint64_t instances, int max_m, std::uint64_t seed) {
    if (max_m < 1)
        throw ArgumentError("lemma4_fuzz: max_m must be >= 1");
    Lemma4FuzzResult result;
    RandomSource rng(derive_seed(seed, 0x4c34));
    for (std::uint64_t k = 0; k < instances; ++k) {
        int m = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_m)));
        Lemma4Instance inst = random_lemma4_instance(m, rng);
        ++result.instances;
        if (!lemma4_oracle(inst.p, inst.q, inst.e)) {
            ++result.violations;
            if (result.first_violation.empty()) {
                std::string s = "instance " + std::to_string(k) + " (m=" + std::to_string(m) +
                                "): P=[";
                for (int i = 0; i < m; ++i)
                    s += (i ? "," : "") + format_double(inst.p[i]);
                s += "] Q=[";
                for (int i = 0; i < m; ++i)
                    s += (i ? "," : "") + format_double(inst.q[i]);
                s += "] E=[";
                for (int i = 0; i < m; ++i)
                    s += (i ? "," : "") + format_double(inst.e[i]);
                s += "]";
                result.first_violation = s;
            }
        }
    }
    return result;
}

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::string format_u64(std::uint64_t v) { return std::to_string(v); }
std::string format_i64(std::int64_t v) { return std::to_string(v); }

} // namespace

CsvTable to_table(const ErtReport& report) {
    CsvTable t;
    t.header = {"initial", "mean_evals_paper", "std_error", "success_rate", "runs", "censored"};
    for (const auto& r : report.rows)
        t.rows.push_back({format_i64(r.initial_label), format_double(r.mean_evaluations_paper),
                          format_double(r.std_error), format_double(r.success_rate),
                          format_u64(r.runs), format_u64(r.censored)});
    return t;
}

CsvTable to_table(const GapReport& report) {
    CsvTable t;
    t.header = {"initial", "gap", "std_error", "lower_bound"};
    for (const auto& r : report.rows)
        t.rows.push_back({format_i64(r.initial_label), format_double(r.gap),
                          format_double(r.std_error), r.lower_bound ? "1" : "0"});
    return t;
}

CsvTable to_table(const PntReport& report) {
    CsvTable t;
    t.header = {"n", "level", "mean_evals_paper", "success_rate", "runs", "censored"};
    for (const auto& r : report.rows)
        t.rows.push_back({std::to_string(r.n), format_double(r.level),
                          format_double(r.mean_evaluations_paper), format_double(r.success_rate),
                          format_u64(r.runs), format_u64(r.censored)});
    return t;
}

CsvTable to_table(const CoverTimeResult& result) {
    CsvTable t;
    t.header = {"vertices", "walks", "mean_steps", "std_error", "bound", "within_bound"};
    t.rows.push_back({std::to_string(result.vertices), format_u64(result.walks),
                      format_double(result.mean_steps), format_double(result.std_error),
                      format_double(result.bound), result.within_bound ? "1" : "0"});
    return t;
}

CsvTable to_table(const EfhtVector& efht) {
    CsvTable t;
    t.header = {"state", "efht"};
    for (std::size_t i = 0; i < efht.states.size(); ++i)
        t.rows.push_back({efht.states[i].label(), format_double(efht.values[i])});
    return t;
}

void emit_csv(const CsvTable& table, const std::string& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("emit_csv: cannot open " + path);
    auto write_row = [&](const std::vector<std::string>& row) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i)
                out << ',';
            out << row[i];
        }
        out << '\n';
    };
    write_row(table.header);
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size())
            throw IoError("emit_csv: ragged row");
        write_row(row);
    }
    if (!out)
        throw IoError("emit_csv: write failed for " + path);
}

void emit_csv(const ErtReport& report, const std::string& path) { emit_csv(to_table(report), path); }
void emit_csv(const GapReport& report, const std::string& path) { emit_csv(to_table(report), path); }
void emit_csv(const PntReport& report, const std::string& path) { emit_csv(to_table(report), path); }
void emit_csv(const CoverTimeResult& result, const std::string& path) {
    emit_csv(to_table(result), path);
}
void emit_csv(const EfhtVector& efht, const std::string& path) { emit_csv(to_table(efht), path); }

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("read_csv: cannot open " + path);
    CsvTable t;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        std::vector<std::string> fields;
        std::string field;
        std::istringstream ls(line);
        while (std::getline(ls, field, ','))
            fields.push_back(field);
        if (line.empty() || line.back() == ',')
            fields.push_back("");
        if (first) {
            t.header = fields;
            first = false;
        } else {
            t.rows.push_back(fields);
        }
    }
    if (first)
        throw IoError("read_csv: empty file " + path);
    return t;
}

} // namespace nelab
