#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nelab/chain.hpp"

namespace nelab {

enum class InitialMode { Uniform, Sweep, Fixed };

struct ExperimentConfig {
    ProblemSpec spec;
    AlgoConfig algo;
    NoiseModel model;
    std::uint64_t runs_per_point = 1000;
    std::uint64_t budget = 10000000; // actual evaluations per run
    std::uint64_t master_seed = 1;
    InitialMode initial_mode = InitialMode::Uniform;
    std::string fixed_initial; // bit string, Fixed mode only
};

void validate(const ExperimentConfig& cfg);

// One sweep point. Label is the integer encoding of the initial solution for
// the sweep/fixed modes and -1 for a uniformly random initial. A censored
// count > 0 marks the mean as a lower bound (budget-terminated runs are
// averaged at their censored cost, never as finite hitting times).
struct ErtRow {
    std::int64_t initial_label = -1;
    double mean_evaluations_paper = 0;
    double std_error = 0;
    double success_rate = 0;
    std::uint64_t runs = 0;
    std::uint64_t censored = 0;
};

struct ErtReport {
    std::vector<ErtRow> rows;
    bool lower_bound() const;
};

ErtReport ert_sweep(const ExperimentConfig& cfg);

struct GapRow {
    std::int64_t initial_label = -1;
    double gap = 0;
    double std_error = 0;
    bool lower_bound = false;
};

struct GapReport {
    std::vector<GapRow> rows;
};

// relative slowdown (noisy - noiseless) / noiseless per initial solution;
// the two configs must agree on everything except the noise model
GapReport gap_sweep(const ExperimentConfig& cfg_noisy, const ExperimentConfig& cfg_noiseless);

// Noise-level grid for tolerance scans. Levels are interpreted per family:
// one_bit level = pn, additive level a = U[-a, a], multiplicative level
// s >= 1 = U[1/s, s]; level 0 (or s = 1) degenerates to the noiseless model.
struct PntRow {
    int n = 0;
    double level = 0;
    double mean_evaluations_paper = 0;
    double success_rate = 0;
    std::uint64_t runs = 0;
    std::uint64_t censored = 0;
};

struct PntReport {
    std::vector<PntRow> rows;
};

PntReport pnt_scan(const ProblemSpec& family, const AlgoConfig& algo, NoiseKind noise_family,
                   const std::vector<double>& levels, const std::vector<int>& sizes,
                   std::uint64_t runs, std::uint64_t budget, std::uint64_t seed);

struct CoverTimeResult {
    int vertices = 0;
    std::uint64_t walks = 0;
    double mean_steps = 0;
    double std_error = 0;
    double bound = 0; // 2(|V|-1)^2
    bool within_bound = false;
};

// Simple random walk on the path graph 0..vertices-1 until every vertex has
// been visited; start is uniformly random (or fixed in the _from variant).
CoverTimeResult cover_time_path(int vertices, std::uint64_t walks, std::uint64_t seed);
CoverTimeResult cover_time_path_from(int vertices, std::uint64_t walks, std::uint64_t seed,
                                     int start);

// Random instances for the prefix-dominance expectation check. Q is a random
// point on the simplex, P is built from Q by moving probability mass towards
// higher indices, E is non-negative strictly increasing; every instance
// therefore satisfies the oracle's premises by construction.
struct Lemma4Instance {
    std::vector<double> p, q, e;
};

Lemma4Instance random_lemma4_instance(int m, RandomSource& rng);

struct Lemma4FuzzResult {
    std::uint64_t instances = 0;
    std::uint64_t violations = 0;
    std::string first_violation;
};

Lemma4FuzzResult lemma4_fuzz(std::uint64_t instances, int max_m, std::uint64_t seed);

// Deterministic CSV plumbing: fixed column order, fixed float formatting
// (%.17g, so doubles survive a round trip exactly), one row per data point.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
};

std::string format_double(double v);

CsvTable to_table(const ErtReport& report);
CsvTable to_table(const GapReport& report);
CsvTable to_table(const PntReport& report);
CsvTable to_table(const CoverTimeResult& result);
CsvTable to_table(const EfhtVector& efht);

void emit_csv(const CsvTable& table, const std::string& path);
void emit_csv(const ErtReport& report, const std::string& path);
void emit_csv(const GapReport& report, const std::string& path);
void emit_csv(const PntReport& report, const std::string& path);
void emit_csv(const CoverTimeResult& result, const std::string& path);
void emit_csv(const EfhtVector& efht, const std::string& path);

CsvTable read_csv(const std::string& path);

} // namespace nelab
