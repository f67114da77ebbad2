#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nesyv/compile.hpp"
#include "nesyv/rng.hpp"
#include "nesyv/system.hpp"
#include "nesyv/train.hpp"

namespace nesyv {

// Synthetic glyph classification data: one seeded template per class plus
// per-pixel noise, pre-shuffled. Stands in for MNIST so runs never need
// downloads.
struct DigitFixture {
    Dataset train;
    Dataset test;
    int classes = 0;
    int side = 0;
};

DigitFixture make_digit_fixture(int classes, int side, int train_per_class, int test_per_class,
                                double noise, std::uint64_t seed);

// D copies of the digit classifier, each reading its own input slot,
// feeding the probability-of-sum circuit. Leaf d*classes+c = P(digit d = c).
NeSySystem build_addition_system(const Network& digit_net, int digits, int classes);

// Groups consecutive images into digit tuples labelled by their sum.
std::vector<DatasetSample> make_addition_samples(const Dataset& pool, int digits, int max_samples);

// ---------------------------------------------------------------------------
// E-MAJSAT <-> E-WMC reduction checking

FormulaPtr random_formula(Rng& rng, std::span<const VarId> vars, int max_depth);

struct ReductionCheck {
    int total = 0;
    int agreed = 0;
    std::vector<std::string> mismatches;
    bool all_agree() const { return agreed == total; }
};

// For each instance, decides E-MAJSAT by enumeration and E-WMC on the
// compiled circuit under the T*=1/2, I* = (x:[0,1], y:[1/2,1/2])
// construction, and records agreement.
ReductionCheck check_reduction_random(int count, int max_n, int max_m, std::uint64_t seed);

// All 16 Boolean functions of one existential and one counting variable.
ReductionCheck check_reduction_exhaustive2();

// ---------------------------------------------------------------------------
// Addition scaling bench

struct BenchCell {
    int digits = 0;
    double eps = 0;
    std::string method; // "relaxed" | "exact"
    int total = 0;
    int completed = 0;
    double mean_runtime_s = 0;
    double robustness = 0; // over completed samples
    bool timed_out = false;
    bool guard_exceeded = false;
};

struct BenchConfig {
    std::vector<int> digits{2, 3, 4, 5};
    std::vector<double> eps{1e-4, 1e-3, 1e-2};
    int classes = 4;
    int side = 12;
    int hidden = 48;
    int train_per_class = 200;
    int test_per_class = 60;
    double noise = 0.2;
    TrainConfig train{0.15, 30, 16, 0};
    int samples_per_cell = 4;
    int relaxed_repeats = 16; // timing stability for sub-millisecond cells
    double timeout_s = 60.0;  // per cell, exact method
    std::uint64_t seed = 0;
    std::optional<std::string> weights_path; // reuse a trained classifier
};

struct BenchResult {
    std::vector<BenchCell> cells;
    double classifier_accuracy = 0;
};

BenchResult run_addition_bench(const BenchConfig& cfg);

// CSV rows: digits,eps,method,completed,total,mean_runtime_s,robustness,note
std::string bench_csv(const BenchResult& result, bool include_runtimes = true);

} // namespace nesyv
