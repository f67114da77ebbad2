#include "nesyv/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "nesyv/net_io.hpp"
#include "nesyv/oracles.hpp"
#include "nesyv/text.hpp"

namespace nesyv {

DigitFixture make_digit_fixture(int classes, int side, int train_per_class, int test_per_class,
                                double noise, std::uint64_t seed) {
    if (classes < 2 || classes > 255)
        throw Error("fixture: classes must be in [2,255]");
    if (side < 2 || train_per_class < 1 || test_per_class < 1)
        throw Error("fixture: bad dimensions");

    Rng rng(seed);
    int pixels = side * side;
    std::vector<std::vector<double>> templates(static_cast<std::size_t>(classes));
    for (auto& t : templates) {
        t.resize(static_cast<std::size_t>(pixels));
        for (double& v : t)
            v = rng.uniform();
    }

    auto sample = [&](int cls) {
        Tensor t({side, side});
        const auto& tmpl = templates[static_cast<std::size_t>(cls)];
        for (int p = 0; p < pixels; ++p) {
            double v = tmpl[static_cast<std::size_t>(p)] + rng.uniform(-noise, noise);
            t.data[static_cast<std::size_t>(p)] = std::min(1.0, std::max(0.0, v));
        }
        return t;
    };

    auto build = [&](int per_class) {
        Dataset d;
        for (int c = 0; c < classes; ++c)
            for (int i = 0; i < per_class; ++i) {
                d.inputs.push_back(sample(c));
                d.labels.push_back(c);
            }
        std::vector<int> idx(d.inputs.size());
        for (std::size_t i = 0; i < idx.size(); ++i)
            idx[i] = static_cast<int>(i);
        rng.shuffle(idx);
        Dataset shuffled;
        shuffled.inputs.reserve(d.inputs.size());
        shuffled.labels.reserve(d.labels.size());
        for (int i : idx) {
            shuffled.inputs.push_back(std::move(d.inputs[static_cast<std::size_t>(i)]));
            shuffled.labels.push_back(d.labels[static_cast<std::size_t>(i)]);
        }
        return shuffled;
    };

    DigitFixture fx;
    fx.classes = classes;
    fx.side = side;
    fx.train = build(train_per_class);
    fx.test = build(test_per_class);
    return fx;
}

NeSySystem build_addition_system(const Network& digit_net, int digits, int classes) {
    if (digit_net.output_size() != classes)
        throw Error("addition system: classifier has " + std::to_string(digit_net.output_size()) +
                    " outputs, expected " + std::to_string(classes));
    NeSySystem sys;
    sys.circuit = build_sum_circuit(digits, classes);
    sys.num_inputs = digits;
    for (int d = 0; d < digits; ++d) {
        sys.networks.push_back(digit_net);
        sys.network_input.push_back(d);
        for (int c = 0; c < classes; ++c)
            sys.binding.entries.push_back({d, c, d * classes + c});
    }
    sys.validate();
    return sys;
}

std::vector<DatasetSample> make_addition_samples(const Dataset& pool, int digits, int max_samples) {
    if (digits < 1)
        throw Error("addition samples: digits must be >= 1");
    std::vector<DatasetSample> samples;
    std::size_t groups = pool.size() / static_cast<std::size_t>(digits);
    for (std::size_t g = 0; g < groups && static_cast<int>(samples.size()) < max_samples; ++g) {
        DatasetSample s;
        int sum = 0;
        for (int d = 0; d < digits; ++d) {
            std::size_t i = g * static_cast<std::size_t>(digits) + static_cast<std::size_t>(d);
            s.inputs.push_back(pool.inputs[i]);
            sum += pool.labels[i];
        }
        s.label = sum;
        samples.push_back(std::move(s));
    }
    return samples;
}

// ---------------------------------------------------------------------------
// Reduction checking

FormulaPtr random_formula(Rng& rng, std::span<const VarId> vars, int max_depth) {
    if (vars.empty())
        return Formula::constant(rng.coin());
    if (max_depth <= 0) {
        FormulaPtr v = Formula::make_var(vars[static_cast<std::size_t>(rng.uniform_int(
            static_cast<int>(vars.size())))]);
        return rng.coin() ? v : Formula::negate(v);
    }
    switch (rng.uniform_int(6)) {
    case 0: {
        FormulaPtr v = Formula::make_var(vars[static_cast<std::size_t>(rng.uniform_int(
            static_cast<int>(vars.size())))]);
        return rng.coin() ? v : Formula::negate(v);
    }
    case 1:
        return Formula::negate(random_formula(rng, vars, max_depth - 1));
    case 2: {
        std::vector<FormulaPtr> kids;
        int n = 2 + rng.uniform_int(2);
        for (int i = 0; i < n; ++i)
            kids.push_back(random_formula(rng, vars, max_depth - 1));
        return Formula::conj(std::move(kids));
    }
    case 3: {
        std::vector<FormulaPtr> kids;
        int n = 2 + rng.uniform_int(2);
        for (int i = 0; i < n; ++i)
            kids.push_back(random_formula(rng, vars, max_depth - 1));
        return Formula::disj(std::move(kids));
    }
    case 4:
        return Formula::implies(random_formula(rng, vars, max_depth - 1),
                                random_formula(rng, vars, max_depth - 1));
    default:
        return Formula::iff(random_formula(rng, vars, max_depth - 1),
                            random_formula(rng, vars, max_depth - 1));
    }
}

namespace {

// Decides the instance on both sides of the reduction. Dyadic weights and
// threshold keep every float comparison exact for m <= 20.
bool reduction_agrees(const FormulaPtr& f, int n, int m, std::string* detail) {
    std::vector<VarId> xs, ys;
    for (int i = 0; i < n; ++i)
        xs.push_back(VarId{i});
    for (int i = 0; i < m; ++i)
        ys.push_back(VarId{n + i});

    bool majsat = emajsat_brute(f, n + m, xs, ys);

    Circuit circuit = compile_to_circuit(f, n + m);
    std::vector<Interval> box;
    for (int i = 0; i < n; ++i)
        box.push_back(Interval(0.0, 1.0));
    for (int i = 0; i < m; ++i)
        box.push_back(Interval::point(0.5));
    bool ewmc = e_wmc_decide(circuit, box, 0.5);

    if (majsat != ewmc && detail) {
        *detail = "n=" + std::to_string(n) + " m=" + std::to_string(m) +
                  " emajsat=" + (majsat ? "true" : "false") + " ewmc=" + (ewmc ? "true" : "false") +
                  " key=" + formula_key(f);
    }
    return majsat == ewmc;
}

} // namespace

ReductionCheck check_reduction_random(int count, int max_n, int max_m, std::uint64_t seed) {
    if (max_n < 1 || max_m < 1 || max_n + max_m > kEmajsatVarGuard)
        throw Error("reduction check: bad variable limits");
    Rng rng(seed);
    ReductionCheck result;
    for (int i = 0; i < count; ++i) {
        int n = 1 + rng.uniform_int(max_n);
        int m = 1 + rng.uniform_int(max_m);
        std::vector<VarId> vars;
        for (int v = 0; v < n + m; ++v)
            vars.push_back(VarId{v});
        FormulaPtr f = random_formula(rng, vars, 3);
        ++result.total;
        std::string detail;
        if (reduction_agrees(f, n, m, &detail))
            ++result.agreed;
        else
            result.mismatches.push_back(detail);
    }
    return result;
}

ReductionCheck check_reduction_exhaustive2() {
    ReductionCheck result;
    // Truth tables over (x,y): bit (2a+b) set means f(x=a,y=b) is true.
    for (int table = 0; table < 16; ++table) {
        std::vector<FormulaPtr> minterms;
        for (int a = 0; a < 2; ++a)
            for (int b = 0; b < 2; ++b) {
                if (!((table >> (2 * a + b)) & 1))
                    continue;
                FormulaPtr xa = Formula::make_var(VarId{0});
                if (!a)
                    xa = Formula::negate(std::move(xa));
                FormulaPtr yb = Formula::make_var(VarId{1});
                if (!b)
                    yb = Formula::negate(std::move(yb));
                minterms.push_back(Formula::conj({std::move(xa), std::move(yb)}));
            }
        FormulaPtr f = minterms.empty()     ? Formula::constant(false)
                       : minterms.size() == 1 ? minterms[0]
                                              : Formula::disj(std::move(minterms));
        ++result.total;
        std::string detail;
        if (reduction_agrees(f, 1, 1, &detail))
            ++result.agreed;
        else
            result.mismatches.push_back("table=" + std::to_string(table) + " " + detail);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Addition scaling bench

BenchResult run_addition_bench(const BenchConfig& cfg) {
    if (cfg.digits.empty() || cfg.eps.empty() || cfg.samples_per_cell < 1)
        throw Error("bench: empty grid");

    BenchResult result;
    Rng rng(cfg.seed);

    DigitFixture fx = make_digit_fixture(cfg.classes, cfg.side, cfg.train_per_class,
                                         cfg.test_per_class, cfg.noise, rng.fork());
    Network net;
    if (cfg.weights_path) {
        net = load_network(*cfg.weights_path);
    } else {
        TrainConfig tc = cfg.train;
        tc.seed = rng.fork();
        std::vector<int> hidden{cfg.hidden};
        net = train_dense(make_dense_classifier({cfg.side, cfg.side}, hidden, cfg.classes, tc.seed),
                          fx.train, tc);
    }
    result.classifier_accuracy = accuracy(net, fx.test);

    for (int digits : cfg.digits) {
        NeSySystem sys = build_addition_system(net, digits, cfg.classes);
        std::vector<DatasetSample> samples =
            make_addition_samples(fx.test, digits, cfg.samples_per_cell);
        for (double eps : cfg.eps) {
            QuerySpec query;
            query.mode = QueryMode::Argmax;
            query.eps = eps;

            for (SymbolicMethod method : {SymbolicMethod::Relaxed, SymbolicMethod::ExactVertex}) {
                BenchCell cell;
                cell.digits = digits;
                cell.eps = eps;
                cell.method = method == SymbolicMethod::Relaxed ? "relaxed" : "exact";
                cell.total = static_cast<int>(samples.size());

                int repeats = method == SymbolicMethod::Relaxed ? cfg.relaxed_repeats : 1;
                double elapsed_cell = 0;
                int robust = 0;
                double runtime_sum = 0;
                for (const DatasetSample& s : samples) {
                    if (elapsed_cell > cfg.timeout_s) {
                        cell.timed_out = true;
                        break;
                    }
                    try {
                        auto t0 = std::chrono::steady_clock::now();
                        SampleVerdict v;
                        for (int r = 0; r < repeats; ++r)
                            v = verify_sample(sys, s.inputs, s.label, query, method);
                        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                                  t0)
                                        .count();
                        elapsed_cell += dt;
                        runtime_sum += dt / repeats;
                        ++cell.completed;
                        if (v.status == SampleStatus::Robust)
                            ++robust;
                    } catch (const Error&) {
                        // vertex enumeration guard: record and stop this cell
                        cell.guard_exceeded = true;
                        break;
                    }
                }
                if (cell.completed > 0) {
                    cell.mean_runtime_s = runtime_sum / cell.completed;
                    cell.robustness = static_cast<double>(robust) / cell.completed;
                }
                result.cells.push_back(std::move(cell));
            }
        }
    }
    return result;
}

std::string bench_csv(const BenchResult& result, bool include_runtimes) {
    std::string out = include_runtimes
                          ? "digits,eps,method,completed,total,mean_runtime_s,robustness,note\n"
                          : "digits,eps,method,completed,total,robustness,note\n";
    for (const BenchCell& c : result.cells) {
        out += std::to_string(c.digits) + "," + format_double(c.eps) + "," + c.method + "," +
               std::to_string(c.completed) + "," + std::to_string(c.total);
        if (include_runtimes)
            out += "," + format_double(c.mean_runtime_s);
        out += "," + format_double(c.robustness);
        out += c.guard_exceeded ? ",guard-exceeded" : (c.timed_out ? ",timeout" : ",");
        out += "\n";
    }
    return out;
}

} // namespace nesyv
