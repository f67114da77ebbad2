// Command-line front door: compile formulas to arithmetic circuits, verify
// NeSy systems over epsilon-balls, run the addition scaling bench, check the
// E-MAJSAT <-> E-WMC reduction, and train the bundled digit classifier.
//
// Exit codes: 0 success, 1 property-check failure, 2 usage/input error.

#include <filesystem>
#include <iostream>

#include <CLI11.hpp>

#include "nesyv/compile.hpp"
#include "nesyv/experiments.hpp"
#include "nesyv/idx.hpp"
#include "nesyv/manifest.hpp"
#include "nesyv/net_io.hpp"
#include "nesyv/oracles.hpp"
#include "nesyv/report.hpp"
#include "nesyv/text.hpp"

namespace fs = std::filesystem;
using namespace nesyv;

namespace {

std::string eps_tag(double eps) {
    std::string s = format_double(eps);
    for (char& c : s)
        if (c == '+')
            c = 'p';
    return s;
}

int cmd_compile(const std::string& formula_path, const std::string& out_path,
                const std::string& order_csv, bool dimacs) {
    std::string text = read_text_file(formula_path);
    VariablePool pool;
    FormulaPtr f = dimacs ? parse_dimacs(text, pool) : parse_formula(text, pool);

    std::vector<VarId> order;
    if (order_csv.empty()) {
        order = first_appearance_order(f);
    } else {
        std::size_t pos = 0;
        while (pos <= order_csv.size()) {
            std::size_t comma = order_csv.find(',', pos);
            if (comma == std::string::npos)
                comma = order_csv.size();
            std::string name = order_csv.substr(pos, comma - pos);
            if (!name.empty()) {
                auto v = pool.find(name);
                if (!v)
                    throw Error("--order names unknown variable '" + name + "'");
                order.push_back(*v);
            }
            pos = comma + 1;
        }
    }

    DnnfManager m;
    std::uint32_t root = m.compile(f, order);
    std::uint32_t smooth_root = m.smooth(root);
    Circuit circuit = to_arith_circuit(m, smooth_root, pool.size());
    write_text_file(out_path, write_circuit(circuit));

    std::cout << "variables: " << pool.size() << "\n";
    std::cout << "circuit nodes: " << circuit.num_nodes() << " (leaves: " << circuit.leaf_count()
              << ", outputs: " << circuit.outputs().size() << ")\n";

    if (pool.size() <= 20) {
        std::vector<double> half(static_cast<std::size_t>(pool.size()), 0.5);
        double brute = wmc_brute(f, half);
        double via_circuit = circuit.eval(half)[0];
        std::cout << "WMC(0.5-weights) = " << format_double(via_circuit) << "\n";
        if (std::abs(brute - via_circuit) > 1e-9) {
            std::cerr << "error: circuit disagrees with enumeration (" << format_double(brute)
                      << ")\n";
            return 1;
        }
        if (via_circuit == 0.0)
            std::cout << "warning: formula is unsatisfiable (circuit evaluates to 0)\n";
    }
    std::cout << "wrote " << out_path << "\n";
    return 0;
}

int cmd_verify(const std::string& manifest_path, const std::string& images_path,
               const std::string& labels_path, std::vector<double> eps_list, bool exact_symbolic,
               int threads, int limit, const std::string& out_dir) {
    QuerySpec query;
    NeSySystem sys = load_system(manifest_path, &query);

    Dataset pool = read_idx_dataset(images_path, labels_path);
    if (pool.size() == 0)
        throw Error("empty dataset");
    std::vector<DatasetSample> samples =
        make_addition_samples(pool, sys.num_inputs, limit > 0 ? limit : static_cast<int>(pool.size()));
    if (samples.empty())
        throw Error("dataset provides no complete sample group of " +
                    std::to_string(sys.num_inputs) + " images");

    if (!out_dir.empty())
        fs::create_directories(out_dir);

    std::sort(eps_list.begin(), eps_list.end());
    std::cout << "samples: " << samples.size() << "  mode: "
              << (query.mode == QueryMode::Argmax ? "argmax" : "threshold") << "\n";
    for (double eps : eps_list) {
        QuerySpec q = query;
        q.eps = eps;
        VerificationReport relaxed = verify_dataset(sys, samples, q, SymbolicMethod::Relaxed, threads);
        VerificationReport exact;
        if (exact_symbolic)
            exact = verify_dataset(sys, samples, q, SymbolicMethod::ExactVertex, threads);

        std::cout << report_summary_row(eps, relaxed) << "\n";
        if (!out_dir.empty()) {
            std::string base = out_dir + "/report_eps" + eps_tag(eps);
            write_text_file(base + ".csv", report_csv(relaxed, exact_symbolic ? &exact : nullptr));
            write_text_file(base + ".json", report_json(relaxed, q, "relaxed"));
            if (exact_symbolic)
                write_text_file(base + "_exact.json", report_json(exact, q, "exact"));
        }
    }
    return 0;
}

int cmd_bench(const BenchConfig& cfg, const std::string& out_path) {
    BenchResult result = run_addition_bench(cfg);
    std::string csv = bench_csv(result);
    if (!out_path.empty()) {
        write_text_file(out_path, csv);
        std::cout << "classifier accuracy: " << result.classifier_accuracy << "\n";
        std::cout << "wrote " << out_path << "\n";
    } else {
        std::cout << csv;
    }
    return 0;
}

int cmd_emajsat_check(int count, int max_n, int max_m, std::uint64_t seed, bool exhaustive2) {
    ReductionCheck check = check_reduction_random(count, max_n, max_m, seed);
    std::cout << check.agreed << "/" << check.total << " agree (random instances)\n";
    if (exhaustive2) {
        ReductionCheck ex = check_reduction_exhaustive2();
        std::cout << ex.agreed << "/" << ex.total << " agree (exhaustive 2-variable sweep)\n";
        check.total += ex.total;
        check.agreed += ex.agreed;
        for (const auto& d : ex.mismatches)
            check.mismatches.push_back(d);
    }
    for (const std::string& d : check.mismatches)
        std::cerr << "mismatch: " << d << "\n";
    return check.all_agree() ? 0 : 1;
}

int cmd_train(const std::string& out_path, int classes, int side, int hidden, double lr, int epochs,
              int batch, int train_per_class, int test_per_class, double noise, std::uint64_t seed,
              const std::string& images_path, const std::string& labels_path,
              const std::string& emit_dir, int digits) {
    Rng rng(seed);
    Dataset train_set, test_set;
    DigitFixture fx;
    if (!images_path.empty()) {
        if (labels_path.empty())
            throw Error("--images requires --labels");
        Dataset all = read_idx_dataset(images_path, labels_path);
        if (all.size() < 10)
            throw Error("dataset too small");
        // 80/20 split, file order.
        std::size_t cut = all.size() * 4 / 5;
        for (std::size_t i = 0; i < all.size(); ++i) {
            Dataset& dst = i < cut ? train_set : test_set;
            dst.inputs.push_back(std::move(all.inputs[i]));
            dst.labels.push_back(all.labels[i]);
        }
        side = train_set.inputs[0].shape[0];
    } else {
        fx = make_digit_fixture(classes, side, train_per_class, test_per_class, noise, rng.fork());
        train_set = fx.train;
        test_set = fx.test;
    }

    std::vector<int> hidden_sizes{hidden};
    TrainConfig tc{lr, epochs, batch, rng.fork()};
    Network net = train_dense(
        make_dense_classifier(train_set.inputs[0].shape, hidden_sizes, classes, tc.seed), train_set,
        tc);
    save_network(net, out_path);
    double acc = accuracy(net, test_set);
    std::cout << "test accuracy: " << acc << "\n";
    std::cout << "wrote " << out_path << "\n";

    if (!emit_dir.empty()) {
        fs::create_directories(emit_dir);
        if (!fx.test.inputs.empty()) {
            write_idx_images(emit_dir + "/test-images.idx", fx.test.inputs);
            write_idx_labels(emit_dir + "/test-labels.idx", fx.test.labels);
        } else {
            write_idx_images(emit_dir + "/test-images.idx", test_set.inputs);
            write_idx_labels(emit_dir + "/test-labels.idx", test_set.labels);
        }
        Circuit circuit = build_sum_circuit(digits, classes);
        write_text_file(emit_dir + "/sum.ac", write_circuit(circuit));

        SystemManifest manifest;
        manifest.circuit_path = "sum.ac";
        std::error_code ec;
        fs::path rel = fs::relative(fs::absolute(out_path), fs::absolute(emit_dir), ec);
        manifest.networks.assign(static_cast<std::size_t>(digits),
                                 {0, ec ? fs::absolute(out_path).string() : rel.string()});
        for (int d = 0; d < digits; ++d) {
            manifest.networks[static_cast<std::size_t>(d)].first = d;
            for (int c = 0; c < classes; ++c)
                manifest.binding.entries.push_back({d, c, d * classes + c});
        }
        manifest.mode = QueryMode::Argmax;
        write_manifest(manifest, emit_dir + "/system.nsy");
        std::cout << "wrote " << emit_dir << "/{system.nsy, sum.ac, test-images.idx, test-labels.idx}\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Robustness verifier for probabilistic neuro-symbolic systems"};
    app.require_subcommand(1);

    // compile
    std::string formula_path, compile_out, order_csv;
    bool dimacs = false;
    CLI::App* compile = app.add_subcommand("compile", "Compile a formula into an arithmetic circuit");
    compile->add_option("formula", formula_path, "formula file (expression syntax)")->required();
    compile->add_option("--out", compile_out, "output circuit file")->required();
    compile->add_option("--order", order_csv, "comma-separated variable order");
    compile->add_flag("--dimacs", dimacs, "input is DIMACS CNF");

    // verify
    std::string manifest_path, images_path, labels_path, verify_out;
    std::vector<double> eps_list{1e-3};
    bool exact_symbolic = false;
    int threads = 1, limit = 0;
    CLI::App* verify = app.add_subcommand("verify", "Verify a system over a dataset");
    verify->add_option("--manifest", manifest_path, "system manifest")->required();
    verify->add_option("--images", images_path, "IDX image file")->required();
    verify->add_option("--labels", labels_path, "IDX label file")->required();
    verify->add_option("--eps", eps_list, "perturbation sizes")->delimiter(',');
    verify->add_flag("--exact-symbolic", exact_symbolic, "also run exact vertex-enumeration bounds");
    verify->add_option("--threads", threads, "worker threads");
    verify->add_option("--limit", limit, "max samples (0 = all)");
    verify->add_option("--out", verify_out, "report output directory");

    // bench-addition
    BenchConfig bench_cfg;
    std::string bench_out;
    std::string bench_weights;
    CLI::App* bench = app.add_subcommand("bench-addition", "Scaling bench on multi-digit addition");
    bench->add_option("--digits", bench_cfg.digits, "digit counts")->delimiter(',');
    bench->add_option("--eps", bench_cfg.eps, "perturbation sizes")->delimiter(',');
    bench->add_option("--classes", bench_cfg.classes, "digit classes");
    bench->add_option("--samples", bench_cfg.samples_per_cell, "samples per cell");
    bench->add_option("--timeout-s", bench_cfg.timeout_s, "per-cell time budget (exact method)");
    bench->add_option("--seed", bench_cfg.seed, "random seed");
    bench->add_option("--weights", bench_weights, "reuse trained classifier weights");
    bench->add_option("--out", bench_out, "CSV output path");

    // emajsat-check
    int ec_count = 200, ec_max_n = 4, ec_max_m = 6;
    std::uint64_t ec_seed = 0;
    bool exhaustive2 = false;
    CLI::App* emajsat = app.add_subcommand("emajsat-check", "Check the E-MAJSAT <-> E-WMC reduction");
    emajsat->add_option("--count", ec_count, "random instances");
    emajsat->add_option("--max-n", ec_max_n, "max existential variables");
    emajsat->add_option("--max-m", ec_max_m, "max counting variables");
    emajsat->add_option("--seed", ec_seed, "random seed");
    emajsat->add_flag("--exhaustive2", exhaustive2, "also sweep all 16 two-variable functions");

    // train
    std::string train_out, train_images, train_labels, emit_dir;
    int classes = 4, side = 12, hidden = 48, epochs = 30, batch = 16;
    int train_per_class = 200, test_per_class = 60, digits = 2;
    double lr = 0.15, noise = 0.2;
    std::uint64_t train_seed = 0;
    CLI::App* train = app.add_subcommand("train", "Train the dense digit classifier");
    train->add_option("--out", train_out, "weights output path")->required();
    train->add_option("--classes", classes, "digit classes");
    train->add_option("--side", side, "image side length");
    train->add_option("--hidden", hidden, "hidden layer width");
    train->add_option("--lr", lr, "learning rate");
    train->add_option("--epochs", epochs, "training epochs");
    train->add_option("--batch", batch, "batch size");
    train->add_option("--train-per-class", train_per_class, "fixture training samples per class");
    train->add_option("--test-per-class", test_per_class, "fixture test samples per class");
    train->add_option("--noise", noise, "fixture pixel noise");
    train->add_option("--seed", train_seed, "random seed");
    train->add_option("--images", train_images, "train on an IDX image file instead of the fixture");
    train->add_option("--labels", train_labels, "IDX labels for --images");
    train->add_option("--emit-dir", emit_dir, "also write a ready-to-verify system + fixture here");
    train->add_option("--digits", digits, "digit count for the emitted system");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (compile->parsed())
            return cmd_compile(formula_path, compile_out, order_csv, dimacs);
        if (verify->parsed())
            return cmd_verify(manifest_path, images_path, labels_path, eps_list, exact_symbolic,
                              threads, limit, verify_out);
        if (bench->parsed()) {
            if (!bench_weights.empty())
                bench_cfg.weights_path = bench_weights;
            return cmd_bench(bench_cfg, bench_out);
        }
        if (emajsat->parsed())
            return cmd_emajsat_check(ec_count, ec_max_n, ec_max_m, ec_seed, exhaustive2);
        if (train->parsed())
            return cmd_train(train_out, classes, side, hidden, lr, epochs, batch, train_per_class,
                             test_per_class, noise, train_seed, train_images, train_labels, emit_dir,
                             digits);
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << "\n";
        return 2;
    }
    return 2;
}
