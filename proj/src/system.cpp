#include "nesyv/system.hpp"

#include <atomic>
#include <chrono>
#include <thread>

namespace nesyv {

const char* status_name(SampleStatus s) {
    switch (s) {
    case SampleStatus::Robust:
        return "robust";
    case SampleStatus::Unknown:
        return "unknown";
    case SampleStatus::Failed:
        return "error";
    }
    return "?";
}

void NeSySystem::validate() const {
    if (domain_lo > domain_hi)
        throw Error("system: domain lo > hi");
    if (networks.size() != network_input.size())
        throw Error("system: network_input size mismatch");
    if (num_inputs < 0)
        throw Error("system: negative input count");
    for (std::size_t i = 0; i < networks.size(); ++i) {
        networks[i].validate();
        if (network_input[i] < 0 || network_input[i] >= num_inputs)
            throw Error("system: network " + std::to_string(i) + " references input slot " +
                        std::to_string(network_input[i]) + " of " + std::to_string(num_inputs));
    }
    circuit.require_valid();

    std::vector<int> owner(static_cast<std::size_t>(circuit.leaf_count()), -1);
    auto claim = [&](int leaf, const std::string& what) {
        if (leaf < 0 || leaf >= circuit.leaf_count())
            throw Error("binding: leaf " + std::to_string(leaf) + " out of range");
        if (owner[static_cast<std::size_t>(leaf)] != -1)
            throw Error("binding: leaf " + std::to_string(leaf) + " bound twice (" + what + ")");
        owner[static_cast<std::size_t>(leaf)] = 1;
    };
    for (const LeafBinding::Entry& e : binding.entries) {
        if (e.network < 0 || e.network >= static_cast<int>(networks.size()))
            throw Error("binding: entry references unknown network " + std::to_string(e.network));
        int out_size = networks[static_cast<std::size_t>(e.network)].output_size();
        if (e.output < 0 || e.output >= out_size)
            throw Error("binding: entry references output " + std::to_string(e.output) +
                        " of network with " + std::to_string(out_size) + " outputs");
        claim(e.leaf, "network output");
    }
    for (const auto& [leaf, value] : binding.constants) {
        if (!(value >= 0.0 && value <= 1.0))
            throw Error("binding: constant leaf value outside [0,1]");
        claim(leaf, "constant");
    }
    for (int leaf = 0; leaf < circuit.leaf_count(); ++leaf)
        if (owner[static_cast<std::size_t>(leaf)] == -1)
            throw Error("binding: leaf " + std::to_string(leaf) + " is unbound");
}

namespace {

void check_inputs(const NeSySystem& sys, std::span<const Tensor> inputs) {
    if (static_cast<int>(inputs.size()) != sys.num_inputs)
        throw Error("expected " + std::to_string(sys.num_inputs) + " input tensors, got " +
                    std::to_string(inputs.size()));
}

} // namespace

std::vector<double> predict(const NeSySystem& sys, std::span<const Tensor> inputs) {
    check_inputs(sys, inputs);
    std::vector<double> leaves(static_cast<std::size_t>(sys.circuit.leaf_count()), 0.0);
    for (const auto& [leaf, value] : sys.binding.constants)
        leaves[static_cast<std::size_t>(leaf)] = value;

    std::vector<Tensor> outputs;
    outputs.reserve(sys.networks.size());
    for (std::size_t i = 0; i < sys.networks.size(); ++i)
        outputs.push_back(
            forward(sys.networks[i], inputs[static_cast<std::size_t>(sys.network_input[i])]));
    for (const LeafBinding::Entry& e : sys.binding.entries)
        leaves[static_cast<std::size_t>(e.leaf)] =
            outputs[static_cast<std::size_t>(e.network)].data[static_cast<std::size_t>(e.output)];

    return sys.circuit.eval(leaves);
}

SampleVerdict verify_sample(const NeSySystem& sys, std::span<const Tensor> inputs, int target,
                            const QuerySpec& query, SymbolicMethod method) {
    check_inputs(sys, inputs);
    if (query.eps < 0)
        throw Error("verify: eps must be >= 0");

    SampleVerdict verdict;
    auto t0 = std::chrono::steady_clock::now();

    // Per-input epsilon balls, shared by the networks reading that slot.
    std::vector<BoundedTensor> balls;
    balls.reserve(inputs.size());
    for (const Tensor& x : inputs)
        balls.push_back(epsilon_ball(x, query.eps, sys.domain_lo, sys.domain_hi));

    std::vector<Interval> leaves(static_cast<std::size_t>(sys.circuit.leaf_count()),
                                 Interval::point(0.0));
    for (const auto& [leaf, value] : sys.binding.constants)
        leaves[static_cast<std::size_t>(leaf)] = Interval::point(value);

    std::vector<BoundedTensor> net_bounds;
    net_bounds.reserve(sys.networks.size());
    for (std::size_t i = 0; i < sys.networks.size(); ++i)
        net_bounds.push_back(forward_ibp(sys.networks[i],
                                         balls[static_cast<std::size_t>(sys.network_input[i])]));
    for (const LeafBinding::Entry& e : sys.binding.entries) {
        const BoundedTensor& b = net_bounds[static_cast<std::size_t>(e.network)];
        leaves[static_cast<std::size_t>(e.leaf)] =
            Interval(b.lower.data[static_cast<std::size_t>(e.output)],
                     b.upper.data[static_cast<std::size_t>(e.output)]);
    }

    verdict.outputs = method == SymbolicMethod::Relaxed ? sys.circuit.eval_interval(leaves)
                                                        : sys.circuit.vertex_bounds(leaves);

    int n_out = static_cast<int>(verdict.outputs.size());
    if (query.mode == QueryMode::Argmax) {
        if (target < 0 || target >= n_out)
            throw Error("verify: target output " + std::to_string(target) + " out of range");
        verdict.target = target;
        bool dominant = true;
        double lo = verdict.outputs[static_cast<std::size_t>(target)].lo();
        for (int j = 0; j < n_out && dominant; ++j)
            if (j != target && !(lo > verdict.outputs[static_cast<std::size_t>(j)].hi()))
                dominant = false;
        verdict.status = dominant ? SampleStatus::Robust : SampleStatus::Unknown;
    } else {
        if (query.output < 0 || query.output >= n_out)
            throw Error("verify: query output " + std::to_string(query.output) + " out of range");
        verdict.target = query.output;
        double lo = verdict.outputs[static_cast<std::size_t>(query.output)].lo();
        verdict.status = lo >= query.threshold ? SampleStatus::Robust : SampleStatus::Unknown;
    }
    verdict.lower_correct = verdict.outputs[static_cast<std::size_t>(verdict.target)].lo();
    verdict.upper_correct = verdict.outputs[static_cast<std::size_t>(verdict.target)].hi();

    verdict.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return verdict;
}

VerificationReport verify_dataset(const NeSySystem& sys, std::span<const DatasetSample> samples,
                                  const QuerySpec& query, SymbolicMethod method, int threads) {
    if (samples.empty())
        throw Error("verify: empty dataset");
    if (threads < 1)
        threads = 1;

    VerificationReport report;
    report.samples.resize(samples.size());

    auto work = [&](std::size_t i) {
        try {
            report.samples[i] =
                verify_sample(sys, samples[i].inputs, samples[i].label, query, method);
        } catch (const std::exception& ex) {
            SampleVerdict v;
            v.status = SampleStatus::Failed;
            v.error = ex.what();
            report.samples[i] = std::move(v);
        }
    };

    if (threads == 1 || samples.size() < 2) {
        for (std::size_t i = 0; i < samples.size(); ++i)
            work(i);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        int n_workers = std::min<int>(threads, static_cast<int>(samples.size()));
        pool.reserve(static_cast<std::size_t>(n_workers));
        for (int t = 0; t < n_workers; ++t)
            pool.emplace_back([&]() {
                for (std::size_t i = next.fetch_add(1); i < samples.size(); i = next.fetch_add(1))
                    work(i);
            });
        for (std::thread& t : pool)
            t.join();
    }

    std::size_t decided = 0;
    for (const SampleVerdict& v : report.samples) {
        if (v.status == SampleStatus::Failed)
            continue;
        ++decided;
        if (v.status == SampleStatus::Robust)
            ++report.robust_count;
        report.mean_lower += v.lower_correct;
        report.mean_upper += v.upper_correct;
        report.mean_runtime_s += v.runtime_s;
    }
    report.robustness = static_cast<double>(report.robust_count) / static_cast<double>(samples.size());
    if (decided > 0) {
        report.mean_lower /= static_cast<double>(decided);
        report.mean_upper /= static_cast<double>(decided);
        report.mean_runtime_s /= static_cast<double>(decided);
    }
    return report;
}

} // namespace nesyv
