#pragma once

#include <span>
#include <string>
#include <vector>

#include "nesyv/circuit.hpp"
#include "nesyv/network.hpp"

namespace nesyv {

// Wiring from network outputs into circuit leaves. Every circuit leaf is
// either bound to exactly one (network, output) pair or pinned to a constant.
struct LeafBinding {
    struct Entry {
        int network = 0;
        int output = 0;
        int leaf = 0;
    };
    std::vector<Entry> entries;
    std::vector<std::pair<int, double>> constants; // (leaf, value in [0,1])
};

// One or more networks feeding a compiled circuit. Networks may share an
// input tensor (two heads on one image) or own separate inputs; the
// epsilon ball is applied per input tensor.
struct NeSySystem {
    std::vector<Network> networks;
    std::vector<int> network_input; // input slot consumed by each network
    int num_inputs = 0;
    LeafBinding binding;
    Circuit circuit;
    double domain_lo = 0.0; // valid input range (pixel clamp)
    double domain_hi = 1.0;

    void validate() const;
};

enum class QueryMode { Argmax, Threshold };

struct QuerySpec {
    QueryMode mode = QueryMode::Argmax;
    double eps = 0.0;
    int output = 0;          // Threshold: which circuit output
    double threshold = 0.0;  // Threshold: required lower bound
};

enum class SampleStatus { Robust, Unknown, Failed };
const char* status_name(SampleStatus s);

enum class SymbolicMethod { Relaxed, ExactVertex };

struct SampleVerdict {
    SampleStatus status = SampleStatus::Unknown;
    std::vector<Interval> outputs; // unclamped circuit output bounds
    int target = 0;                // correct output index used for the verdict
    double lower_correct = 0.0;
    double upper_correct = 0.0;
    double runtime_s = 0.0;
    std::string error; // set when status == Failed
};

struct DatasetSample {
    std::vector<Tensor> inputs; // one tensor per system input slot
    int label = 0;              // Argmax: the correct circuit output index
};

struct VerificationReport {
    std::vector<SampleVerdict> samples;
    int robust_count = 0;
    double robustness = 0.0;     // robust / total
    double mean_lower = 0.0;     // of the correct output, over decided samples
    double mean_upper = 0.0;
    double mean_runtime_s = 0.0;
};

// Concrete end-to-end inference: forward all networks, scatter their
// outputs into the circuit leaves, evaluate the circuit.
std::vector<double> predict(const NeSySystem& sys, std::span<const Tensor> inputs);

// Epsilon-ball -> per-network IBP -> leaf bounds -> circuit bounds ->
// decision. Argmax certifies lower(target) > upper(j) for all j != target
// (strict); Threshold certifies lower(output) >= threshold (inclusive).
// IBP is sound but incomplete, so failure to certify yields Unknown.
// The ExactVertex method replaces interval circuit propagation with exact
// vertex enumeration; its intervals are subsets of the relaxed ones.
SampleVerdict verify_sample(const NeSySystem& sys, std::span<const Tensor> inputs, int target,
                            const QuerySpec& query, SymbolicMethod method = SymbolicMethod::Relaxed);

VerificationReport verify_dataset(const NeSySystem& sys, std::span<const DatasetSample> samples,
                                  const QuerySpec& query,
                                  SymbolicMethod method = SymbolicMethod::Relaxed, int threads = 1);

} // namespace nesyv
