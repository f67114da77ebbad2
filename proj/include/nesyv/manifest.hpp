#pragma once

#include <string>
#include <string_view>

#include "nesyv/system.hpp"

namespace nesyv {

// System manifest: one line per declaration, versioned with a format tag.
//   nesy-manifest 1
//   domain <lo> <hi>
//   circuit <path>
//   network <id> input <slot> weights <path>
//   bind <network> <output> <leaf>
//   const <leaf> <value>
//   mode argmax | mode threshold <output> <T>
// Paths are resolved relative to the manifest's directory. '#' starts a
// comment line.
struct SystemManifest {
    double domain_lo = 0.0;
    double domain_hi = 1.0;
    std::string circuit_path;
    std::vector<std::pair<int, std::string>> networks; // (input slot, weights path)
    LeafBinding binding;
    QueryMode mode = QueryMode::Argmax;
    int mode_output = 0;
    double mode_threshold = 0.0;
};

SystemManifest parse_manifest(std::string_view text);
std::string serialize_manifest(const SystemManifest& m);

SystemManifest read_manifest(const std::string& path);
void write_manifest(const SystemManifest& m, const std::string& path);

// Reads the manifest plus the weight/circuit files it names and assembles
// a validated system. `query` (when non-null) receives the manifest mode.
NeSySystem load_system(const std::string& manifest_path, QuerySpec* query = nullptr);

} // namespace nesyv
