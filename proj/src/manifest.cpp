#include "nesyv/manifest.hpp"

#include <filesystem>

#include "nesyv/net_io.hpp"
#include "nesyv/text.hpp"

namespace nesyv {

SystemManifest parse_manifest(std::string_view text) {
    SystemManifest m;
    bool saw_header = false, saw_mode = false, saw_circuit = false;

    std::size_t pos = 0;
    std::size_t line_no = 0;
    while (pos <= text.size()) {
        std::size_t eol = text.find('\n', pos);
        if (eol == std::string_view::npos)
            eol = text.size();
        std::string_view line = text.substr(pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string_view::npos || line[first] == '#') {
            if (pos > text.size())
                break;
            continue;
        }

        Tokenizer tok(line, "manifest line " + std::to_string(line_no));
        std::string_view key = tok.next("directive");
        if (!saw_header) {
            if (key != "nesy-manifest")
                throw ParseError("manifest: missing 'nesy-manifest <version>' header");
            if (tok.next_int("format version") != 1)
                throw ParseError("manifest: unsupported format version");
            saw_header = true;
        } else if (key == "domain") {
            m.domain_lo = tok.next_double("domain lo");
            m.domain_hi = tok.next_double("domain hi");
        } else if (key == "circuit") {
            m.circuit_path = std::string(tok.next("circuit path"));
            saw_circuit = true;
        } else if (key == "network") {
            std::int64_t id = tok.next_int("network id");
            if (id != static_cast<std::int64_t>(m.networks.size()))
                throw ParseError("manifest: network ids must be dense and in order (line " +
                                 std::to_string(line_no) + ")");
            tok.expect("input");
            int slot = static_cast<int>(tok.next_int("input slot"));
            tok.expect("weights");
            m.networks.emplace_back(slot, std::string(tok.next("weights path")));
        } else if (key == "bind") {
            LeafBinding::Entry e;
            e.network = static_cast<int>(tok.next_int("network id"));
            e.output = static_cast<int>(tok.next_int("output index"));
            e.leaf = static_cast<int>(tok.next_int("leaf index"));
            m.binding.entries.push_back(e);
        } else if (key == "const") {
            int leaf = static_cast<int>(tok.next_int("leaf index"));
            double value = tok.next_double("leaf value");
            m.binding.constants.emplace_back(leaf, value);
        } else if (key == "mode") {
            std::string_view mode = tok.next("mode");
            if (mode == "argmax") {
                m.mode = QueryMode::Argmax;
            } else if (mode == "threshold") {
                m.mode = QueryMode::Threshold;
                m.mode_output = static_cast<int>(tok.next_int("output index"));
                m.mode_threshold = tok.next_double("threshold");
            } else {
                throw ParseError("manifest: unknown mode '" + std::string(mode) + "' (line " +
                                 std::to_string(line_no) + ")");
            }
            saw_mode = true;
        } else {
            throw ParseError("manifest: unknown directive '" + std::string(key) + "' (line " +
                             std::to_string(line_no) + ")");
        }
        if (!tok.done())
            throw ParseError("manifest: trailing tokens on line " + std::to_string(line_no));
        if (pos > text.size())
            break;
    }

    if (!saw_header)
        throw ParseError("manifest: empty input");
    if (!saw_circuit)
        throw ParseError("manifest: missing 'circuit' entry");
    if (!saw_mode)
        throw ParseError("manifest: missing 'mode' entry");
    return m;
}

std::string serialize_manifest(const SystemManifest& m) {
    std::string out = "nesy-manifest 1\n";
    out += "domain " + format_double(m.domain_lo) + " " + format_double(m.domain_hi) + "\n";
    out += "circuit " + m.circuit_path + "\n";
    for (std::size_t i = 0; i < m.networks.size(); ++i)
        out += "network " + std::to_string(i) + " input " + std::to_string(m.networks[i].first) +
               " weights " + m.networks[i].second + "\n";
    for (const LeafBinding::Entry& e : m.binding.entries)
        out += "bind " + std::to_string(e.network) + " " + std::to_string(e.output) + " " +
               std::to_string(e.leaf) + "\n";
    for (const auto& [leaf, value] : m.binding.constants)
        out += "const " + std::to_string(leaf) + " " + format_double(value) + "\n";
    if (m.mode == QueryMode::Argmax)
        out += "mode argmax\n";
    else
        out += "mode threshold " + std::to_string(m.mode_output) + " " +
               format_double(m.mode_threshold) + "\n";
    return out;
}

SystemManifest read_manifest(const std::string& path) {
    return parse_manifest(read_text_file(path));
}

void write_manifest(const SystemManifest& m, const std::string& path) {
    write_text_file(path, serialize_manifest(m));
}

NeSySystem load_system(const std::string& manifest_path, QuerySpec* query) {
    SystemManifest m = read_manifest(manifest_path);
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    auto resolve = [&](const std::string& p) {
        std::filesystem::path fp(p);
        return fp.is_absolute() ? fp.string() : (base / fp).string();
    };

    NeSySystem sys;
    sys.domain_lo = m.domain_lo;
    sys.domain_hi = m.domain_hi;
    sys.circuit = read_circuit(read_text_file(resolve(m.circuit_path)));
    int max_slot = -1;
    for (const auto& [slot, weights_path] : m.networks) {
        sys.networks.push_back(load_network(resolve(weights_path)));
        sys.network_input.push_back(slot);
        max_slot = std::max(max_slot, slot);
    }
    sys.num_inputs = max_slot + 1;
    sys.binding = m.binding;
    sys.validate();

    if (query) {
        query->mode = m.mode;
        query->output = m.mode_output;
        query->threshold = m.mode_threshold;
    }
    return sys;
}

} // namespace nesyv
