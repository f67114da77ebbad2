#pragma once

#include <string>
#include <string_view>

#include "nesyv/network.hpp"

namespace nesyv {

// Structured text weight file:
//   nesy-net 1
//   input <rank> <dims...>
//   layers <count>
//   dense <out> <in>      followed by out*in weights and out biases
//   conv2d <outC> <inC> <kh> <kw> <stride> <pad>   + weights and biases
//   maxpool2d <kh> <kw> <stride>
//   relu | sigmoid | softmax | flatten
// Floats round-trip exactly; parse errors report a byte offset.
std::string serialize_network(const Network& net);
Network parse_network(std::string_view text);

void save_network(const Network& net, const std::string& path);
Network load_network(const std::string& path);

// Whole-file helpers shared by the text formats.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, std::string_view content);

} // namespace nesyv
