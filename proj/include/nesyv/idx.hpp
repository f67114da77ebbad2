#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "nesyv/train.hpp"

namespace nesyv {

// IDX readers (big-endian dims, magic 0x00000803 for images and
// 0x00000801 for labels). Pixels scale to [0,1] by /255.
std::vector<Tensor> parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<Tensor> read_idx_images(const std::string& path);
std::vector<int> read_idx_labels(const std::string& path);

// Loads both files and checks that the counts match.
Dataset read_idx_dataset(const std::string& images_path, const std::string& labels_path);

// Writers for fixture emission; pixels quantize to round(v*255).
std::vector<std::uint8_t> encode_idx_images(std::span<const Tensor> images);
std::vector<std::uint8_t> encode_idx_labels(std::span<const int> labels);
void write_idx_images(const std::string& path, std::span<const Tensor> images);
void write_idx_labels(const std::string& path, std::span<const int> labels);

} // namespace nesyv
