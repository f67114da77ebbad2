#include "nesyv/idx.hpp"

#include <cmath>
#include <fstream>

namespace nesyv {

namespace {

constexpr std::uint32_t kImageMagic = 0x00000803;
constexpr std::uint32_t kLabelMagic = 0x00000801;

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t at, const char* what) {
    if (at + 4 > bytes.size())
        throw ParseError(std::string("idx: truncated while reading ") + what, at);
    return (std::uint32_t{bytes[at]} << 24) | (std::uint32_t{bytes[at + 1]} << 16) |
           (std::uint32_t{bytes[at + 2]} << 8) | std::uint32_t{bytes[at + 3]};
}

void push_be32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    out.push_back(static_cast<std::uint8_t>(v >> 24));
    out.push_back(static_cast<std::uint8_t>(v >> 16));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
    out.push_back(static_cast<std::uint8_t>(v));
}

std::vector<std::uint8_t> read_binary_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("no such file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

} // namespace

std::vector<Tensor> parse_idx_images(std::span<const std::uint8_t> bytes) {
    if (read_be32(bytes, 0, "magic") != kImageMagic)
        throw ParseError("not an IDX image file (bad magic)", std::size_t{0});
    std::uint32_t count = read_be32(bytes, 4, "image count");
    std::uint32_t rows = read_be32(bytes, 8, "row count");
    std::uint32_t cols = read_be32(bytes, 12, "column count");
    std::size_t need = 16 + static_cast<std::size_t>(count) * rows * cols;
    if (bytes.size() < need)
        throw ParseError("idx: truncated image payload (need " + std::to_string(need) + " bytes, have " +
                             std::to_string(bytes.size()) + ")",
                         bytes.size());

    std::vector<Tensor> images;
    images.reserve(count);
    std::size_t at = 16;
    for (std::uint32_t i = 0; i < count; ++i) {
        Tensor t({static_cast<int>(rows), static_cast<int>(cols)});
        for (std::size_t p = 0; p < t.data.size(); ++p)
            t.data[p] = static_cast<double>(bytes[at + p]) / 255.0;
        at += t.data.size();
        images.push_back(std::move(t));
    }
    return images;
}

std::vector<int> parse_idx_labels(std::span<const std::uint8_t> bytes) {
    if (read_be32(bytes, 0, "magic") != kLabelMagic)
        throw ParseError("not an IDX label file (bad magic)", std::size_t{0});
    std::uint32_t count = read_be32(bytes, 4, "label count");
    if (bytes.size() < 8 + count)
        throw ParseError("idx: truncated label payload", bytes.size());
    std::vector<int> labels;
    labels.reserve(count);
    for (std::uint32_t i = 0; i < count; ++i)
        labels.push_back(static_cast<int>(bytes[8 + i]));
    return labels;
}

std::vector<Tensor> read_idx_images(const std::string& path) {
    return parse_idx_images(read_binary_file(path));
}

std::vector<int> read_idx_labels(const std::string& path) {
    return parse_idx_labels(read_binary_file(path));
}

Dataset read_idx_dataset(const std::string& images_path, const std::string& labels_path) {
    Dataset d;
    d.inputs = read_idx_images(images_path);
    d.labels = read_idx_labels(labels_path);
    if (d.inputs.size() != d.labels.size())
        throw Error("idx: image count " + std::to_string(d.inputs.size()) + " != label count " +
                    std::to_string(d.labels.size()));
    return d;
}

std::vector<std::uint8_t> encode_idx_images(std::span<const Tensor> images) {
    if (images.empty())
        throw Error("idx: nothing to write");
    const std::vector<int>& shape = images[0].shape;
    if (shape.size() != 2)
        throw Error("idx: images must be rank-2");
    std::vector<std::uint8_t> out;
    push_be32(out, kImageMagic);
    push_be32(out, static_cast<std::uint32_t>(images.size()));
    push_be32(out, static_cast<std::uint32_t>(shape[0]));
    push_be32(out, static_cast<std::uint32_t>(shape[1]));
    for (const Tensor& t : images) {
        if (t.shape != shape)
            throw Error("idx: mixed image shapes");
        for (double v : t.data) {
            double q = std::round(std::min(1.0, std::max(0.0, v)) * 255.0);
            out.push_back(static_cast<std::uint8_t>(q));
        }
    }
    return out;
}

std::vector<std::uint8_t> encode_idx_labels(std::span<const int> labels) {
    std::vector<std::uint8_t> out;
    push_be32(out, kLabelMagic);
    push_be32(out, static_cast<std::uint32_t>(labels.size()));
    for (int l : labels) {
        if (l < 0 || l > 255)
            throw Error("idx: label out of byte range");
        out.push_back(static_cast<std::uint8_t>(l));
    }
    return out;
}

namespace {
void write_binary_file(const std::string& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw Error("write failed: " + path);
}
} // namespace

void write_idx_images(const std::string& path, std::span<const Tensor> images) {
    write_binary_file(path, encode_idx_images(images));
}

void write_idx_labels(const std::string& path, std::span<const int> labels) {
    write_binary_file(path, encode_idx_labels(labels));
}

} // namespace nesyv
