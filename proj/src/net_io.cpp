#include "nesyv/net_io.hpp"

#include <fstream>
#include <sstream>

#include "nesyv/text.hpp"

namespace nesyv {

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw Error("no such file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file(const std::string& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw Error("cannot open for writing: " + path);
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out)
        throw Error("write failed: " + path);
}

namespace {

void emit_array(std::string& out, const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        out += i % 8 == 0 ? "\n" : " ";
        out += format_double(v[i]);
    }
    out += "\n";
}

std::vector<double> read_array(Tokenizer& tok, std::size_t count, const char* what) {
    std::vector<double> v;
    v.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        v.push_back(tok.next_double(what));
    return v;
}

} // namespace

std::string serialize_network(const Network& net) {
    net.validate();
    std::string out = "nesy-net 1\n";
    out += "input " + std::to_string(net.input_shape.size());
    for (int d : net.input_shape)
        out += " " + std::to_string(d);
    out += "\nlayers " + std::to_string(net.layers.size()) + "\n";
    for (const Layer& layer : net.layers) {
        if (const auto* d = std::get_if<DenseLayer>(&layer)) {
            out += "dense " + std::to_string(d->out) + " " + std::to_string(d->in);
            emit_array(out, d->weight);
            emit_array(out, d->bias);
        } else if (const auto* c = std::get_if<Conv2dLayer>(&layer)) {
            out += "conv2d " + std::to_string(c->out_c) + " " + std::to_string(c->in_c) + " " +
                   std::to_string(c->kh) + " " + std::to_string(c->kw) + " " +
                   std::to_string(c->stride) + " " + std::to_string(c->pad);
            emit_array(out, c->weight);
            emit_array(out, c->bias);
        } else if (const auto* p = std::get_if<MaxPool2dLayer>(&layer)) {
            out += "maxpool2d " + std::to_string(p->kh) + " " + std::to_string(p->kw) + " " +
                   std::to_string(p->stride) + "\n";
        } else {
            out += std::string(layer_name(layer)) + "\n";
        }
    }
    return out;
}

Network parse_network(std::string_view text) {
    Tokenizer tok(text, "weights");
    tok.expect("nesy-net");
    std::int64_t version = tok.next_int("format version");
    if (version != 1)
        throw ParseError("weights: unsupported format version " + std::to_string(version));

    Network net;
    tok.expect("input");
    std::int64_t rank = tok.next_int("input rank");
    if (rank < 1 || rank > 4)
        throw ParseError("weights: input rank must be 1..4", tok.offset());
    for (std::int64_t i = 0; i < rank; ++i) {
        std::int64_t d = tok.next_int("input dimension");
        if (d <= 0)
            throw ParseError("weights: input dimensions must be positive", tok.offset());
        net.input_shape.push_back(static_cast<int>(d));
    }

    tok.expect("layers");
    std::int64_t layer_count = tok.next_int("layer count");
    if (layer_count < 0)
        throw ParseError("weights: negative layer count", tok.offset());

    for (std::int64_t li = 0; li < layer_count; ++li) {
        std::string_view kind = tok.next("layer kind");
        if (kind == "dense") {
            DenseLayer d;
            d.out = static_cast<int>(tok.next_int("dense out"));
            d.in = static_cast<int>(tok.next_int("dense in"));
            if (d.out <= 0 || d.in <= 0)
                throw ParseError("weights: bad dense dimensions", tok.offset());
            d.weight = read_array(tok, static_cast<std::size_t>(d.out) * static_cast<std::size_t>(d.in),
                                  "dense weight");
            d.bias = read_array(tok, static_cast<std::size_t>(d.out), "dense bias");
            net.layers.push_back(std::move(d));
        } else if (kind == "conv2d") {
            Conv2dLayer c;
            c.out_c = static_cast<int>(tok.next_int("conv out channels"));
            c.in_c = static_cast<int>(tok.next_int("conv in channels"));
            c.kh = static_cast<int>(tok.next_int("conv kernel height"));
            c.kw = static_cast<int>(tok.next_int("conv kernel width"));
            c.stride = static_cast<int>(tok.next_int("conv stride"));
            c.pad = static_cast<int>(tok.next_int("conv padding"));
            if (c.out_c <= 0 || c.in_c <= 0 || c.kh <= 0 || c.kw <= 0 || c.stride <= 0 || c.pad < 0)
                throw ParseError("weights: bad conv2d parameters", tok.offset());
            c.weight = read_array(tok,
                                  static_cast<std::size_t>(c.out_c) * static_cast<std::size_t>(c.in_c) *
                                      static_cast<std::size_t>(c.kh) * static_cast<std::size_t>(c.kw),
                                  "conv weight");
            c.bias = read_array(tok, static_cast<std::size_t>(c.out_c), "conv bias");
            net.layers.push_back(std::move(c));
        } else if (kind == "maxpool2d") {
            MaxPool2dLayer p;
            p.kh = static_cast<int>(tok.next_int("pool kernel height"));
            p.kw = static_cast<int>(tok.next_int("pool kernel width"));
            p.stride = static_cast<int>(tok.next_int("pool stride"));
            net.layers.push_back(p);
        } else if (kind == "relu") {
            net.layers.push_back(ReluLayer{});
        } else if (kind == "sigmoid") {
            net.layers.push_back(SigmoidLayer{});
        } else if (kind == "softmax") {
            net.layers.push_back(SoftmaxLayer{});
        } else if (kind == "flatten") {
            net.layers.push_back(FlattenLayer{});
        } else {
            throw ParseError("weights: unknown layer kind '" + std::string(kind) + "'", tok.offset());
        }
    }
    if (!tok.done())
        throw ParseError("weights: trailing tokens", tok.offset());

    net.validate(); // shape chain + terminal activation rule
    return net;
}

void save_network(const Network& net, const std::string& path) {
    write_text_file(path, serialize_network(net));
}

Network load_network(const std::string& path) { return parse_network(read_text_file(path)); }

} // namespace nesyv
