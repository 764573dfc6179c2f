#include "flowcast/encode.hpp"

#include <cmath>

#include <json.hpp>

#include "flowcast/errors.hpp"
#include "flowcast/io.hpp"
#include "flowcast/rng.hpp"

namespace flowcast {

std::vector<std::string> tokenize(const std::string& text) {
    std::vector<std::string> tokens;
    std::string cur;
    for (unsigned char c : text) {
        if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
            cur += static_cast<char>(c);
        } else if (c >= 'A' && c <= 'Z') {
            cur += static_cast<char>(c - 'A' + 'a');
        } else if (!cur.empty()) {
            tokens.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (!cur.empty()) tokens.push_back(std::move(cur));
    return tokens;
}

void EmbeddingConfig::check() const {
    if (dim < 1) throw ConfigError("embedding dim must be >= 1");
    if (mode == EmbedMode::file && file_path.empty())
        throw ConfigError("file-mode embedding requires file_path");
}

TextEncoder::TextEncoder(EmbeddingConfig cfg) : cfg_(std::move(cfg)) {
    cfg_.check();
    if (cfg_.mode != EmbedMode::file) return;

    int line_no = 0;
    for (const std::string& line : read_lines(cfg_.file_path)) {
        ++line_no;
        if (line.empty()) continue;
        try {
            json j = json::parse(line);
            auto text = j.at("text").get<std::string>();
            auto vec = j.at("vec").get<std::vector<double>>();
            if (static_cast<int>(vec.size()) != cfg_.dim)
                throw FormatError(line_no, "vec length " + std::to_string(vec.size()) +
                                               " != dim " + std::to_string(cfg_.dim));
            if (!table_.emplace(std::move(text), std::move(vec)).second)
                throw FormatError(line_no, "duplicate embedding key");
        } catch (const json::exception& e) {
            throw FormatError(line_no, e.what());
        }
    }
}

std::vector<double> TextEncoder::encode_text(const std::string& text) const {
    if (cfg_.mode == EmbedMode::file) {
        auto it = table_.find(text);
        if (it == table_.end()) throw EmbeddingMissError(text);
        return it->second;
    }

    std::vector<double> v(cfg_.dim, 0.0);
    for (const std::string& tok : tokenize(text)) {
        uint64_t h = fnv1a64(tok) ^ cfg_.seed;
        size_t idx = h % static_cast<uint64_t>(cfg_.dim);
        v[idx] += (h >> 63) ? -1.0 : 1.0;
    }
    double norm = std::sqrt(dot(v.data(), v.data(), cfg_.dim));
    if (norm > 0.0)
        for (double& x : v) x /= norm;
    return v;
}

Matrix TextEncoder::encode_nodes(const WorkflowGraph& g) const {
    Matrix X(g.node_count(), cfg_.dim);
    for (int i = 0; i < g.node_count(); ++i) {
        std::vector<double> row = encode_text(g.nodes[i].prompt);
        std::copy(row.begin(), row.end(), X.row(i));
    }
    return X;
}

} // namespace flowcast
