#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "flowcast/graph.hpp"
#include "flowcast/matrix.hpp"

namespace flowcast {

enum class EmbedMode { hashing, file };

struct EmbeddingConfig {
    int dim = 384;
    EmbedMode mode = EmbedMode::hashing;
    uint64_t seed = 0;
    std::string file_path; // required in file mode

    void check() const;
};

// Fixed-dimension text vectors.
//
// Hashing mode: lowercase, split on non-alphanumeric runs; each token t is
// hashed h = fnv1a64(t) ^ seed, accumulated into coordinate h % dim with
// sign +1 when the top bit of h is 0, else -1; the result is L2-normalized
// unless all-zero. Pure and platform-independent.
//
// File mode: exact-match lookup into a preloaded JSONL table
// {"text": ..., "vec": [...]}; a miss throws EmbeddingMissError.
class TextEncoder {
public:
    explicit TextEncoder(EmbeddingConfig cfg);

    const EmbeddingConfig& config() const { return cfg_; }

    std::vector<double> encode_text(const std::string& text) const;

    // Row i = encoding of the prompt of node i, in node order.
    Matrix encode_nodes(const WorkflowGraph& g) const;

private:
    EmbeddingConfig cfg_;
    std::unordered_map<std::string, std::vector<double>> table_;
};

// Lowercased alphanumeric token runs; shared with the executor's skill
// extraction so both read prompts the same way.
std::vector<std::string> tokenize(const std::string& text);

} // namespace flowcast
