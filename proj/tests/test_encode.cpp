#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "flowcast/encode.hpp"
#include "flowcast/errors.hpp"
#include "flowcast/io.hpp"
#include "reference_impl.hpp"

using namespace flowcast;

namespace {

double l2(const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    REQUIRE(a.size() == b.size());
    double m = 0.0;
    for (size_t i = 0; i < a.size(); ++i) m = std::max(m, std::fabs(a[i] - b[i]));
    return m;
}

} // namespace

TEST_CASE("tokenizer lowercases and splits on non-alphanumeric runs") {
    CHECK(tokenize("Hello, World!") == std::vector<std::string>{"hello", "world"});
    CHECK(tokenize("a1--b2__c3") == std::vector<std::string>{"a1", "b2", "c3"});
    CHECK(tokenize("  ") == std::vector<std::string>{});
    CHECK(tokenize("") == std::vector<std::string>{});
    CHECK(tokenize("plan2nd") == std::vector<std::string>{"plan2nd"});
}

TEST_CASE("hashing encoder matches the independent recipe") {
    const std::string texts[] = {
        "write the code and test it",
        "Solve, verify; aggregate!",
        "limit7 code1st review2nd",
        "one",
    };
    for (int dim : {8, 64, 384})
        for (uint64_t seed : {0ULL, 12345ULL})
            for (const std::string& text : texts) {
                TextEncoder enc(EmbeddingConfig{dim, EmbedMode::hashing, seed, ""});
                CHECK(max_abs_diff(enc.encode_text(text),
                                   refimpl::encode_text(text, dim, seed)) == 0.0);
            }
}

TEST_CASE("encodings are unit length unless empty") {
    TextEncoder enc(EmbeddingConfig{64, EmbedMode::hashing, 7, ""});
    CHECK(l2(enc.encode_text("plan code review")) == doctest::Approx(1.0).epsilon(1e-12));
    // all punctuation -> zero vector, not NaN
    std::vector<double> z = enc.encode_text("!!! ???");
    CHECK(l2(z) == 0.0);
    for (double x : z) CHECK(std::isfinite(x));
}

TEST_CASE("same text same vector, case and punctuation insensitive") {
    TextEncoder enc(EmbeddingConfig{64, EmbedMode::hashing, 3, ""});
    CHECK(max_abs_diff(enc.encode_text("Plan the Code"),
                       enc.encode_text("plan,the;code")) == 0.0);
}

TEST_CASE("seed changes the embedding") {
    TextEncoder a(EmbeddingConfig{64, EmbedMode::hashing, 1, ""});
    TextEncoder b(EmbeddingConfig{64, EmbedMode::hashing, 2, ""});
    CHECK(max_abs_diff(a.encode_text("plan code"), b.encode_text("plan code")) > 0.0);
}

TEST_CASE("encode_nodes stacks prompt encodings row by row") {
    WorkflowGraph g;
    g.nodes = {{1, "plan first"}, {2, "code later"}};
    TextEncoder enc(EmbeddingConfig{32, EmbedMode::hashing, 0, ""});
    Matrix X = enc.encode_nodes(g);
    REQUIRE(X.rows == 2);
    REQUIRE(X.cols == 32);
    std::vector<double> r0(X.row(0), X.row(0) + 32);
    CHECK(max_abs_diff(r0, enc.encode_text("plan first")) == 0.0);
}

TEST_CASE("file mode looks up exact texts and reports misses") {
    std::string path =
        (std::filesystem::temp_directory_path() / "flowcast_embed_table.jsonl").string();
    write_file(path,
               "{\"text\": \"alpha\", \"vec\": [1.0, 0.0]}\n"
               "{\"text\": \"beta\", \"vec\": [0.0, 0.5]}\n");
    TextEncoder enc(EmbeddingConfig{2, EmbedMode::file, 0, path});
    CHECK(enc.encode_text("alpha") == std::vector<double>{1.0, 0.0});
    CHECK(enc.encode_text("beta") == std::vector<double>{0.0, 0.5});
    CHECK_THROWS_AS(enc.encode_text("gamma"), EmbeddingMissError);
    std::remove(path.c_str());
}

TEST_CASE("file mode validates dimensions and configuration") {
    std::string path =
        (std::filesystem::temp_directory_path() / "flowcast_embed_bad.jsonl").string();
    write_file(path, "{\"text\": \"alpha\", \"vec\": [1.0, 0.0, 0.0]}\n");
    CHECK_THROWS_AS(TextEncoder(EmbeddingConfig{2, EmbedMode::file, 0, path}), DataError);
    std::remove(path.c_str());
    // file mode without a path is a configuration error
    CHECK_THROWS_AS(TextEncoder(EmbeddingConfig{2, EmbedMode::file, 0, ""}), ConfigError);
}

TEST_CASE("dimension must be positive") {
    CHECK_THROWS_AS(EmbeddingConfig({0, EmbedMode::hashing, 0, ""}).check(), ConfigError);
    CHECK_THROWS_AS(EmbeddingConfig({-3, EmbedMode::hashing, 0, ""}).check(), ConfigError);
}
