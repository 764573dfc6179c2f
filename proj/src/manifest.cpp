#include "flowcast/manifest.hpp"

#include <cstdio>

#include <openssl/evp.h>

#include "flowcast/errors.hpp"

namespace flowcast {

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1)
        throw NumericError("sha256 digest failed");
    std::string hex;
    hex.reserve(2 * len);
    char buf[3];
    for (unsigned int i = 0; i < len; ++i) {
        std::snprintf(buf, sizeof(buf), "%02x", md[i]);
        hex += buf;
    }
    return hex;
}

std::string sha256_file(const std::string& path) { return sha256_hex(read_file(path)); }

RunManifest::RunManifest(const std::string& command, const json& config_snapshot,
                         uint64_t root_seed) {
    j_["command"] = command;
    j_["config"] = config_snapshot;
    j_["seeds"] = json::object();
    j_["seeds"]["root"] = root_seed;
    j_["inputs"] = json::object();
    j_["outputs"] = json::object();
    j_["notes"] = json::object();
    j_["wall_time_s"] = 0.0;
}

void RunManifest::add_seed(const std::string& name, uint64_t value) {
    j_["seeds"][name] = value;
}

void RunManifest::add_input(const std::string& name, const std::string& path) {
    j_["inputs"][name] = {{"path", path}, {"sha256", sha256_file(path)}};
}

void RunManifest::add_output(const std::string& name, const std::string& path) {
    j_["outputs"][name] = {{"path", path}, {"sha256", sha256_file(path)}};
}

void RunManifest::add_note(const std::string& key, const json& value) {
    j_["notes"][key] = value;
}

void RunManifest::set_wall_time(double seconds) { j_["wall_time_s"] = seconds; }

void RunManifest::write(const std::string& path) const {
    write_file(path, j_.dump(2) + "\n");
}

} // namespace flowcast
