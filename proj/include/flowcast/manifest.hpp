#pragma once

#include <cstdint>
#include <string>

#include "flowcast/io.hpp"

namespace flowcast {

std::string sha256_hex(const std::string& bytes);
std::string sha256_file(const std::string& path);

// Provenance record written next to every artifact-producing command's
// outputs: the command, the config it ran under, resolved seeds, paths with
// content hashes, and wall time. Timings live only here, so the primary
// outputs stay byte-reproducible.
class RunManifest {
public:
    RunManifest(const std::string& command, const json& config_snapshot, uint64_t root_seed);

    void add_seed(const std::string& name, uint64_t value);
    void add_input(const std::string& name, const std::string& path);
    void add_output(const std::string& name, const std::string& path); // hashed now
    void add_note(const std::string& key, const json& value);
    void set_wall_time(double seconds);

    json to_json() const { return j_; }
    void write(const std::string& path) const;

private:
    json j_;
};

} // namespace flowcast
