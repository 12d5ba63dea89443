#pragma once

// Run manifests for reproducibility: the full parameter set, tolerances and
// seed that produced an output file, plus a git-style blob hash of its bytes.
// Two runs with the same manifest fields (wall clock aside) produce
// byte-identical outputs.

#include <openssl/evp.h>

#include <chrono>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "nbde/version.hpp"

namespace nbdecli {

inline std::string sha1_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha1(), nullptr);
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * len);
    for (unsigned i = 0; i < len; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

// same value as `git hash-object` on the file
inline std::string git_blob_sha1(const std::string& content) {
    return sha1_hex("blob " + std::to_string(content.size()) + '\0' + content);
}

struct OutputRecord {
    std::string path;
    std::size_t bytes = 0;
    std::string sha1;
};

struct RunManifest {
    std::string command;
    nlohmann::json params;      // every flag value in effect
    nlohmann::json tolerances;  // solver configuration
    unsigned seed = 0;
    int jobs = 0;
    std::vector<OutputRecord> outputs;
    double wall_clock_sec = 0.0;  // informational; not part of the identity

    nlohmann::json to_json() const {
        nlohmann::json j;
        j["tool"] = "nbde";
        j["version"] = NBDE_VERSION_STRING;
        j["command"] = command;
        j["params"] = params;
        j["tolerances"] = tolerances;
        j["seed"] = seed;
        j["jobs"] = jobs;
        j["outputs"] = nlohmann::json::array();
        for (const auto& o : outputs) {
            j["outputs"].push_back({{"path", o.path}, {"bytes", o.bytes}, {"sha1", o.sha1}});
        }
        j["wall_clock_sec"] = wall_clock_sec;
        return j;
    }
};

inline OutputRecord write_output_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    os << content;
    os.close();
    return OutputRecord{path, content.size(), git_blob_sha1(content)};
}

}  // namespace nbdecli
