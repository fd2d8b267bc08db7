#pragma once

// Checks the crypto primitives against the golden vector files under
// vectors/ (produced by tests/oracle/gen_vectors.py).

#include <cstddef>
#include <string>
#include <vector>

namespace lotkip::vectors {

struct FileReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t mismatches = 0;
    std::vector<std::string> first_failures;  // at most a handful, for diagnostics
    bool missing = false;

    bool passed() const { return !missing && cases > 0 && mismatches == 0; }
};

inline const std::vector<std::string> kVectorFiles{"michael_block.txt", "michael.txt", "crc32.txt",
                                                   "phase1.txt",        "phase2.txt",  "rc4.txt"};

/// Check one file. Unknown names and malformed lines throw std::runtime_error.
FileReport check_file(const std::string& dir, const std::string& name);

/// Check every file in kVectorFiles.
std::vector<FileReport> check_directory(const std::string& dir);

}  // namespace lotkip::vectors
