#pragma once

#include <stdexcept>
#include <string>

namespace senseforge {

// Fatal conditions (bad input files, referential integrity violations,
// I/O failures). The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Convenience for "<path>:<line>: <what>" messages.
inline Error file_error(const std::string& path, long long line, const std::string& what) {
    return Error(path + ":" + std::to_string(line) + ": " + what);
}

}  // namespace senseforge
