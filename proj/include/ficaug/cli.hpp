#pragma once

#include <string>
#include <vector>

namespace ficaug {

// Runs the command-line pipeline (inspect / cluster / augment / validate /
// compare). Returns the process exit code: 0 success, 2 configuration or
// schema error, 3 runtime or numeric error.
int run_cli(const std::vector<std::string>& args);

// FNV-1a 64-bit digest of a file's bytes, as a hex string. Used by run
// manifests.
std::string file_digest(const std::string& path);

} // namespace ficaug
