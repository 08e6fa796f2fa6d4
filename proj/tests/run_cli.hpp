#pragma once

// Helpers for driving the built CLI from tests. The binary path comes from
// the TIERING_CLI environment variable set by CTest.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace testutil {

inline std::string cli_path() {
    const char* p = std::getenv("TIERING_CLI");
    if (!p) throw std::runtime_error("TIERING_CLI environment variable not set");
    return p;
}

inline std::string data_dir() {
    const char* p = std::getenv("TIERING_DATA");
    if (!p) throw std::runtime_error("TIERING_DATA environment variable not set");
    return p;
}

struct CliResult {
    int exit_code = -1;
    std::string stdout_text;
};

inline CliResult run_cli(const std::string& args) {
    static int counter = 0;
    auto out_path = std::filesystem::temp_directory_path() /
                    ("tiering_cli_out_" + std::to_string(counter++) + ".txt");
    std::string cmd = cli_path() + " " + args + " > " + out_path.string() + " 2>/dev/null";
    int status = std::system(cmd.c_str());

    CliResult result;
#ifdef _WIN32
    result.exit_code = status;
#else
    result.exit_code = WEXITSTATUS(status);
#endif
    std::ifstream in(out_path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    result.stdout_text = ss.str();
    std::filesystem::remove(out_path);
    return result;
}

}  // namespace testutil
