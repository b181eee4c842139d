#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stf {

struct CliConfig {
    std::string catalog_dir;
    std::string cache_dir;
    double tolerance = 1e-9;
    std::string format = "text";  // text | structured
    int jobs = 1;
    std::uint64_t seed = 20240601;
};

// exit codes: 0 success, 1 computation failure, 2 input error
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);
int run(int argc, char** argv);

}  // namespace stf
