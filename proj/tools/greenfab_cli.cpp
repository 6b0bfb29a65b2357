#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "greenfab/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    greenfab::cli::Context ctx{std::cout, std::cerr, std::nullopt};
    if (const char* env = std::getenv(greenfab::cli::kDatasetEnvVar)) ctx.default_dataset = env;
    return greenfab::cli::run(args, ctx);
}
