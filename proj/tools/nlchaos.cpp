#include <string>
#include <vector>

#include "neurochaos/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return nl::cli::run(args);
}
