#include <string>
#include <vector>

#include "flowcast/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return flowcast::run_cli(args);
}
