#include <string>
#include <vector>

#include "ficaug/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return ficaug::run_cli(args);
}
