#include <string>
#include <vector>

#include "rffhsi/cli.hpp"

int main(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return rffhsi::cli_dispatch(args);
}
