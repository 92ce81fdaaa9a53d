#include <string>
#include <vector>

#include "diracbands/cli.hpp"

int main(int argc, char** argv) {
    return diracbands::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
