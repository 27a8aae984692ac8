#include "dcsplit/cli.hpp"

int main(int argc, char** argv) {
    return dcsplit::run_cli(std::vector<std::string>(argv + 1, argv + argc));
}
