#include <string>
#include <vector>

#include "chaocav/cli/run.hpp"

int main(int argc, char** argv) {
    return chaocav::cli::main_entry(std::vector<std::string>(argv, argv + argc));
}
