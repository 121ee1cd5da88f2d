#include <iostream>

#include "qdeconv/cli/commands.h"

int main(int argc, char **argv) {
    return qdeconv::cli::run_cli(argc, argv, std::cout, std::cerr);
}
