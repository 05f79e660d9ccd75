#include <iostream>

#include "ghabuse/cli/app.hpp"

int main(int argc, char** argv) {
    std::ios::sync_with_stdio(false);
    return ghabuse::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
