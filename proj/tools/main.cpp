#include "cli.hpp"

#include <exception>
#include <iostream>

int main(int argc, char** argv)
{
    try {
        return ofdma::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return ofdma::cli::kInternal;
    }
}
