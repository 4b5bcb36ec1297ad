#include <exception>
#include <iostream>

#include "commands.hpp"

int main(int argc, char** argv) {
    try {
        return hasa::cli::run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "hasa: internal error: " << e.what() << "\n";
        return hasa::cli::kSemanticError;
    }
}
