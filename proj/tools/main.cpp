#include "sadrc/app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return sadrc::cli_main(argc, argv, std::cout, std::cerr);
}
