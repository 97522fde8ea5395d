#include <iostream>

#include "silt/cli.hpp"

int main(int argc, char** argv)
{
    return silt::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
