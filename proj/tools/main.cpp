#include "hemi/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
    return hemi::run(argc, argv, std::cout, std::cerr);
}
