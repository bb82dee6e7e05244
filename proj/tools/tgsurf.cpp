#include <iostream>
#include <string>
#include <vector>

#include "tgsurf/cli.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return tgsurf::cli::dispatch(args, std::cout, std::cerr);
}
