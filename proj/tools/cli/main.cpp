#include <iostream>
#include <string>
#include <vector>

#include "app.hpp"

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    return welsh::cli::run(args, std::cout, std::cerr);
}
