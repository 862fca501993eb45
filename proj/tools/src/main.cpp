#include <sheafgauge_cli/cli.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    return sheafgauge::cli::run(argc, argv, std::cout, std::cerr);
}
