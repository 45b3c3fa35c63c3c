#include "polybohr/cli.hpp"

int main(int argc, char** argv)
{
    return polybohr::cli::run(std::vector<std::string>(argv, argv + argc));
}
