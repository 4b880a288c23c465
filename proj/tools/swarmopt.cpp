#include <iostream>
#include <string>
#include <vector>

#include <swarmopt/cli.hpp>

int main(int argc, char** argv)
{
    std::vector<std::string> args(argv + 1, argv + argc);
    swarmopt::CliConfig cfg;
    try {
        cfg = swarmopt::parse_args(args);
    } catch (const swarmopt::CliExit& e) {
        (e.status() == 0 ? std::cout : std::cerr) << e.what() << '\n';
        return e.status();
    }
    return swarmopt::run_cli(cfg, std::cerr);
}
