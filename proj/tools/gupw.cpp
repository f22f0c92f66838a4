#include "gupw/cli.hpp"

int main(int argc, char** argv)
{
    return gupw::cli::run(argc, argv);
}
