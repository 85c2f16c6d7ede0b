#include "advrec/cli.hpp"

int main(int argc, char** argv)
{
    return advrec::cli::run(argc, argv);
}
