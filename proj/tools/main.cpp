#include "epiclust/cli.hpp"

int main(int argc, char** argv) {
    return epiclust::run_cli(argc, argv);
}
