#include "conekit/cli.hpp"

int main(int argc, char** argv) {
    return conekit::run_cli(argc, argv);
}
