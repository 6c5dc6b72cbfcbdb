#include "tabml/cli.hpp"

int main(int argc, char** argv) { return tabml::run_cli(argc, argv); }
