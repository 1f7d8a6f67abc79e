#include "eegintent/cli/app.hpp"

int main(int argc, char** argv) { return eegintent::cli::cli_main(argc, argv); }
