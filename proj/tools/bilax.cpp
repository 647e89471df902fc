#include "cli_app.hpp"

int main(int argc, char** argv) { return bilax::cli::run(argc, argv); }
