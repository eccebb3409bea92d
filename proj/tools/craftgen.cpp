#include "craftgen/cli.hpp"

int main(int argc, char** argv) { return craftgen::cli::main_entry(argc, argv); }
