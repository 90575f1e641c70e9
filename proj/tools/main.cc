#include "cli.h"

int main(int argc, char** argv) { return kesm::cli::run(argc, argv); }
