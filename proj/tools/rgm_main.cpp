#include "rgm/cli.hpp"

int main(int argc, char** argv) { return rgm::cli::run(argc, argv); }
