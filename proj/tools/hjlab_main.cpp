#include "hjlab/experiment.hpp"

int main(int argc, char** argv) { return hjlab::cli_main(argc, argv); }
