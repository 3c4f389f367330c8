#include "rqkd/experiment.hpp"

int main(int argc, char** argv) { return rqkd::cli_main(argc, argv); }
