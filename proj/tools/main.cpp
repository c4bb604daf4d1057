#include "wmx/cli.hpp"

int main(int argc, char** argv) { return wmx::run_cli({argv + 1, argv + argc}); }
