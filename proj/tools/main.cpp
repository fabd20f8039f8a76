#include "weakdep/report.hpp"

int main(int argc, char** argv) { return weakdep::run_cli(argc, argv); }
