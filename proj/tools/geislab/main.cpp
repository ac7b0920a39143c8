#include "geislab/app.hpp"

int main(int argc, char** argv) { return geislab::main_entry(argc, argv); }
