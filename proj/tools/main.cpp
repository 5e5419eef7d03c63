#include "app.hpp"

int main(int argc, char** argv) { return amd::app::main(argc, argv); }
