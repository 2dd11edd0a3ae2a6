#include "hdq/cli.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return hdq::cli::run(argc, argv, std::cout, std::cerr);
}
