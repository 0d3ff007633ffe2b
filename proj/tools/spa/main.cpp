#include "app.hpp"

#include <iostream>

int main(int argc, char** argv)
{
  return spa::cli::run({argv + 1, argv + argc}, std::cout, std::cerr);
}
