#include <iostream>
#include <vector>

#include "qgraph/problem_io.hpp"

int main(int argc, char** argv) {
  return qgraph::cli::run(std::vector<std::string>(argv + 1, argv + argc), std::cout, std::cerr);
}
