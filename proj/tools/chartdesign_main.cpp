#include "chartdesign/cli.hpp"

int main(int argc, char** argv) {
  return chartdesign::cli::run(std::vector<std::string>(argv + 1, argv + argc));
}
