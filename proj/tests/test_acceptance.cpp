// The twelve acceptance criteria, one test case and one output line each.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <iostream>

#include "keysub/battery.hpp"

using namespace keysub;

namespace {

void criterion(int id) {
  const auto result = run_criterion(id);
  std::cout << result.line() << "  (" << result.seconds << " s)" << std::endl;
  CHECK_MESSAGE(result.passed, result.detail);
  CHECK(result.seconds < 60.0);
}

}  // namespace

TEST_CASE("criterion 1") { criterion(1); }
TEST_CASE("criterion 2") { criterion(2); }
TEST_CASE("criterion 3") { criterion(3); }
TEST_CASE("criterion 4") { criterion(4); }
TEST_CASE("criterion 5") { criterion(5); }
TEST_CASE("criterion 6") { criterion(6); }
TEST_CASE("criterion 7") { criterion(7); }
TEST_CASE("criterion 8") { criterion(8); }
TEST_CASE("criterion 9") { criterion(9); }
TEST_CASE("criterion 10") { criterion(10); }
TEST_CASE("criterion 11") { criterion(11); }
TEST_CASE("criterion 12") { criterion(12); }
