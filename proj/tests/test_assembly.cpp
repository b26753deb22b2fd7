#include <doctest.h>

TEST_SUITE_BEGIN("assembly");
TEST_SUITE_END();
