#include <doctest.h>

TEST_SUITE_BEGIN("solver");
TEST_SUITE_END();
