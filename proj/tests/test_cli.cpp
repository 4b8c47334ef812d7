#include <catch_amalgamated.hpp>
TEST_CASE("placeholder cli") { CHECK(true); }
