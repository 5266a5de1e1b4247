#include <catch2/catch_amalgamated.hpp>
#include "tfrs/tfrs.hpp"

TEST_CASE("placeholder", "[lbp]") { SUCCEED(); }
