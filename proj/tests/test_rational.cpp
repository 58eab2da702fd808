#include <catch2/catch_amalgamated.hpp>

#include "stablepart/rational.hpp"

using stablepart::BigInt;
using stablepart::BigRational;

TEST_CASE("rational arithmetic and normalization") {
    const BigRational a(1, 3);
    const BigRational b(1, 6);
    CHECK((a + b).str() == "1/2");
    CHECK((a - b).str() == "1/6");
    CHECK((a * b).str() == "1/18");
    CHECK((a / b).str() == "2");
    CHECK((-a).str() == "-1/3");
    CHECK(BigRational(4, 6).str() == "2/3");
    CHECK(BigRational(-4, 6).str() == "-2/3");
    CHECK(BigRational(0, 5).is_zero());
    CHECK(BigRational(6, 3).is_integer());
    CHECK_THROWS_AS(BigRational(1, 0), std::invalid_argument);
}

TEST_CASE("rational parse and round trip") {
    CHECK(BigRational::parse("233/648").str() == "233/648");
    CHECK(BigRational::parse("-7").str() == "-7");
    CHECK(BigRational::parse("10/4").str() == "5/2");
    CHECK_THROWS_AS(BigRational::parse("a/b"), std::invalid_argument);
    CHECK(BigRational(233, 648).to_double() == Catch::Approx(0.359567901234568));
}

TEST_CASE("rational comparisons") {
    CHECK(BigRational(1, 3) < BigRational(1, 2));
    CHECK(BigRational(2, 4) == BigRational(1, 2));
    CHECK(BigRational(-1, 2) < BigRational(0));
    CHECK(BigRational(5) > BigRational(4));
}

TEST_CASE("rational from double is exact") {
    CHECK(BigRational::from_double(0.5).str() == "1/2");
    CHECK(BigRational::from_double(0.1) ==
          BigRational(BigInt("3602879701896397"), BigInt("36028797018963968")));
    CHECK(BigRational::from_double(-3.0).str() == "-3");
    CHECK(BigRational::from_double(1e-300).to_double() == 1e-300);
    CHECK_THROWS_AS(BigRational::from_double(1.0 / 0.0), std::invalid_argument);
}

TEST_CASE("rational integer powers") {
    using stablepart::pow;
    CHECK(pow(BigRational(2, 3), 3).str() == "8/27");
    CHECK(pow(BigRational(2), -2).str() == "1/4");
    CHECK(pow(BigRational(5, 7), 0).str() == "1");
}

TEST_CASE("factorial binomial double factorial") {
    using stablepart::binomial;
    using stablepart::double_factorial;
    using stablepart::factorial;
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
    CHECK(binomial(8, 3) == 56);
    CHECK(binomial(3, 8) == 0);
    CHECK(double_factorial(-1) == 1);
    CHECK(double_factorial(0) == 1);
    CHECK(double_factorial(7) == 105);
    CHECK(double_factorial(8) == 384);
    CHECK(double_factorial(15) == 2027025);
}
