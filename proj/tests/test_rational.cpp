#include <bmwalg/rational.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using bmwalg::Rat;

TEST_CASE("construction and canonical form") {
    CHECK(Rat(2, 4) == Rat(1, 2));
    CHECK(Rat(-2, -4) == Rat(1, 2));
    CHECK(Rat(2, -4).str() == "-1/2");
    CHECK(Rat(0, 5).str() == "0");
    CHECK_THROWS_AS(Rat(1, 0), std::invalid_argument);
}

TEST_CASE("arithmetic") {
    Rat a(3, 4), b(5, 6);
    CHECK((a + b).str() == "19/12");
    CHECK((a - b).str() == "-1/12");
    CHECK((a * b).str() == "5/8");
    CHECK((a / b).str() == "9/10");
    CHECK((-a).str() == "-3/4");
    CHECK(a.inv() == Rat(4, 3));
    CHECK_THROWS_AS(Rat(0).inv(), std::domain_error);
    CHECK(Rat(2).pow(10) == Rat(1024));
    CHECK(Rat(2).pow(-2) == Rat(1, 4));
    CHECK(Rat(5, 7).pow(0) == Rat(1));
}

TEST_CASE("text format round-trips bit-exactly") {
    std::mt19937_64 rng(12345);
    for (int t = 0; t < 200; ++t) {
        long num = static_cast<long>(rng() % 2000001) - 1000000;
        long den = static_cast<long>(rng() % 999983) + 1;
        Rat r(num, den);
        CHECK(Rat::parse(r.str()) == r);
    }
    CHECK(Rat::parse("7/3") == Rat(7, 3));
    CHECK(Rat::parse("-12") == Rat(-12));
    CHECK_THROWS_AS(Rat::parse("1/0"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse(""), std::invalid_argument);
    CHECK_THROWS_AS(Rat::parse("1.5"), std::invalid_argument);
}
