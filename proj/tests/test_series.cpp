#include <bmwalg/useries.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace bmwalg;
using RS = USeries<Rat>;

namespace {

// Tail series (exponents <= 0): on these the -L truncation is an ideal, so
// ring laws hold exactly. Identities with polynomial parts are verified at a
// deepened working order by the callers instead.
RS randomSeries(std::mt19937_64& rng, int L) {
    RS s(L);
    for (int m = -L; m <= 0; ++m)
        if (rng() % 2)
            s.set(m, Rat(static_cast<long>(rng() % 19) - 9, static_cast<long>(rng() % 7) + 1));
    return s;
}

} // namespace

TEST_CASE("expand_inverse_linear basics") {
    // 1/(u - 0) = u^-1 exactly
    auto s = expandInverseLinear<Rat>(Rat(1), Rat(0), 4, Rat(1));
    CHECK(s.coeffs().size() == 1);
    CHECK(*s.coeff(-1) == Rat(1));

    // 1/(u - 1) to order 3
    auto g = expandInverseLinear<Rat>(Rat(1), Rat(1), 3, Rat(1));
    CHECK(*g.coeff(-1) == Rat(1));
    CHECK(*g.coeff(-2) == Rat(1));
    CHECK(*g.coeff(-3) == Rat(1));
    CHECK(!g.has(-4));

    CHECK_THROWS_AS(expandInverseLinear<Rat>(Rat(0), Rat(1), 3, Rat(1)), std::invalid_argument);
}

TEST_CASE("expand_inverse_linear: multiply back by (2u - c) gives 1 + O(u^-L)") {
    // Oracle for the alpha=2 example: (1/(2u-c)) * (2u-c) == 1 up to the tail.
    Rat c(3);
    int L = 3;
    auto s = expandInverseLinear<Rat>(Rat(2), c, L, Rat(1));
    CHECK(*s.coeff(-1) == Rat(1, 2));
    CHECK(*s.coeff(-2) == c * Rat(1, 4));
    CHECK(*s.coeff(-3) == c * c * Rat(1, 8));
    RS lin(L);
    lin.set(1, Rat(2));
    lin.set(0, -c);
    auto p = s * lin;
    // all orders >= -L+1 must match the constant series 1
    for (int m = -L + 1; m <= 1; ++m) {
        if (m == 0) CHECK(p.coeffOr(0, Rat(0)) == Rat(1));
        else CHECK(p.coeffOr(m, Rat(0)).isZero());
    }
}

TEST_CASE("series arithmetic examples") {
    int L = 4;
    RS a(L), b(L);
    a.set(0, Rat(1)); a.set(-1, Rat(1));   // 1 + u^-1
    b.set(0, Rat(1)); b.set(-1, Rat(-1));  // 1 - u^-1
    auto p = a * b;                        // 1 - u^-2
    CHECK(p.coeffOr(0, Rat(0)) == Rat(1));
    CHECK(p.coeffOr(-1, Rat(0)).isZero());
    CHECK(p.coeffOr(-2, Rat(0)) == Rat(-1));

    for (Rat eps : {Rat(1), Rat(-1)}) {
        RS x(L), y(L);
        x.set(1, eps); x.set(0, Rat(1, 2));
        y.set(1, -eps); y.set(0, Rat(1, 2));
        auto sum = x + y;
        CHECK(sum.coeffs().size() == 1);
        CHECK(*sum.coeff(0) == Rat(1));

        // (1/2 - eps u)(1/2 + eps u) = 1/4 - u^2 since eps^2 = 1
        RS u(2), v(2);
        u.set(0, Rat(1, 2)); u.set(1, -eps);
        v.set(0, Rat(1, 2)); v.set(1, eps);
        auto q = u * v;
        CHECK(q.coeffOr(0, Rat(0)) == Rat(1, 4));
        CHECK(q.coeffOr(2, Rat(0)) == Rat(-1));
        CHECK(q.coeffOr(1, Rat(0)).isZero());
    }
}

TEST_CASE("order mismatch is rejected") {
    RS a(3), b(4);
    a.set(0, Rat(1));
    b.set(0, Rat(1));
    CHECK_THROWS_AS(a + b, OrderMismatch);
    CHECK_THROWS_AS(a * b, OrderMismatch);
    CHECK_THROWS_AS(a == b, OrderMismatch);
}

TEST_CASE("randomized associativity and distributivity, 120 cases") {
    std::mt19937_64 rng(20240601);
    for (int t = 0; t < 120; ++t) {
        int L = 2 + static_cast<int>(rng() % 4);
        auto a = randomSeries(rng, L), b = randomSeries(rng, L), c = randomSeries(rng, L);
        CHECK((a * b) * c == a * (b * c));
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("substNegU flips odd coefficients") {
    RS a(3);
    a.set(1, Rat(2)); a.set(0, Rat(5)); a.set(-1, Rat(7)); a.set(-2, Rat(9));
    auto f = a.substNegU();
    CHECK(*f.coeff(1) == Rat(-2));
    CHECK(*f.coeff(0) == Rat(5));
    CHECK(*f.coeff(-1) == Rat(-7));
    CHECK(*f.coeff(-2) == Rat(9));
}

TEST_CASE("quadratic expansion helpers") {
    auto s = expandInverseQuadratic<Rat>(Rat(1), Rat(5), 6, Rat(1)); // 1/(u^2-5)
    CHECK(*s.coeff(-2) == Rat(1));
    CHECK(*s.coeff(-4) == Rat(5));
    CHECK(*s.coeff(-6) == Rat(25));
    RS lin(6);
    lin.set(2, Rat(1)); lin.set(0, Rat(-5));
    auto p = s * lin;
    for (int m = -4; m <= 2; ++m)
        CHECK(p.coeffOr(m, Rat(0)) == (m == 0 ? Rat(1) : Rat(0)));

    auto w = u2OverU2Minus1<Rat>(6, Rat(1));
    CHECK(*w.coeff(0) == Rat(1));
    CHECK(*w.coeff(-2) == Rat(1));
    CHECK(!w.has(-1));
}
