#include <bmwalg/diagram.hpp>

#include <catch2/catch_amalgamated.hpp>

#include <map>
#include <numeric>
#include <set>

using namespace bmwalg;

namespace {

// Independent oracle: count interleaving pairs by brute force over all edge
// pairs with an explicit circular-order test.
int crossingsOracle(const BrauerDiagram& d) {
    int k = d.k();
    std::vector<int> circOf(2 * k);
    for (int v = 0; v < 2 * k; ++v) circOf[v] = v < k ? v : 3 * k - 1 - v;
    auto es = d.edges();
    int n = 0;
    for (size_t a = 0; a < es.size(); ++a)
        for (size_t b = a + 1; b < es.size(); ++b) {
            // walk the circle from one endpoint of edge a to the other and
            // count endpoints of edge b strictly inside
            int s = circOf[es[a].first], t = circOf[es[a].second];
            int lo = std::min(s, t), hi = std::max(s, t);
            int inside = 0;
            for (int x : {circOf[es[b].first], circOf[es[b].second]})
                if (x > lo && x < hi) ++inside;
            if (inside == 1) ++n;
        }
    return n;
}

// Exhaustive matching enumeration for the count oracle.
long matchingCount(int n) { // perfect matchings on n points
    if (n == 0) return 1;
    return (n - 1) * matchingCount(n - 2);
}

BrauerDiagram permDiagram(const std::vector<int>& pi) { // top i -> bottom pi[i]
    int k = static_cast<int>(pi.size());
    std::vector<int> m(2 * k);
    for (int i = 0; i < k; ++i) { m[i] = k + pi[i]; m[k + pi[i]] = i; }
    return BrauerDiagram(k, std::move(m));
}

int inversions(const std::vector<int>& pi) {
    int n = 0;
    for (size_t i = 0; i < pi.size(); ++i)
        for (size_t j = i + 1; j < pi.size(); ++j)
            if (pi[i] > pi[j]) ++n;
    return n;
}

} // namespace

TEST_CASE("compose basics") {
    auto id3 = BrauerDiagram::identity(3);
    for (auto& d : enumerateDiagrams(3)) {
        auto [r, loops] = compose(id3, d);
        CHECK(r == d);
        CHECK(loops == 0);
    }
    auto e1 = BrauerDiagram::egen(2, 0);
    auto [r, loops] = compose(e1, e1);
    CHECK(r == e1);
    CHECK(loops == 1);
}

TEST_CASE("compose matches the stacking example with one closed loop") {
    // 7-dot product d1 d2 = x * d3.
    auto d1 = BrauerDiagram::parse("(1,4)(5,6)(2,1')(3,4')(7,6')(2',3')(5',7')");
    auto d2 = BrauerDiagram::parse("(2,4)(5,7)(1,1')(3,4')(6,2')(5',6')(3',7')");
    auto d3 = BrauerDiagram::parse("(1,4)(5,6)(2,1')(3,4')(7,2')(3',7')(5',6')");
    auto [r, loops] = compose(d1, d2);
    CHECK(r == d3);
    CHECK(loops == 1);
}

TEST_CASE("compose associativity with additive loop counts on all k=3 triples") {
    auto all = enumerateDiagrams(3);
    for (auto& a : all)
        for (auto& b : all)
            for (auto& c : all) {
                auto [ab, l1] = compose(a, b);
                auto [abc1, l2] = compose(ab, c);
                auto [bc, l3] = compose(b, c);
                auto [abc2, l4] = compose(a, bc);
                REQUIRE(abc1 == abc2);
                REQUIRE(l1 + l2 == l3 + l4);
            }
}

TEST_CASE("crossings") {
    CHECK(crossings(BrauerDiagram::identity(4)) == 0);
    CHECK(crossings(BrauerDiagram::sgen(4, 1)) == 1);

    // The 7-dot diagram displayed at the start of the basis section.
    auto d = BrauerDiagram::parse("(1,3)(2,1')(4,5)(6,6')(7,4')(2',7')(3',5')");
    CHECK(crossings(d) == crossingsOracle(d));
    CHECK(crossings(d) == 5);

    // crossings = inversion count on all of S4
    std::vector<int> pi(4);
    std::iota(pi.begin(), pi.end(), 0);
    do {
        CHECK(crossings(permDiagram(pi)) == inversions(pi));
    } while (std::next_permutation(pi.begin(), pi.end()));
}

TEST_CASE("enumerate") {
    CHECK(enumerateDiagrams(1).size() == 1);
    auto d2 = enumerateDiagrams(2);
    REQUIRE(d2.size() == 3);
    CHECK(std::set<BrauerDiagram>(d2.begin(), d2.end()).size() == 3);
    CHECK(enumerateDiagrams(3).size() == 15);
    for (int k = 1; k <= 5; ++k)
        CHECK(static_cast<long>(enumerateDiagrams(k, 5).size()) == matchingCount(2 * k));
    CHECK_THROWS_AS(enumerateDiagrams(7), std::length_error);
}

TEST_CASE("factorize round-trips with minimal s-count, k <= 4") {
    for (int k = 1; k <= 4; ++k) {
        for (auto& d : enumerateDiagrams(k)) {
            auto w = factorize(d);
            auto [r, loops] = evalWord(k, w);
            REQUIRE(r == d);
            REQUIRE(loops == 0);
            int sCount = 0;
            for (auto& g : w)
                if (!g.isE) ++sCount;
            REQUIRE(sCount == crossings(d));
        }
    }
}

TEST_CASE("factorize basics") {
    CHECK(factorize(BrauerDiagram::identity(3)).empty());
    auto w = factorize(BrauerDiagram::sgen(2, 0));
    REQUIRE(w.size() == 1);
    CHECK((!w[0].isE && w[0].i == 0));
}

TEST_CASE("factorize the tangle-section example word") {
    // d = s1 e3 s5 e2 e4 e1 s3 s5 on six strands; the diagram below is its
    // displayed closed form. Our word need not match letter-for-letter, only
    // evaluate to the same diagram with the same s-letter count.
    GenWord paper = {{false, 0}, {true, 2}, {false, 4}, {true, 1},
                     {true, 3}, {true, 0}, {false, 2}, {false, 4}};
    auto [d, loops] = evalWord(6, paper);
    REQUIRE(loops == 0);
    auto shown = BrauerDiagram::parse("(1,6)(3,4)(2,4')(5,5')(1',2')(3',6')");
    CHECK(d == shown);
    CHECK(crossings(d) == 4);
    auto w = factorize(d);
    auto [r, l2] = evalWord(6, w);
    CHECK(r == d);
    CHECK(l2 == 0);
    int sCount = 0;
    for (auto& g : w)
        if (!g.isE) ++sCount;
    CHECK(sCount == 4);
}

TEST_CASE("parse/print round trip and validation") {
    auto d = BrauerDiagram::parse("(1,3)(2,1')(4,5)(6,6')(7,4')(2',7')(3',5')");
    CHECK(BrauerDiagram::parse(d.str()) == d);
    CHECK_THROWS_AS(BrauerDiagram::parse("(1,2)(1,3)(2',3')", 3), std::invalid_argument);
    CHECK_THROWS_AS(BrauerDiagram::parse("(1,1')", 2), std::invalid_argument);
    // whitespace-insensitive
    CHECK(BrauerDiagram::parse(" ( 1 , 2 ) ( 1' , 2' ) ") == BrauerDiagram::egen(2, 0));
}

TEST_CASE("transpose is an involution and flips cups/caps") {
    for (auto& d : enumerateDiagrams(3)) {
        CHECK(d.transpose().transpose() == d);
        CHECK(crossings(d.transpose()) == crossings(d));
    }
    CHECK(BrauerDiagram::egen(3, 1).transpose() == BrauerDiagram::egen(3, 1));
}
