// Relation catalogs: every defining/derived relation of the two presentations
// as checkable identities, for the verify subcommand and the test suites.

#pragma once

#include <bmwalg/degen.hpp>

#include <functional>
#include <string>
#include <vector>

namespace bmwalg {

struct RelationResult {
    std::string id;
    bool holds = false;
    std::string witness; // nonzero difference, printed, when failing
};

struct RelationCheck {
    std::string id;
    int minK;
    std::function<DegenElement(const DegenAlgebra&)> diff; // lhs - rhs
};

// Degenerate catalog. Index arguments are 1-based in the ids, matching the
// generator labels t1, e1, y1, ...
inline std::vector<RelationCheck> degenRelationCatalog(int k) {
    std::vector<RelationCheck> cat;
    auto add = [&](std::string id, int minK,
                   std::function<DegenElement(const DegenAlgebra&)> f) {
        cat.push_back({std::move(id), minK, std::move(f)});
    };
    using E = DegenElement;

    for (int i = 1; i < k; ++i) {
        add("t" + std::to_string(i) + "^2 = 1", i + 1, [i](const DegenAlgebra& A) -> E {
            auto t = A.genT(i - 1);
            return t * t - A.one();
        });
        add("e" + std::to_string(i) + "^2 = z0(0) e" + std::to_string(i), i + 1,
            [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1);
                return e * e - e * A.z0(0);
            });
        // rel:untwisting
        add("e" + std::to_string(i) + " t" + std::to_string(i) + " = eps e" + std::to_string(i),
            i + 1, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1), t = A.genT(i - 1);
                return e * t - e * A.eps();
            });
        add("t" + std::to_string(i) + " e" + std::to_string(i) + " = eps e" + std::to_string(i),
            i + 1, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1), t = A.genT(i - 1);
                return t * e - e * A.eps();
            });
        // rel:e_defn and altedefn
        add("t y = y' t - (1-e) at " + std::to_string(i), i + 1,
            [i](const DegenAlgebra& A) -> E {
                auto t = A.genT(i - 1), e = A.genE(i - 1);
                auto yi = A.genY(i - 1), yi1 = A.genY(i);
                return t * yi - (yi1 * t - A.one() + e);
            });
        add("y t = t y' - (1-e) at " + std::to_string(i), i + 1,
            [i](const DegenAlgebra& A) -> E {
                auto t = A.genT(i - 1), e = A.genE(i - 1);
                auto yi = A.genY(i - 1), yi1 = A.genY(i);
                return yi * t - (t * yi1 - A.one() + e);
            });
        // rel:unwrapping second part
        add("e" + std::to_string(i) + " (y" + std::to_string(i) + "+y" + std::to_string(i + 1) +
                ") = 0",
            i + 1, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1);
                return e * (A.genY(i - 1) + A.genY(i));
            });
        add("(y" + std::to_string(i) + "+y" + std::to_string(i + 1) + ") e" + std::to_string(i) +
                " = 0",
            i + 1, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1);
                return (A.genY(i - 1) + A.genY(i)) * e;
            });
        // rel:graded_braid3
        add("t" + std::to_string(i) + " commutes with y" + std::to_string(i) + "+y" +
                std::to_string(i + 1),
            i + 1, [i](const DegenAlgebra& A) -> E {
                auto t = A.genT(i - 1);
                auto s = A.genY(i - 1) + A.genY(i);
                return t * s - s * t;
            });
        // gamma via skein: gamma_{i,i+1} = t - eps e
        add("gamma(" + std::to_string(i) + "," + std::to_string(i + 1) + ") = t - eps e", i + 1,
            [i](const DegenAlgebra& A) -> E {
                return A.gamma(i, i + 1) - (A.genT(i - 1) - A.genE(i - 1) * A.eps());
            });
    }
    for (int i = 1; i + 1 < k; ++i) {
        add("braid t" + std::to_string(i) + " t" + std::to_string(i + 1), i + 2,
            [i](const DegenAlgebra& A) -> E {
                auto a = A.genT(i - 1), b = A.genT(i);
                return a * b * a - b * a * b;
            });
        add("e" + std::to_string(i) + " e" + std::to_string(i + 1) + " e" + std::to_string(i) +
                " = e" + std::to_string(i),
            i + 2, [i](const DegenAlgebra& A) -> E {
                auto a = A.genE(i - 1), b = A.genE(i);
                return a * b * a - a;
            });
        add("e" + std::to_string(i + 1) + " e" + std::to_string(i) + " e" + std::to_string(i + 1) +
                " = e" + std::to_string(i + 1),
            i + 2, [i](const DegenAlgebra& A) -> E {
                auto a = A.genE(i - 1), b = A.genE(i);
                return b * a * b - b;
            });
        add("e" + std::to_string(i) + " t" + std::to_string(i + 1) + " e" + std::to_string(i) +
                " = eps e" + std::to_string(i),
            i + 2, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i - 1);
                return e * A.genT(i) * e - e * A.eps();
            });
        add("e" + std::to_string(i + 1) + " t" + std::to_string(i) + " e" + std::to_string(i + 1) +
                " = eps e" + std::to_string(i + 1),
            i + 2, [i](const DegenAlgebra& A) -> E {
                auto e = A.genE(i);
                return e * A.genT(i - 1) * e - e * A.eps();
            });
        // skein conjugation and tangle moves
        add("e" + std::to_string(i + 1) + " = t t' e t' t at " + std::to_string(i), i + 2,
            [i](const DegenAlgebra& A) -> E {
                auto t = A.genT(i - 1), t2 = A.genT(i), e = A.genE(i - 1);
                return A.genE(i) - t * t2 * e * t2 * t;
            });
        add("tangle1 e" + std::to_string(i + 1) + " e" + std::to_string(i), i + 2,
            [i](const DegenAlgebra& A) -> E {
                return A.genE(i) * A.genE(i - 1) - A.genE(i) * A.genT(i - 1) * A.genT(i);
            });
        add("tangle1' e" + std::to_string(i) + " e" + std::to_string(i + 1), i + 2,
            [i](const DegenAlgebra& A) -> E {
                return A.genE(i - 1) * A.genE(i) - A.genT(i) * A.genT(i - 1) * A.genE(i);
            });
        add("tangle2 t" + std::to_string(i) + " e" + std::to_string(i + 1) + " e" +
                std::to_string(i),
            i + 2, [i](const DegenAlgebra& A) -> E {
                return A.genT(i - 1) * A.genE(i) * A.genE(i - 1) - A.genT(i) * A.genE(i - 1);
            });
        add("tangle2' e" + std::to_string(i + 1) + " e" + std::to_string(i) + " t" +
                std::to_string(i + 1),
            i + 2, [i](const DegenAlgebra& A) -> E {
                return A.genE(i) * A.genE(i - 1) * A.genT(i) - A.genE(i) * A.genT(i - 1);
            });
    }
    for (int i = 1; i <= k; ++i)
        for (int j = i + 1; j <= k; ++j)
            add("commute y" + std::to_string(i) + " y" + std::to_string(j), j,
                [i, j](const DegenAlgebra& A) -> E {
                    auto a = A.genY(i - 1), b = A.genY(j - 1);
                    return a * b - b * a;
                });
    for (int i = 1; i < k; ++i)
        for (int j = 1; j <= k; ++j) {
            if (j == i || j == i + 1) continue;
            add("commute t" + std::to_string(i) + " y" + std::to_string(j), std::max(i + 1, j),
                [i, j](const DegenAlgebra& A) -> E {
                    auto t = A.genT(i - 1), y = A.genY(j - 1);
                    return t * y - y * t;
                });
        }
    // unwrapping against the scalar table
    for (int l = 0; l <= 3; ++l)
        add("e1 y1^" + std::to_string(l) + " e1 = z0(" + std::to_string(l) + ") e1", 2,
            [l](const DegenAlgebra& A) -> E {
                auto e = A.genE(0);
                DegenElement x = e;
                for (int t = 0; t < l; ++t) x = A.genY(0) * x;
                return e * x - e * A.z0(l);
            });
    std::vector<RelationCheck> out;
    for (auto& c : cat)
        if (c.minK <= k) out.push_back(c);
    return out;
}

// The kappa/gamma presentation relations (tildeBrels1)-(rel:graded_braid6),
// checked on the derived elements. Indices run over 0..k with 0 the pole.
inline std::vector<RelationCheck> degenPresentationCatalog(int k) {
    std::vector<RelationCheck> cat;
    auto add = [&](std::string id, std::function<DegenElement(const DegenAlgebra&)> f) {
        cat.push_back({std::move(id), k, std::move(f)});
    };
    using E = DegenElement;
    // t_w gamma_{i,j} t_{w^-1} = gamma_{w(i),w(j)} for simple w = s_m
    for (int m = 1; m < k; ++m)
        for (int i = 0; i <= k; ++i)
            for (int j = i + 1; j <= k; ++j)
                add("conj s" + std::to_string(m) + " gamma(" + std::to_string(i) + "," +
                        std::to_string(j) + ")",
                    [m, i, j, k](const DegenAlgebra& A) -> E {
                        auto t = A.genT(m - 1);
                        auto sw = [&](int x) {
                            if (x == m) return m + 1;
                            if (x == m + 1) return m;
                            return x;
                        };
                        int i2 = sw(i), j2 = sw(j);
                        if (i2 > j2) std::swap(i2, j2);
                        return t * A.gamma(i, j) * t - A.gamma(i2, j2);
                    });
    // gamma_{p,r} gamma_{l,m} = gamma_{l,m} gamma_{p,r} for disjoint indices
    for (int p = 0; p <= k; ++p)
        for (int r = p + 1; r <= k; ++r)
            for (int l = 0; l <= k; ++l)
                for (int m = l + 1; m <= k; ++m) {
                    if (l == p || l == r || m == p || m == r) continue;
                    if (std::make_pair(p, r) >= std::make_pair(l, m)) continue;
                    add("disjoint gammas (" + std::to_string(p) + "," + std::to_string(r) +
                            "),(" + std::to_string(l) + "," + std::to_string(m) + ")",
                        [p, r, l, m](const DegenAlgebra& A) -> E {
                            auto a = A.gamma(p, r), b = A.gamma(l, m);
                            return a * b - b * a;
                        });
                }
    // gamma_{i,j}(gamma_{i,r} + gamma_{j,r}) = (gamma_{i,r} + gamma_{j,r}) gamma_{i,j}
    for (int i = 0; i <= k; ++i)
        for (int j = 0; j <= k; ++j)
            for (int r = 0; r <= k; ++r) {
                if (i >= j || r == i || r == j) continue;
                add("gamma braid (" + std::to_string(i) + "," + std::to_string(j) + "," +
                        std::to_string(r) + ")",
                    [i, j, r](const DegenAlgebra& A) -> E {
                        auto g = A.gamma(i, j);
                        auto s = A.gamma(std::min(i, r), std::max(i, r)) +
                                 A.gamma(std::min(j, r), std::max(j, r));
                        return g * s - s * g;
                    });
            }
    // c_j agreement: kappa-defn vs the gamma expansion (cingensB)
    for (int j = 0; j <= k; ++j)
        add("c" + std::to_string(j) + " expansions agree", [j](const DegenAlgebra& A) -> E {
            DegenElement rhs = A.zero();
            Rat ks(0);
            for (int i = 0; i <= j; ++i) ks += A.kappa(i);
            rhs = A.one() * ks;
            for (int l = 0; l <= j; ++l)
                for (int m = l + 1; m <= j; ++m) rhs = rhs + A.gamma(l, m) * Rat(2);
            return A.cElem(j) - rhs;
        });
    // kapparelns: t_{s_i} c_j = c_j t_{s_i} for j != i
    for (int i = 1; i < k; ++i)
        for (int j = 0; j <= k; ++j) {
            if (j == i) continue;
            add("t" + std::to_string(i) + " commutes c" + std::to_string(j),
                [i, j](const DegenAlgebra& A) -> E {
                    auto t = A.genT(i - 1), c = A.cElem(j);
                    return t * c - c * t;
                });
        }
    return cat;
}

inline std::vector<RelationResult> runCatalog(const DegenAlgebra& A,
                                              const std::vector<RelationCheck>& cat) {
    std::vector<RelationResult> out;
    for (auto& c : cat) {
        if (c.minK > A.k()) continue;
        RelationResult r;
        r.id = c.id;
        DegenElement d = c.diff(A);
        r.holds = d.isZero();
        if (!r.holds) r.witness = d.str();
        out.push_back(std::move(r));
    }
    return out;
}

} // namespace bmwalg
