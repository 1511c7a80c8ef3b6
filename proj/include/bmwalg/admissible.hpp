// Admissible-parameter derivation: the z_0^(l) / Z_0^(l) scalar tables from
// cyclotomic data, plus machine checks of the generating-function hypotheses
// the basis theorems require.

#pragma once

#include <bmwalg/params.hpp>
#include <bmwalg/rational.hpp>
#include <bmwalg/useries.hpp>

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace bmwalg {

// Lazily evaluated integer-indexed scalar sequence with an override hook
// (the override exists for negative-control testing only).
class LazyScalarSeq {
public:
    using Gen = std::function<Rat(int, const LazyScalarSeq&)>;
    LazyScalarSeq() = default;
    explicit LazyScalarSeq(Gen gen) : state_(std::make_shared<State>()) {
        state_->gen = std::move(gen);
    }

    Rat at(int l) const {
        auto& st = *state_;
        auto ov = st.overrides.find(l);
        if (ov != st.overrides.end()) return ov->second;
        auto it = st.cache.find(l);
        if (it != st.cache.end()) return it->second;
        Rat v = st.gen(l, *this);
        st.cache.emplace(l, v);
        return v;
    }
    void set(int l, Rat v) { state_->overrides[l] = std::move(v); }

private:
    struct State {
        Gen gen;
        std::map<int, Rat> cache;
        std::map<int, Rat> overrides;
    };
    std::shared_ptr<State> state_;
};

namespace detail {

// z_0(u) = (u - (1/2)(-1)^r) prod (u+b_i)/(u-b_i) - (u - 1/2), as a tail
// series to order N.
inline USeries<Rat> degenZ0Series(int r, const std::vector<Rat>& b, int N) {
    int W = N + r + 2;
    USeries<Rat> P = USeries<Rat>::monomial(0, Rat(1), W);
    for (const Rat& bi : b) {
        USeries<Rat> lin(W);
        lin.set(1, Rat(1));
        lin.set(0, bi);
        if (bi.isZero()) {
            // (u+0)/(u-0) = 1
            continue;
        }
        P = P * lin * expandInverseLinear<Rat>(Rat(1), bi, W, Rat(1));
    }
    USeries<Rat> head(W);
    head.set(1, Rat(1));
    head.set(0, (r % 2 == 0) ? Rat(-1, 2) : Rat(1, 2)); // -(1/2)(-1)^r
    USeries<Rat> S = head * P;
    S.addTo(1, Rat(-1));
    S.addTo(0, Rat(1, 2));
    return S;
}

// Z_0^+ from the cyclotomic identity:
// Z_0^+ = (z/Q + u z/(u^2-1)) prod (u-b_j^{-1})/(u-b_j) - z^{-1}/Q + u^2/(u^2-1).
inline USeries<Rat> affineZPlusSeries(int r, const std::vector<Rat>& b, const Rat& q,
                                      const Rat& z, int N) {
    int W = N + r + 4;
    Rat Q = q - q.inv();
    USeries<Rat> A(W);
    A.set(0, z / Q);
    for (int j = 1; j <= W; j += 2) A.addTo(-j, z); // u z/(u^2-1) = z(u^-1 + u^-3 + ...)
    USeries<Rat> P = USeries<Rat>::monomial(0, Rat(1), W);
    for (const Rat& bj : b) {
        USeries<Rat> lin(W);
        lin.set(1, Rat(1));
        lin.set(0, -bj.inv());
        P = P * lin * expandInverseLinear<Rat>(Rat(1), bj, W, Rat(1));
    }
    USeries<Rat> S = A * P;
    S.addTo(0, -z.inv() / Q);
    S = S + u2OverU2Minus1<Rat>(W, Rat(1));
    return S;
}

} // namespace detail

// Scalar table z_0^(l), l >= 0, for the degenerate flavor (both modes derive
// it from (r, b); generic-bounded just never imposes the cyclotomic relation).
inline LazyScalarSeq degenScalarZ(const ParamSet& p) {
    int r = p.r;
    std::vector<Rat> b = p.b;
    return LazyScalarSeq([r, b](int l, const LazyScalarSeq&) -> Rat {
        if (l < 0) throw std::invalid_argument("degenerate z0 table: l must be >= 0");
        auto S = detail::degenZ0Series(r, b, l + 1);
        return S.coeffOr(-l, Rat(0));
    });
}

// Scalar table Z_0^(l), l in Z, for the affine flavor. Nonnegative part by
// series expansion; negative part solved from the coefficient identity
// z Z^(-l) - z^{-1} Z^(l) = Q ( sum Z^(l-2j) - sum Z^(l-m) Z^(-m) ).
inline LazyScalarSeq affineScalarZ(const ParamSet& p) {
    int r = p.r;
    std::vector<Rat> b = p.b;
    Rat q = p.q, z = p.z;
    return LazyScalarSeq([r, b, q, z](int l, const LazyScalarSeq& self) -> Rat {
        if (l >= 0) {
            auto S = detail::affineZPlusSeries(r, b, q, z, l + 1);
            return S.coeffOr(-l, Rat(0));
        }
        int m = -l;
        Rat Q = q - q.inv();
        Rat first(0);
        for (int s = m - 2; s >= -(m - 2); s -= 2) first += self.at(s);
        Rat second(0);
        for (int j = 1; j <= m - 1; ++j) second += self.at(m - j) * self.at(-j);
        return (z.inv() * self.at(m) + Q * (first - second)) / z;
    });
}

// Derived table plus the verdict of the basis-theorem hypothesis check.
struct AdmissibleTable {
    Flavor flavor = Flavor::Degenerate;
    int L = 0;
    std::vector<Rat> zpos;            // index l = 0..L
    std::vector<Rat> zneg;            // affine: index l-1 holds Z^(-l), l = 1..L
    int r = 1;
    std::vector<Rat> b;
    Rat epsilon = Rat(1), q = Rat(0), z = Rat(0);
    bool holds = false;
    int failingOrder = 0;             // meaningful when !holds
    std::string note;

    nlohmann::json toJson() const {
        nlohmann::json j;
        j["flavor"] = flavor == Flavor::Degenerate ? "degenerate" : "affine";
        j["L"] = L;
        auto arr = nlohmann::json::array();
        for (auto& v : zpos) arr.push_back(v.str());
        j["z"] = arr;
        if (flavor == Flavor::Affine) {
            auto neg = nlohmann::json::array();
            for (auto& v : zneg) neg.push_back(v.str());
            j["z_negative"] = neg;
        }
        j["admissible"] = holds;
        if (!holds) j["failing_order"] = failingOrder;
        if (!note.empty()) j["note"] = note;
        return j;
    }
};

// Degenerate admissibility identity at truncation order L:
// (z0(-u) - (1/2 + eps u))(z0(u) - (1/2 - eps u)) = (1/2 - eps u)(1/2 + eps u).
inline std::pair<bool, int> checkDegenAdmissibility(const LazyScalarSeq& z0, const Rat& eps,
                                                    int L) {
    int W = L + 4;
    USeries<Rat> Z(W);
    for (int l = 0; l <= W; ++l) Z.set(-l, z0.at(l));
    USeries<Rat> lhsA = Z.substNegU();
    lhsA.addTo(0, Rat(-1, 2));
    lhsA.addTo(1, -eps);
    USeries<Rat> lhsB = Z;
    lhsB.addTo(0, Rat(-1, 2));
    lhsB.addTo(1, eps);
    USeries<Rat> lhs = lhsA * lhsB;
    USeries<Rat> rhs(W);
    rhs.set(0, Rat(1, 4));
    rhs.set(2, Rat(-1)); // eps^2 = 1
    USeries<Rat> diff = lhs - rhs;
    for (int m = 2; m >= -L; --m) {
        const Rat* c = diff.coeff(m);
        if (c && !c->isZero()) return {false, m};
    }
    return {true, 0};
}

// Affine Theorem hypothesis at order L:
// (Z^- - z/Q - u^2/(u^2-1))(Z^+ + z^{-1}/Q - u^2/(u^2-1))
//   = -(u^2-q^2)(u^2-q^{-2}) / ((u^2-1)^2 Q^2).
inline std::pair<bool, int> checkAffineAdmissibility(const LazyScalarSeq& Z, const Rat& q,
                                                     const Rat& z, int L) {
    int W = L + 8;
    Rat Q = q - q.inv();
    USeries<Rat> Zp(W), Zm(W);
    for (int l = 0; l <= W; ++l) {
        Zp.set(-l, Z.at(l));
        Zm.set(-l, Z.at(-l));
    }
    USeries<Rat> Wser = u2OverU2Minus1<Rat>(W, Rat(1));
    USeries<Rat> lhsA = Zm - Wser;
    lhsA.addTo(0, -(z / Q));
    USeries<Rat> lhsB = Zp - Wser;
    lhsB.addTo(0, z.inv() / Q);
    USeries<Rat> lhs = lhsA * lhsB;

    USeries<Rat> num(W);
    num.set(4, Rat(1));
    num.set(2, -(q * q + (q * q).inv()));
    num.set(0, Rat(1));
    auto inv1 = expandInverseQuadratic<Rat>(Rat(1), Rat(1), W, Rat(1)); // 1/(u^2-1)
    USeries<Rat> rhs = (num * inv1 * inv1).scaled(-(Q * Q).inv());

    USeries<Rat> diff = lhs - rhs;
    for (int m = 4; m >= -L; --m) {
        const Rat* c = diff.coeff(m);
        if (c && !c->isZero()) return {false, m};
    }
    return {true, 0};
}

inline AdmissibleTable deriveZ0Degen(int r, std::vector<Rat> b, Rat eps, int L) {
    if (L < 1) throw std::invalid_argument("deriveZ0Degen: L must be >= 1");
    ParamSet p = degenerateParams(eps, r, b);
    AdmissibleTable t;
    t.flavor = Flavor::Degenerate;
    t.L = L;
    t.r = r;
    t.b = std::move(b);
    t.epsilon = eps;
    auto z0 = degenScalarZ(p);
    for (int l = 0; l <= L; ++l) t.zpos.push_back(z0.at(l));
    auto [ok, order] = checkDegenAdmissibility(z0, eps, L);
    t.holds = ok;
    t.failingOrder = order;
    if (!ok) t.note = "degenerate admissibility identity fails";
    return t;
}

inline AdmissibleTable deriveZ0Affine(int r, std::vector<Rat> b, Rat q, Rat z, int L) {
    if (L < 1) throw std::invalid_argument("deriveZ0Affine: L must be >= 1");
    ParamSet p = affineParams(q, z, r, b); // validates q, z, b
    AdmissibleTable t;
    t.flavor = Flavor::Affine;
    t.L = L;
    t.r = r;
    t.b = std::move(b);
    t.q = q;
    t.z = z;
    auto Z = affineScalarZ(p);
    for (int l = 0; l <= L; ++l) t.zpos.push_back(Z.at(l));
    for (int l = 1; l <= L; ++l) t.zneg.push_back(Z.at(-l));
    // consistency of the forced value Z^(0) = 1 + (z - z^-1)/(q - q^-1)
    Rat z0expected = Rat(1) + (z - z.inv()) / (q - q.inv());
    if (t.zpos[0] != z0expected) {
        t.holds = false;
        t.failingOrder = 0;
        t.note = "Z0^(0) inconsistent with 1 + (z - z^-1)/(q - q^-1)";
        return t;
    }
    auto [ok, order] = checkAffineAdmissibility(Z, q, z, L);
    t.holds = ok;
    t.failingOrder = order;
    if (!ok) t.note = "affine admissibility identity fails";
    return t;
}

} // namespace bmwalg
