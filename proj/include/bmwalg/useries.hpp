// Truncated Laurent series in the formal variable u: finitely many positive
// powers, u^-1-tail cut at a fixed order L. Every value carries its own L;
// arithmetic requires matching orders and truncates products back to -L.
//
// The coefficient type V needs +, *, unary -, *(Rat) scaling and isZero().
// Multiplication keeps coefficient order (left series supplies left factors),
// so algebra-element coefficients are safe.

#pragma once

#include <bmwalg/rational.hpp>

#include <map>
#include <stdexcept>
#include <vector>

namespace bmwalg {

struct OrderMismatch : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

template <class V>
class USeries {
public:
    explicit USeries(int L) : L_(L) {
        if (L < 0) throw std::invalid_argument("USeries: negative truncation order");
    }

    static USeries monomial(int m, V v, int L) {
        USeries s(L);
        s.set(m, std::move(v));
        return s;
    }

    int order() const { return L_; }
    const std::map<int, V>& coeffs() const { return c_; }

    void set(int m, V v) {
        if (m < -L_ || v.isZero()) return;
        c_[m] = std::move(v);
    }
    void addTo(int m, const V& v) {
        if (m < -L_ || v.isZero()) return;
        auto it = c_.find(m);
        if (it == c_.end()) {
            c_.emplace(m, v);
        } else {
            it->second = it->second + v;
            if (it->second.isZero()) c_.erase(it);
        }
    }
    bool has(int m) const { return c_.count(m) != 0; }
    const V* coeff(int m) const {
        auto it = c_.find(m);
        return it == c_.end() ? nullptr : &it->second;
    }
    V coeffOr(int m, V zero) const {
        auto it = c_.find(m);
        return it == c_.end() ? zero : it->second;
    }
    bool isZero() const { return c_.empty(); }

    USeries operator+(const USeries& o) const {
        requireSameOrder(o);
        USeries s = *this;
        for (auto& [m, v] : o.c_) s.addTo(m, v);
        return s;
    }
    USeries operator-(const USeries& o) const { return *this + (-o); }
    USeries operator-() const {
        USeries s(L_);
        for (auto& [m, v] : c_) s.c_.emplace(m, -v);
        return s;
    }
    USeries operator*(const USeries& o) const {
        requireSameOrder(o);
        USeries s(L_);
        for (auto& [m1, v1] : c_)
            for (auto& [m2, v2] : o.c_) {
                if (m1 + m2 < -L_) continue;
                s.addTo(m1 + m2, v1 * v2);
            }
        return s;
    }
    USeries scaled(const Rat& r) const {
        USeries s(L_);
        if (r.isZero()) return s;
        for (auto& [m, v] : c_) s.set(m, v * r);
        return s;
    }

    friend bool operator==(const USeries& a, const USeries& b) {
        a.requireSameOrder(b);
        return a.c_ == b.c_;
    }
    friend bool operator!=(const USeries& a, const USeries& b) { return !(a == b); }

    // u -> -u substitution: coefficient of u^m picks up (-1)^m.
    USeries substNegU() const {
        USeries s(L_);
        for (auto& [m, v] : c_) s.set(m, (m % 2 == 0) ? v : -v);
        return s;
    }

    // Lowest exponent with a nonzero coefficient difference against o, if any.
    // Handy for failure reports.
    std::pair<bool, int> firstDifference(const USeries& o) const {
        requireSameOrder(o);
        for (int m = -L_; ; ++m) {
            bool aEnd = c_.empty() || m > c_.rbegin()->first;
            bool bEnd = o.c_.empty() || m > o.c_.rbegin()->first;
            if (aEnd && bEnd) return {false, 0};
            const V* a = coeff(m);
            const V* b = o.coeff(m);
            if (a == nullptr && b == nullptr) continue;
            if (a == nullptr || b == nullptr || !(*a == *b)) return {true, m};
        }
    }

private:
    void requireSameOrder(const USeries& o) const {
        if (L_ != o.L_) throw OrderMismatch("USeries: truncation order mismatch");
    }

    int L_;
    std::map<int, V> c_;
};

// Series of 1/(alpha*u - c): sum over l >= 1 of alpha^-l c^(l-1) u^-l,
// truncated at u^-L. `one` supplies the multiplicative unit of V.
template <class V>
USeries<V> expandInverseLinear(const Rat& alpha, const V& c, int L, const V& one) {
    if (alpha.isZero())
        throw std::invalid_argument("expandInverseLinear: alpha must be nonzero");
    USeries<V> s(L);
    V pw = one;
    Rat ai = alpha.inv();
    Rat scale = ai;
    for (int l = 1; l <= L; ++l) {
        s.set(-l, pw * scale);
        if (l < L) {
            pw = pw * c;
            scale = scale * ai;
        }
    }
    return s;
}

// Series of 1/(alpha*u^2 - c): sum over j >= 1 of alpha^-j c^(j-1) u^-2j.
template <class V>
USeries<V> expandInverseQuadratic(const Rat& alpha, const V& c, int L, const V& one) {
    if (alpha.isZero())
        throw std::invalid_argument("expandInverseQuadratic: alpha must be nonzero");
    USeries<V> s(L);
    V pw = one;
    Rat ai = alpha.inv();
    Rat scale = ai;
    for (int j = 1; 2 * j <= L; ++j) {
        s.set(-2 * j, pw * scale);
        if (2 * (j + 1) <= L) {
            pw = pw * c;
            scale = scale * ai;
        }
    }
    return s;
}

// u^2/(u^2-1) = 1 + u^-2 + u^-4 + ...
template <class V>
USeries<V> u2OverU2Minus1(int L, const V& one) {
    USeries<V> s(L);
    for (int m = 0; m <= L; m += 2) s.set(-m, one);
    return s;
}

} // namespace bmwalg
