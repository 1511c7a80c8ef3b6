// Exact rational scalars for the algebra kernels.
//
// Thin value wrapper around GMP's mpq_class: always canonical (lowest terms,
// positive denominator), text format "p" or "p/q".

#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace bmwalg {

class Rat {
public:
    Rat() : v_(0) {}
    Rat(long n) : v_(n) {}
    Rat(int n) : v_(n) {}
    Rat(long num, long den) : v_(num, den) {
        if (den == 0) throw std::invalid_argument("Rat: zero denominator");
        v_.canonicalize();
    }
    explicit Rat(const mpq_class& q) : v_(q) { v_.canonicalize(); }

    // Parses "p" or "p/q" (optional leading '-'). Rejects malformed input.
    static Rat parse(const std::string& s) {
        if (s.empty()) throw std::invalid_argument("Rat: empty string");
        for (char c : s)
            if (!(std::isdigit(static_cast<unsigned char>(c)) || c == '-' || c == '/'))
                throw std::invalid_argument("Rat: bad character in '" + s + "'");
        mpq_class q;
        if (q.set_str(s, 10) != 0) throw std::invalid_argument("Rat: cannot parse '" + s + "'");
        if (q.get_den() == 0) throw std::invalid_argument("Rat: zero denominator in '" + s + "'");
        q.canonicalize();
        return Rat(q);
    }

    std::string str() const { return v_.get_str(); }

    bool isZero() const { return v_ == 0; }
    bool isOne() const { return v_ == 1; }
    int sign() const { return sgn(v_); }

    Rat operator-() const { return Rat(mpq_class(-v_)); }
    Rat& operator+=(const Rat& o) { v_ += o.v_; return *this; }
    Rat& operator-=(const Rat& o) { v_ -= o.v_; return *this; }
    Rat& operator*=(const Rat& o) { v_ *= o.v_; return *this; }
    Rat& operator/=(const Rat& o) {
        if (o.isZero()) throw std::domain_error("Rat: division by zero");
        v_ /= o.v_;
        return *this;
    }

    friend Rat operator+(Rat a, const Rat& b) { return a += b; }
    friend Rat operator-(Rat a, const Rat& b) { return a -= b; }
    friend Rat operator*(Rat a, const Rat& b) { return a *= b; }
    friend Rat operator/(Rat a, const Rat& b) { return a /= b; }

    friend bool operator==(const Rat& a, const Rat& b) { return a.v_ == b.v_; }
    friend bool operator!=(const Rat& a, const Rat& b) { return a.v_ != b.v_; }
    friend bool operator<(const Rat& a, const Rat& b) { return a.v_ < b.v_; }

    Rat inv() const {
        if (isZero()) throw std::domain_error("Rat: inverse of zero");
        return Rat(mpq_class(1 / v_));
    }

    // Integer power, negative exponents allowed for nonzero values.
    Rat pow(long e) const {
        if (e == 0) return Rat(1);
        Rat base = e > 0 ? *this : inv();
        unsigned long n = e > 0 ? static_cast<unsigned long>(e) : static_cast<unsigned long>(-e);
        Rat acc(1);
        while (n) {
            if (n & 1) acc *= base;
            base *= base;
            n >>= 1;
        }
        return acc;
    }

    const mpq_class& raw() const { return v_; }

private:
    mpq_class v_;
};

inline Rat half() { return Rat(1, 2); }

} // namespace bmwalg

template <>
struct std::hash<bmwalg::Rat> {
    size_t operator()(const bmwalg::Rat& r) const {
        return std::hash<std::string>()(r.str());
    }
};
