// Degenerate affine BMW algebra engine: exact normal forms on the decorated
// Brauer-diagram basis (cyclotomic or generic-bounded mode).
//
// A basis key is a diagram d with one exponent per edge, stored at the edge's
// lex-first vertex; the key's value is y-monomial(top) * D(d) * y-monomial
// (bottom), where D(d) is the image of a minimal word of d under s_i -> eps
// t_i, e_i -> e_i. Multiplication folds generator letters from the left onto
// normal elements; the case analysis follows the defining rewrite rules:
// eq-style pushes t y^l = y^l t -+ (1-e)-corrections, cup absorption through
// the unwrapping coefficients, stray relocation by lowering conjugation, and
// a strand walk for decorations trapped under an incoming cap.

#pragma once

#include <bmwalg/admissible.hpp>
#include <bmwalg/diagram.hpp>
#include <bmwalg/params.hpp>
#include <bmwalg/rational.hpp>

#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace bmwalg {

struct AlgebraError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
// Reduction exceeded its step budget (would indicate an engine bug).
struct ReductionGuardError : AlgebraError {
    using AlgebraError::AlgebraError;
};
// A linear extraction had no solution in W_{i-1} e_i: the chosen parameters
// violate the basis-theorem hypotheses.
struct DegenerateParamsError : AlgebraError {
    using AlgebraError::AlgebraError;
};

struct AlgKey {
    BrauerDiagram d;
    std::vector<int> exp; // size 2k; nonzero only at lex-first (slot) vertices

    friend bool operator<(const AlgKey& a, const AlgKey& b) {
        if (a.d != b.d) return a.d < b.d;
        return a.exp < b.exp;
    }
    friend bool operator==(const AlgKey& a, const AlgKey& b) {
        return a.d == b.d && a.exp == b.exp;
    }
};

class DegenAlgebra;

class DegenElement {
public:
    DegenElement() : ctx_(nullptr) {}
    explicit DegenElement(const DegenAlgebra* ctx) : ctx_(ctx) {}

    const DegenAlgebra* ctx() const { return ctx_; }
    const std::map<AlgKey, Rat>& terms() const { return terms_; }
    bool isZero() const { return terms_.empty(); }

    void add(const AlgKey& k, const Rat& c) {
        if (c.isZero()) return;
        auto it = terms_.find(k);
        if (it == terms_.end()) {
            terms_.emplace(k, c);
        } else {
            it->second += c;
            if (it->second.isZero()) terms_.erase(it);
        }
    }

    DegenElement operator+(const DegenElement& o) const {
        DegenElement r = *this;
        if (r.ctx_ == nullptr) r.ctx_ = o.ctx_;
        for (auto& [k, c] : o.terms_) r.add(k, c);
        return r;
    }
    DegenElement operator-(const DegenElement& o) const { return *this + (-o); }
    DegenElement operator-() const {
        DegenElement r(ctx_);
        for (auto& [k, c] : terms_) r.terms_.emplace(k, -c);
        return r;
    }
    DegenElement operator*(const Rat& s) const {
        DegenElement r(ctx_);
        if (s.isZero()) return r;
        for (auto& [k, c] : terms_) r.terms_.emplace(k, c * s);
        return r;
    }
    DegenElement operator*(const DegenElement& o) const; // via context mul

    friend bool operator==(const DegenElement& a, const DegenElement& b) {
        return a.terms_ == b.terms_;
    }
    friend bool operator!=(const DegenElement& a, const DegenElement& b) { return !(a == b); }

    std::string str() const;
    nlohmann::json toJson() const;

private:
    const DegenAlgebra* ctx_;
    std::map<AlgKey, Rat> terms_;
    friend class DegenAlgebra;
};

// Generator tags, 0-based (t_i, e_i act on strands i, i+1; y_j on strand j).
struct DGen {
    enum Kind { T, E, Y } kind;
    int idx;
};

class DegenAlgebra {
public:
    DegenAlgebra(int k, ParamSet params) : k_(k), p_(std::move(params)) {
        p_.validate();
        if (p_.flavor != Flavor::Degenerate)
            throw ParamError("DegenAlgebra: parameter set has affine flavor");
        if (k < 1) throw std::invalid_argument("DegenAlgebra: k must be positive");
        z0_ = degenScalarZ(p_);
    }

    // Negative-control hook: corrupt one z0^(l) entry and drop stale caches.
    void overrideZ0(int l, Rat v) {
        z0_.set(l, std::move(v));
        memoL_.clear();
        zmemo_.clear();
    }

    int k() const { return k_; }
    const ParamSet& params() const { return p_; }
    Rat eps() const { return p_.epsilon; }
    bool cyclotomic() const { return p_.mode == Mode::Cyclotomic; }
    Rat z0(int l) const { return z0_.at(l); }

    DegenElement zero() const { return DegenElement(this); }
    DegenElement one() const { return fromKey(identityKey(), Rat(1)); }
    DegenElement fromKey(const AlgKey& key, const Rat& c) const {
        DegenElement e(this);
        e.add(key, c);
        return e;
    }
    AlgKey bareKey(const BrauerDiagram& d) const {
        return AlgKey{d, std::vector<int>(2 * k_, 0)};
    }
    AlgKey identityKey() const { return bareKey(BrauerDiagram::identity(k_)); }

    DegenElement genT(int i) const { checkGenIdx(i); return lgen({DGen::T, i}, identityKey()); }
    DegenElement genE(int i) const { checkGenIdx(i); return lgen({DGen::E, i}, identityKey()); }
    DegenElement genY(int j) const {
        if (j < 0 || j >= k_) throw std::invalid_argument("genY: index out of range");
        return lgen({DGen::Y, j}, identityKey());
    }
    DegenElement gen(DGen g) const {
        switch (g.kind) {
            case DGen::T: return genT(g.idx);
            case DGen::E: return genE(g.idx);
            default: return genY(g.idx);
        }
    }

    // t_w for w in one-line form (0-based images, size k).
    DegenElement genTw(const std::vector<int>& w) const {
        if (static_cast<int>(w.size()) != k_)
            throw std::invalid_argument("genTw: permutation size mismatch");
        // Peel descents on the right: pi_next = pi * s_i when pi[i] > pi[i+1],
        // so w = s_{word[m-1]} ... s_{word[0]} and folding word[0] first gives t_w.
        std::vector<int> word;
        std::vector<int> pi = w;
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 0; i + 1 < k_; ++i) {
                if (pi[i] > pi[i + 1]) {
                    word.push_back(i);
                    std::swap(pi[i], pi[i + 1]);
                    changed = true;
                    break;
                }
            }
        }
        DegenElement r = one();
        for (int i : word) r = leftMulGen({DGen::T, i}, r);
        return r;
    }

    DegenElement basisElement(const AlgKey& key) const {
        validateKey(key);
        return foldKeyWord(key, Rat(1), one());
    }

    DegenElement mul(const DegenElement& a, const DegenElement& b) const {
        requireCtx(a);
        requireCtx(b);
        DegenElement acc(this);
        for (auto& [key, c] : a.terms()) acc = acc + foldKeyWord(key, c, b);
        return acc;
    }

    DegenElement leftMulGen(DGen g, const DegenElement& x) const {
        requireCtx(x);
        DegenElement acc(this);
        for (auto& [key, c] : x.terms()) acc = acc + lgen(g, key) * c;
        return acc;
    }

    // z_{i0}-level unwrapping element (0-based e-index i0):
    // e_{i0} y_{i0}^l e_{i0} = zNF(i0, l) * e_{i0}, supported on strands < i0.
    DegenElement zNF(int i0, int l) const;

    // Spec-facing z_extract with 1-based i: z_{i-1}^{(l)} from e_i y_i^l e_i.
    DegenElement zExtract(int i, int l) const {
        if (i < 1 || i > k_ - 1) throw std::invalid_argument("zExtract: need 1 <= i <= k-1");
        if (l < 0) throw std::invalid_argument("zExtract: l must be >= 0");
        return zNF(i - 1, l);
    }

    Rat kappa(int m) const {
        if (m < 0 || m > k_) throw std::invalid_argument("kappa: index out of range");
        return m == 0 ? p_.kappa0 : p_.kappa1;
    }

    // gamma_{i,j} for 0 <= i < j <= k (1-based strand labels, 0 = pole).
    DegenElement gamma(int i, int j) const {
        if (!(0 <= i && i < j && j <= k_)) throw std::invalid_argument("gamma: bad indices");
        if (i == 0) {
            if (j == 1) return genY(0) - one() * (p_.kappa1 * Rat(1, 2));
            // gamma_{0,m} = t_u gamma_{0,1} t_{u^-1}, u(1) = m
            std::vector<int> u(k_);
            u[0] = j - 1;
            for (int v = 1, fill = 0; v < k_; ++v) {
                if (fill == j - 1) ++fill;
                u[v] = fill++;
            }
            DegenElement tu = genTw(u);
            DegenElement tui = genTw(inversePerm(u));
            return mul(mul(tu, gamma(0, 1)), tui);
        }
        if (j == i + 1) {
            // y_{i+1} - t_{s_i} y_i t_{s_i}
            DegenElement t = genT(i - 1);
            return genY(i) - mul(mul(t, genY(i - 1)), t);
        }
        // gamma_{i,j} = t_v gamma_{1,2} t_{v^-1}, v(1) = i, v(2) = j
        std::vector<int> v(k_);
        v[0] = i - 1;
        v[1] = j - 1;
        for (int m = 2, fill = 0; m < k_; ++m) {
            while (fill == i - 1 || fill == j - 1) ++fill;
            v[m] = fill++;
        }
        DegenElement tv = genTw(v);
        DegenElement tvi = genTw(inversePerm(v));
        return mul(mul(tv, gamma(1, 2)), tvi);
    }

    // c_j = kappa_0 + 2(y_1 + ... + y_j).
    DegenElement cElem(int j) const {
        if (j < 0 || j > k_) throw std::invalid_argument("cElem: index out of range");
        DegenElement acc = one() * p_.kappa0;
        for (int m = 0; m < j; ++m) acc = acc + genY(m) * Rat(2);
        return acc;
    }

    DegenElement evalMonomials(const std::map<std::vector<int>, Rat>& mono) const {
        DegenElement acc(this);
        for (auto& [e, c] : mono) {
            if (static_cast<int>(e.size()) != k_)
                throw std::invalid_argument("evalMonomials: variable count mismatch");
            DegenElement t = one() * c;
            for (int v = k_ - 1; v >= 0; --v)
                for (int n = 0; n < e[v]; ++n) t = leftMulGen({DGen::Y, v}, t);
            acc = acc + t;
        }
        return acc;
    }

    struct CommReport {
        bool commutes = true;
        std::string witnessGen;
        DegenElement witness;
    };
    CommReport commutesWithSubalgebra(const DegenElement& x, int m) const {
        requireCtx(x);
        if (m < 1 || m > k_) throw std::invalid_argument("commutesWithSubalgebra: bad m");
        CommReport rep;
        auto check = [&](const DegenElement& g, const std::string& name) {
            if (!rep.commutes) return;
            DegenElement gx = mul(g, x), xg = mul(x, g);
            if (gx != xg) {
                rep.commutes = false;
                rep.witnessGen = name;
                rep.witness = gx - xg;
            }
        };
        for (int i = 0; i + 1 < m; ++i) {
            check(genT(i), "t" + std::to_string(i + 1));
            check(genE(i), "e" + std::to_string(i + 1));
        }
        for (int j = 0; j < m; ++j) check(genY(j), "y" + std::to_string(j + 1));
        return rep;
    }

    // One mul() summand: fold the defining word of (key, c) onto rhs.
    DegenElement foldKeyWord(const AlgKey& key, const Rat& c, const DegenElement& rhs) const {
        DegenElement cur = rhs * (c * epsPow(crossings(key.d)));
        for (int v = 2 * k_ - 1; v >= k_; --v)
            for (int n = 0; n < key.exp[v]; ++n) cur = leftMulGen({DGen::Y, v - k_}, cur);
        GenWord w = factorize(key.d);
        for (auto it = w.rbegin(); it != w.rend(); ++it)
            cur = leftMulGen({it->isE ? DGen::E : DGen::T, it->i}, cur);
        for (int v = k_ - 1; v >= 0; --v)
            for (int n = 0; n < key.exp[v]; ++n) cur = leftMulGen({DGen::Y, v}, cur);
        return cur;
    }

    void validateKey(const AlgKey& key) const {
        if (key.d.k() != k_) throw std::invalid_argument("key: wrong strand count");
        if (static_cast<int>(key.exp.size()) != 2 * k_)
            throw std::invalid_argument("key: wrong exponent vector size");
        for (int v = 0; v < 2 * k_; ++v) {
            if (key.exp[v] == 0) continue;
            if (!key.d.isSlot(v))
                throw std::invalid_argument("key: exponent off a decoration slot");
            if (key.exp[v] < 0)
                throw std::invalid_argument("key: negative exponent in degenerate flavor");
            if (cyclotomic() && key.exp[v] >= p_.r)
                throw std::invalid_argument("key: exponent exceeds cyclotomic bound r-1");
        }
    }

    DegenElement lgen(DGen g, const AlgKey& key) const {
        int code = static_cast<int>(g.kind) * 64 + g.idx;
        auto mk = std::make_pair(code, key);
        auto it = memoL_.find(mk);
        if (it != memoL_.end()) return it->second;
        Budget guard(this);
        DegenElement r(this);
        switch (g.kind) {
            case DGen::Y: r = lgenY(g.idx, key); break;
            case DGen::T: r = lgenT(g.idx, key); break;
            case DGen::E: r = lgenE(g.idx, key); break;
        }
        memoL_.emplace(mk, r);
        return r;
    }

private:
    static std::vector<int> inversePerm(const std::vector<int>& w) {
        std::vector<int> inv(w.size());
        for (size_t i = 0; i < w.size(); ++i) inv[w[i]] = static_cast<int>(i);
        return inv;
    }
    void requireCtx(const DegenElement& x) const {
        if (x.ctx() != nullptr && x.ctx() != this)
            throw std::invalid_argument("element belongs to a different algebra context");
    }
    void checkGenIdx(int i) const {
        if (i < 0 || i + 1 >= k_) throw std::invalid_argument("generator index out of range");
    }
    Rat epsPow(int n) const { return n % 2 == 0 ? Rat(1) : p_.epsilon; }

    struct Budget {
        const DegenAlgebra* a;
        explicit Budget(const DegenAlgebra* alg) : a(alg) {
            if (++a->depth_ > 60000)
                throw ReductionGuardError("degen engine: reduction step budget exceeded");
        }
        ~Budget() { --a->depth_; }
    };

    DegenElement applyYPow(int v, int n, DegenElement x) const {
        for (int t = 0; t < n; ++t) x = leftMulGen({DGen::Y, v}, x);
        return x;
    }

    // y_v * key, one power (v a top vertex).
    DegenElement lgenY(int v, const AlgKey& key) const {
        int p = key.d.partner(v);
        if (v < p) { // decoration slot
            AlgKey K2 = key;
            if (++K2.exp[v] == p_.r && cyclotomic()) return reduceTopSlotOverflow(K2, v);
            return fromKey(K2, Rat(1));
        }
        // stray: (p, v) is a top cup with p < v
        if (v == p + 1) return -lgenY(p, key); // (y_p + y_{p+1}) kills the cup
        return conjLowerTopY(v, key);
    }

    // y_v = t_{v-1} y_{v-1} t_{v-1} + t_{v-1} - eps e_{v-1} applied to key.
    DegenElement conjLowerTopY(int v, const AlgKey& key) const {
        DegenElement X = fromKey(key, Rat(1));
        DegenElement A = leftMulGen({DGen::T, v - 1}, X);
        DegenElement C = leftMulGen({DGen::T, v - 1}, leftMulGen({DGen::Y, v - 1}, A));
        return C + A - leftMulGen({DGen::E, v - 1}, X) * p_.epsilon;
    }

    // Cyclotomic overflow at a top slot (exp[v] == r after a bump).
    DegenElement reduceTopSlotOverflow(const AlgKey& key, int v) const {
        if (v == 0) {
            AlgKey K3 = key;
            K3.exp[0] = 0;
            std::vector<Rat> poly = minPoly();
            DegenElement acc(this);
            for (int m = 0; m < p_.r; ++m) {
                AlgKey Km = K3;
                Km.exp[0] = m;
                acc.add(Km, -poly[m]);
            }
            return acc;
        }
        AlgKey Km = key;
        Km.exp[v] = p_.r - 1;
        return conjLowerTopY(v, Km);
    }

    // Coefficients of prod_i (y - b_i) = y^r + sum_{m<r} poly[m] y^m.
    std::vector<Rat> minPoly() const {
        std::vector<Rat> poly{Rat(1)};
        for (const Rat& b : p_.b) {
            std::vector<Rat> nxt(poly.size() + 1, Rat(0));
            for (size_t m = 0; m < poly.size(); ++m) {
                nxt[m + 1] += poly[m];
                nxt[m] -= poly[m] * b;
            }
            poly = std::move(nxt);
        }
        return poly;
    }

    // Pure diagram composition of a generator letter onto a key whose slots at
    // the letter's positions are bare. Surviving top decorations re-fold so
    // relabeled strays normalize.
    DegenElement composeLeftLetter(const GenLetter& g, const AlgKey& key) const {
        auto [comp, loops] = compose(letterDiagram(k_, g), key.d);
        Rat coeff = g.isE ? z0(0).pow(loops) : p_.epsilon;
        AlgKey base = bareKey(comp);
        for (int v = k_; v < 2 * k_; ++v) base.exp[v] = key.exp[v]; // caps persist
        DegenElement cur = fromKey(base, coeff);
        for (int v = k_ - 1; v >= 0; --v) {
            if (key.exp[v] == 0) continue;
            int dest = v;
            if (!g.isE) {
                if (v == g.i) dest = g.i + 1;
                else if (v == g.i + 1) dest = g.i;
            }
            cur = applyYPow(dest, key.exp[v], cur);
        }
        return cur;
    }

    DegenElement lgenT(int i, const AlgKey& key) const {
        int a = key.exp[i], b = key.exp[i + 1];
        AlgKey base = key;
        base.exp[i] = 0;
        base.exp[i + 1] = 0;
        // t_i y_i^a y_{i+1}^b = y_{i+1}^a y_i^b t_i
        //   - sum_r y_{i+1}^{a-r} (1-e_i) y_i^{r-1} y_{i+1}^b
        //   + sum_s y_{i+1}^a y_i^{b-s} (1-e_i) y_{i+1}^{s-1}
        DegenElement acc = applyYPow(i + 1, a, applyYPow(i, b, composeLeftLetter({false, i}, base)));
        DegenElement baseElem = fromKey(base, Rat(1));
        for (int r = 1; r <= a; ++r) {
            DegenElement x = applyYPow(i, r - 1, applyYPow(i + 1, b, baseElem));
            x = x - leftMulGen({DGen::E, i}, x);
            acc = acc - applyYPow(i + 1, a - r, x);
        }
        for (int s = 1; s <= b; ++s) {
            DegenElement x = applyYPow(i + 1, s - 1, baseElem);
            x = x - leftMulGen({DGen::E, i}, x);
            acc = acc + applyYPow(i + 1, a, applyYPow(i, b - s, x));
        }
        return acc;
    }

    // NF of letters[from..] * (bottom monomial) as a generic fold.
    DegenElement foldMixedSuffix(const GenWord& letters, size_t from,
                                 const std::vector<int>& botExp) const {
        DegenElement cur = one();
        for (int v = 2 * k_ - 1; v >= k_; --v)
            for (int n = 0; n < botExp[v]; ++n) cur = leftMulGen({DGen::Y, v - k_}, cur);
        for (size_t j = letters.size(); j > from; --j) {
            const GenLetter& g = letters[j - 1];
            cur = leftMulGen({g.isE ? DGen::E : DGen::T, g.i}, cur);
        }
        return cur;
    }

    DegenElement foldLetterPrefix(const GenWord& letters, size_t count, DegenElement x) const {
        for (size_t j = count; j > 0; --j) {
            const GenLetter& g = letters[j - 1];
            x = leftMulGen({g.isE ? DGen::E : DGen::T, g.i}, x);
        }
        return x;
    }

    // NF( e_i * y_side^M * D(d) * bottom-monomial ), tops i, i+1 of d unpaired.
    // The power block rides its strand through the word of d: crossings push
    // it (spawning (1-e) correction terms), cups and caps of e-letters u-turn
    // it, and it exits either at the bottom (onto the cap the incoming e_i
    // creates) or at a top position clear of {i, i+1}, where it commutes out.
    // The strand is a simple path, so the main walk terminates structurally.
    DegenElement walkCase3(int i, int side, int M, const BrauerDiagram& d,
                           const std::vector<int>& botExp) const {
        GenWord letters = factorize(d);
        const Rat epsCr = epsPow(crossings(d));
        DegenElement acc(this);
        int pos = side;
        Rat coef(1);
        bool down = true;
        size_t idx = 0; // block sits between letters[idx-1] and letters[idx]
        int steps = 0;
        const int stepMax = 8 * static_cast<int>(letters.size() + 2) *
                            static_cast<int>(letters.size() + 2);
        while (true) {
            if (++steps > stepMax)
                throw ReductionGuardError("walkCase3: strand walk did not terminate");
            if (down && idx == letters.size()) {
                // bottom exit: e_i D(d) y_pos^M bots = D(e_i o d) with the
                // block landing on the freshly merged cap. The caller picked
                // the walking side so this is the cap's lex-first endpoint.
                auto [comp, loops] = compose(BrauerDiagram::egen(k_, i), d);
                if (loops != 0)
                    throw ReductionGuardError("walkCase3: unexpected loop on exit");
                int w = k_ + pos;
                int pw = comp.partner(w);
                if (pw < k_ || w > pw)
                    throw ReductionGuardError("walkCase3: exit is not a cap slot");
                AlgKey kk = bareKey(comp);
                for (int v = k_; v < 2 * k_; ++v) kk.exp[v] = botExp[v];
                kk.exp[w] += M;
                if (cyclotomic() && kk.exp[w] >= p_.r)
                    return acc + reduceBottomOverflow(kk, w) * coef;
                return acc + fromKey(kk, coef);
            }
            if (!down && idx == 0) {
                // top exit at pos, guaranteed clear of the incoming cap
                if (pos == i || pos == i + 1)
                    throw ReductionGuardError("walkCase3: top exit under the cap");
                AlgKey base = bareKey(d);
                for (int v = k_; v < 2 * k_; ++v) base.exp[v] = botExp[v];
                DegenElement x = composeLeftLetter({true, i}, base);
                return acc + applyYPow(pos, M, x) * coef;
            }
            const GenLetter& g = down ? letters[idx] : letters[idx - 1];
            if (pos != g.i && pos != g.i + 1) {
                if (down) ++idx; else --idx;
                continue;
            }
            if (!g.isE) {
                // push the block through the crossing; both directions use
                // t_m y_m^M = y_{m+1}^M t_m - sum_r y_{m+1}^{M-r}(1-e_m)y_m^{r-1}
                // (and its partner with + sign), read from the matching side.
                bool atLow = pos == g.i;
                int newPos = atLow ? g.i + 1 : g.i;
                Rat csign = atLow ? Rat(-1) : Rat(1);
                size_t cut = down ? idx : idx - 1; // the consumed t-letter
                // exponents adjacent to the removed letter: when moving down,
                // the old position is above (left), new below (right); when
                // moving up it is reversed.
                int leftPos = down ? pos : newPos;
                int rightPos = down ? newPos : pos;
                for (int r = 1; r <= M; ++r) {
                    DegenElement S = foldMixedSuffix(letters, cut + 1, botExp);
                    DegenElement x = applyYPow(rightPos, r - 1, S);
                    x = x - leftMulGen({DGen::E, g.i}, x);
                    x = applyYPow(leftPos, M - r, x);
                    x = foldLetterPrefix(letters, cut, x);
                    acc = acc + leftMulGen({DGen::E, i}, x) * (coef * csign * epsCr);
                }
                pos = newPos;
                if (down) ++idx; else --idx;
                continue;
            }
            // e-letter: u-turn across its cup (from above) or cap (from below)
            if (M % 2 != 0) coef = -coef;
            pos = (pos == g.i) ? g.i + 1 : g.i;
            down = !down;
        }
    }

    // Cyclotomic reduction of a fresh bottom-cap exponent (exp[slot] >= r).
    DegenElement reduceBottomOverflow(const AlgKey& key, int slot) const {
        int strand = slot - k_;
        int M = key.exp[slot];
        if (strand == 0) {
            // reduce y_1^M mod the minimal polynomial
            std::vector<Rat> rem(p_.r, Rat(0));
            rem[0] = Rat(1);
            std::vector<Rat> poly = minPoly();
            for (int t = 0; t < M; ++t) {
                // multiply by y and reduce
                Rat top = rem[p_.r - 1];
                for (int m = p_.r - 1; m >= 1; --m) rem[m] = rem[m - 1];
                rem[0] = Rat(0);
                if (!top.isZero())
                    for (int m = 0; m < p_.r; ++m) rem[m] -= poly[m] * top;
            }
            DegenElement accum(this);
            for (int m = 0; m < p_.r; ++m) {
                AlgKey Km = key;
                Km.exp[slot] = m;
                accum.add(Km, rem[m]);
            }
            return accum;
        }
        // generic strand: peel powers off onto the right via full products
        AlgKey base = key;
        base.exp[slot] = 0;
        DegenElement cur = fromKey(base, Rat(1));
        DegenElement yj = genY(strand);
        for (int t = 0; t < M; ++t) cur = mul(cur, yj);
        return cur;
    }

    DegenElement lgenE(int i, const AlgKey& key) const {
        const BrauerDiagram& d = key.d;
        if (d.hasTopCup(i)) {
            // cup absorption: e_i y_i^m D(d) = z-element * D(d)
            int m = key.exp[i];
            AlgKey stripped = key;
            stripped.exp[i] = 0;
            if (m == 0) return fromKey(stripped, z0(0));
            return mul(zNF(i, m), fromKey(stripped, Rat(1)));
        }
        int a = key.exp[i], b = key.exp[i + 1];
        if (a == 0 && b == 0) return composeLeftLetter({true, i}, key);

        // flip all decoration onto one side of the incoming cap:
        // e_i y_i^a y_{i+1}^b = (-1)^b e_i y_i^{a+b}
        int M = a + b;
        Rat sign = (b % 2 == 0) ? Rat(1) : Rat(-1);
        // Pick the walking side: a cup side ends in a top exit; two verticals
        // exit at the bottom, where the block must land on the merged cap's
        // lex-first endpoint. Flipping sides across the incoming cap costs
        // (-1)^M.
        bool iIsCup = d.partner(i) < k_;
        bool i1IsCup = d.partner(i + 1) < k_;
        int side = i;
        if (!iIsCup && i1IsCup) side = i + 1;
        else if (!iIsCup && !i1IsCup && d.partner(i + 1) < d.partner(i)) side = i + 1;
        if (side == i + 1 && M % 2 != 0) sign = -sign;
        AlgKey stripped = key;
        stripped.exp[i] = 0;
        stripped.exp[i + 1] = 0;
        std::vector<int> otherTop(2 * k_, 0), botExp(2 * k_, 0);
        for (int v = 0; v < k_; ++v) otherTop[v] = stripped.exp[v];
        for (int v = k_; v < 2 * k_; ++v) botExp[v] = stripped.exp[v];

        DegenElement res = walkCase3(i, side, M, d, botExp);
        for (int v = k_ - 1; v >= 0; --v)
            if (otherTop[v] > 0) res = applyYPow(v, otherTop[v], res);
        return res * sign;
    }

    int k_;
    ParamSet p_;
    mutable LazyScalarSeq z0_;
    mutable std::map<std::pair<int, AlgKey>, DegenElement> memoL_;
    mutable std::map<std::pair<int, int>, DegenElement> zmemo_;
    mutable std::set<std::pair<int, int>> zInProgress_;
    mutable int depth_ = 0;
};

inline DegenElement DegenElement::operator*(const DegenElement& o) const {
    const DegenAlgebra* c = ctx_ ? ctx_ : o.ctx_;
    if (!c) throw std::logic_error("DegenElement: multiplication without a context");
    return c->mul(*this, o);
}

// e_{i0} y_{i0}^l e_{i0} = zNF(i0, l) e_{i0}; computed by replacing the left
// e_{i0} with its conjugated word t_{i0-1} t_{i0} e_{i0-1} t_{i0} t_{i0-1}
// (grounding the recursion at lower strand index), then stripping the e_{i0}
// factor off every resulting key.
inline DegenElement DegenAlgebra::zNF(int i0, int l) const {
    if (i0 < 0 || i0 + 1 >= k_) throw std::invalid_argument("zNF: e-index out of range");
    if (l == 0) return one() * z0(0);
    if (i0 == 0) return one() * z0(l);
    auto mk = std::make_pair(i0, l);
    auto it = zmemo_.find(mk);
    if (it != zmemo_.end()) return it->second;
    if (zInProgress_.count(mk))
        throw ReductionGuardError("zNF: recursive dependency on the same (i, l)");
    zInProgress_.insert(mk);

    AlgKey K = bareKey(BrauerDiagram::egen(k_, i0));
    K.exp[i0] = l; // y_{i0}^l e_{i0}
    DegenElement X = fromKey(K, Rat(1));
    // left-multiply by t_{i0-1} t_{i0} e_{i0-1} t_{i0} t_{i0-1}, rightmost first
    X = leftMulGen({DGen::T, i0 - 1}, X);
    X = leftMulGen({DGen::T, i0}, X);
    X = leftMulGen({DGen::E, i0 - 1}, X);
    X = leftMulGen({DGen::T, i0}, X);
    X = leftMulGen({DGen::T, i0 - 1}, X);

    // strip: every key must be (d' on strands < i0) tensor (cup+cap at i0),
    // undecorated at and beyond strand i0
    DegenElement out(this);
    for (auto& [kk, c] : X.terms()) {
        bool ok = kk.d.hasTopCup(i0) && kk.d.hasBottomCap(i0) && kk.exp[i0] == 0 &&
                  kk.exp[k_ + i0] == 0;
        for (int v = i0 + 2; ok && v < k_; ++v)
            ok = kk.d.partner(v) == k_ + v && kk.exp[v] == 0 && kk.exp[k_ + v] == 0;
        if (!ok) {
            zInProgress_.erase(mk);
            throw DegenerateParamsError(
                "zNF: normal form of e_i y_i^l e_i leaves W_{i-1} e_i; offending key " +
                kk.d.str());
        }
        std::vector<int> m = kk.d.match();
        m[i0] = k_ + i0;
        m[k_ + i0] = i0;
        m[i0 + 1] = k_ + i0 + 1;
        m[k_ + i0 + 1] = i0 + 1;
        out.add(AlgKey{BrauerDiagram(k_, std::move(m)), kk.exp}, c);
    }
    zInProgress_.erase(mk);
    zmemo_.emplace(mk, out);
    return out;
}

inline std::string DegenElement::str() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto& [key, c] : terms_) {
        int k = key.d.k();
        Rat shown = c;
        std::vector<std::string> factors;
        for (int v = 0; v < k; ++v)
            if (key.exp[v] > 0)
                factors.push_back("y" + std::to_string(v + 1) +
                                  (key.exp[v] > 1 ? "^" + std::to_string(key.exp[v]) : ""));
        GenWord w = factorize(key.d);
        int scount = 0;
        for (auto& g : w) {
            if (!g.isE) ++scount;
            factors.push_back((g.isE ? "e" : "t") + std::to_string(g.i + 1));
        }
        for (int v = k; v < 2 * k; ++v)
            if (key.exp[v] > 0)
                factors.push_back("y" + std::to_string(v - k + 1) +
                                  (key.exp[v] > 1 ? "^" + std::to_string(key.exp[v]) : ""));
        // D(d) = eps^{crossings} * letters: merge into the coefficient
        if (ctx_ != nullptr && scount % 2 != 0) shown = shown * static_cast<const DegenAlgebra*>(ctx_)->eps();
        std::string word;
        if (factors.empty()) {
            word = "1";
        } else {
            for (size_t i = 0; i < factors.size(); ++i) {
                if (i) word += "*";
                word += factors[i];
            }
        }
        std::string cs = shown.str();
        bool neg = !cs.empty() && cs[0] == '-';
        if (neg) cs = cs.substr(1);
        if (!first) os << (neg ? " - " : " + ");
        else if (neg) os << "-";
        first = false;
        if (cs == "1" && word != "1") os << word;
        else if (word == "1") os << cs;
        else os << cs << "*" << word;
    }
    return os.str();
}

inline nlohmann::json DegenElement::toJson() const {
    auto arr = nlohmann::json::array();
    for (auto& [key, c] : terms_) {
        nlohmann::json t;
        t["coeff"] = c.str();
        t["diagram"] = key.d.str();
        auto exps = nlohmann::json::array();
        for (auto [u, v] : key.d.edges()) exps.push_back(key.exp[u]);
        t["exp"] = exps;
        arr.push_back(t);
    }
    nlohmann::json j;
    j["terms"] = arr;
    return j;
}

} // namespace bmwalg
