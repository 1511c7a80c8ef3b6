// Brauer diagrams on k strands: composition with loop counting, crossing
// statistics, enumeration, and factorization into s/e generator words.
//
// Vertex numbering: top row 0..k-1, bottom row k..2k-1 (bottom j' = k+j).
// A diagram is a fixed-point-free involution on the 2k vertices.

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmwalg {

class BrauerDiagram {
public:
    BrauerDiagram() : k_(0) {}
    BrauerDiagram(int k, std::vector<int> match) : k_(k), match_(std::move(match)) {
        if (static_cast<int>(match_.size()) != 2 * k_)
            throw std::invalid_argument("BrauerDiagram: match size != 2k");
        for (int v = 0; v < 2 * k_; ++v) {
            int w = match_[v];
            if (w < 0 || w >= 2 * k_ || w == v || match_[w] != v)
                throw std::invalid_argument("BrauerDiagram: not a fixed-point-free involution");
        }
    }

    static BrauerDiagram identity(int k) {
        std::vector<int> m(2 * k);
        for (int i = 0; i < k; ++i) { m[i] = k + i; m[k + i] = i; }
        return BrauerDiagram(k, std::move(m));
    }

    // Transposition diagram s_i (0-based, swaps strands i and i+1).
    static BrauerDiagram sgen(int k, int i) {
        auto d = identity(k);
        d.match_[i] = k + i + 1; d.match_[k + i + 1] = i;
        d.match_[i + 1] = k + i; d.match_[k + i] = i + 1;
        return d;
    }

    // Cup/cap diagram e_i (0-based).
    static BrauerDiagram egen(int k, int i) {
        auto d = identity(k);
        d.match_[i] = i + 1; d.match_[i + 1] = i;
        d.match_[k + i] = k + i + 1; d.match_[k + i + 1] = k + i;
        return d;
    }

    int k() const { return k_; }
    int partner(int v) const { return match_[v]; }
    const std::vector<int>& match() const { return match_; }
    bool isIdentity() const {
        for (int i = 0; i < k_; ++i)
            if (match_[i] != k_ + i) return false;
        return true;
    }

    bool isTop(int v) const { return v < k_; }
    // Decoration slot of the edge through v: the lex-first endpoint.
    int slotOf(int v) const { return std::min(v, match_[v]); }
    bool isSlot(int v) const { return v < match_[v]; }

    bool hasTopCup(int i) const { return i + 1 < k_ && match_[i] == i + 1; }
    bool hasBottomCap(int i) const { return i + 1 < k_ && match_[k_ + i] == k_ + i + 1; }
    bool anyTopCup() const {
        for (int v = 0; v < k_; ++v)
            if (match_[v] < k_) return true;
        return false;
    }
    bool anyBottomCap() const {
        for (int v = k_; v < 2 * k_; ++v)
            if (match_[v] >= k_) return true;
        return false;
    }

    // Edges as (min,max) endpoint pairs, sorted by the lex-first endpoint.
    std::vector<std::pair<int, int>> edges() const {
        std::vector<std::pair<int, int>> es;
        for (int v = 0; v < 2 * k_; ++v)
            if (v < match_[v]) es.emplace_back(v, match_[v]);
        return es;
    }

    BrauerDiagram transpose() const {
        std::vector<int> m(2 * k_);
        auto flip = [this](int v) { return v < k_ ? v + k_ : v - k_; };
        for (int v = 0; v < 2 * k_; ++v) m[flip(v)] = flip(match_[v]);
        return BrauerDiagram(k_, std::move(m));
    }

    friend bool operator==(const BrauerDiagram& a, const BrauerDiagram& b) {
        return a.k_ == b.k_ && a.match_ == b.match_;
    }
    friend bool operator!=(const BrauerDiagram& a, const BrauerDiagram& b) { return !(a == b); }
    friend bool operator<(const BrauerDiagram& a, const BrauerDiagram& b) {
        if (a.k_ != b.k_) return a.k_ < b.k_;
        return a.match_ < b.match_;
    }

    std::string str() const {
        std::ostringstream os;
        for (auto [u, v] : edges()) {
            auto name = [this](int w) {
                return w < k_ ? std::to_string(w + 1) : std::to_string(w - k_ + 1) + "'";
            };
            os << "(" << name(u) << "," << name(v) << ")";
        }
        return os.str();
    }

    // Parses "(1,3)(2,1')(4,5)..."; whitespace-insensitive, 1-based, primes
    // mark bottom vertices. Rejects anything that is not a perfect matching.
    static BrauerDiagram parse(const std::string& text, int k = -1) {
        struct RawV { int n; bool prime; };
        std::vector<std::pair<RawV, RawV>> raw;
        size_t pos = 0;
        auto skipws = [&] {
            while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
        };
        auto rv = [&]() -> RawV {
            skipws();
            size_t start = pos;
            while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
            if (pos == start) throw std::invalid_argument("diagram parse: expected vertex number");
            int n = std::stoi(text.substr(start, pos - start));
            bool prime = pos < text.size() && text[pos] == '\'';
            if (prime) ++pos;
            if (n < 1) throw std::invalid_argument("diagram parse: vertex must be >= 1");
            return {n, prime};
        };
        int maxIdx = 0;
        while (true) {
            skipws();
            if (pos >= text.size()) break;
            if (text[pos] != '(') throw std::invalid_argument("diagram parse: expected '('");
            ++pos;
            RawV a = rv();
            skipws();
            if (pos >= text.size() || text[pos] != ',') throw std::invalid_argument("diagram parse: expected ','");
            ++pos;
            RawV b = rv();
            skipws();
            if (pos >= text.size() || text[pos] != ')') throw std::invalid_argument("diagram parse: expected ')'");
            ++pos;
            maxIdx = std::max({maxIdx, a.n, b.n});
            raw.emplace_back(a, b);
        }
        int kk = k > 0 ? k : maxIdx;
        std::vector<int> m(2 * kk, -1);
        auto idx = [&](RawV v) {
            if (v.n > kk) throw std::invalid_argument("diagram parse: vertex out of range");
            return v.prime ? kk + v.n - 1 : v.n - 1;
        };
        for (auto& [a, b] : raw) {
            int u = idx(a), v = idx(b);
            if (u == v || m[u] != -1 || m[v] != -1)
                throw std::invalid_argument("diagram parse: not an involution");
            m[u] = v; m[v] = u;
        }
        for (int v = 0; v < 2 * kk; ++v)
            if (m[v] == -1) throw std::invalid_argument("diagram parse: unmatched vertex");
        return BrauerDiagram(kk, std::move(m));
    }

private:
    int k_;
    std::vector<int> match_;
};

// Stacks d1 on top of d2 and counts removed closed loops.
inline std::pair<BrauerDiagram, int> compose(const BrauerDiagram& d1, const BrauerDiagram& d2) {
    const int k = d1.k();
    if (k != d2.k()) throw std::invalid_argument("compose: strand count mismatch");
    // Node encoding: d1 vertex v -> node v; d2 vertex v -> node 2k+v.
    // Glue line: d1-bottom j <-> d2-top j.
    auto partnerOf = [&](int node) {
        return node < 2 * k ? d1.partner(node) : 2 * k + d2.partner(node - 2 * k);
    };
    auto isBoundary = [&](int node) {
        return node < 2 * k ? node < k : node - 2 * k >= k;
    };
    auto glue = [&](int node) {
        // Interior nodes only: d1-bottom j = node k+j; d2-top j = node 2k+j.
        return node < 2 * k ? 2 * k + (node - k) : (node - 2 * k) + k;
    };
    auto resultVertex = [&](int node) { return node < 2 * k ? node : node - 2 * k; };

    std::vector<char> visited(4 * k, 0);
    std::vector<int> m(2 * k, -1);
    auto processBoundary = [&](int b) {
        if (visited[b]) return;
        visited[b] = 1;
        int cur = b;
        while (true) {
            int p = partnerOf(cur);
            visited[p] = 1;
            if (isBoundary(p)) {
                m[resultVertex(b)] = resultVertex(p);
                m[resultVertex(p)] = resultVertex(b);
                return;
            }
            cur = glue(p);
            visited[cur] = 1;
        }
    };
    for (int v = 0; v < k; ++v) processBoundary(v);
    for (int v = k; v < 2 * k; ++v) processBoundary(2 * k + v);

    int loops = 0;
    for (int j = 0; j < k; ++j) {
        int start = k + j; // d1-bottom j
        if (visited[start]) continue;
        ++loops;
        int cur = start;
        do {
            visited[cur] = 1;
            int p = partnerOf(cur);
            visited[p] = 1;
            cur = glue(p);
        } while (cur != start);
    }
    return {BrauerDiagram(k, std::move(m)), loops};
}

// Crossing number: unordered pairs of edges whose endpoints interleave on the
// boundary circle (top row left-to-right, then bottom row right-to-left).
// Equals the inversion count for permutation diagrams.
inline int crossings(const BrauerDiagram& d) {
    const int k = d.k();
    auto circ = [k](int v) { return v < k ? v : 3 * k - 1 - v; };
    auto es = d.edges();
    int count = 0;
    for (size_t a = 0; a < es.size(); ++a)
        for (size_t b = a + 1; b < es.size(); ++b) {
            int a1 = circ(es[a].first), a2 = circ(es[a].second);
            int b1 = circ(es[b].first), b2 = circ(es[b].second);
            if (a1 > a2) std::swap(a1, a2);
            bool in1 = b1 > a1 && b1 < a2, in2 = b2 > a1 && b2 < a2;
            if (in1 != in2) ++count;
        }
    return count;
}

// All diagrams on k strands in lexicographic match-array order; (2k-1)!! of them.
inline std::vector<BrauerDiagram> enumerateDiagrams(int k, int bound = 6) {
    if (k > bound)
        throw std::length_error("enumerateDiagrams: k exceeds configured bound");
    std::vector<BrauerDiagram> out;
    std::vector<int> m(2 * k, -1);
    std::function<void()> rec = [&]() {
        int v = 0;
        while (v < 2 * k && m[v] != -1) ++v;
        if (v == 2 * k) { out.emplace_back(k, m); return; }
        for (int w = v + 1; w < 2 * k; ++w) {
            if (m[w] != -1) continue;
            m[v] = w; m[w] = v;
            rec();
            m[v] = -1; m[w] = -1;
        }
    };
    rec();
    return out;
}

// Generator letters for diagram words.
struct GenLetter {
    bool isE;
    int i; // 0-based, acts on strands (i, i+1)
    friend bool operator==(const GenLetter& a, const GenLetter& b) {
        return a.isE == b.isE && a.i == b.i;
    }
};
using GenWord = std::vector<GenLetter>;

inline BrauerDiagram letterDiagram(int k, const GenLetter& g) {
    return g.isE ? BrauerDiagram::egen(k, g.i) : BrauerDiagram::sgen(k, g.i);
}

// Evaluates a word by stacking letters top-to-bottom; returns total loop count.
inline std::pair<BrauerDiagram, int> evalWord(int k, const GenWord& w) {
    BrauerDiagram d = BrauerDiagram::identity(k);
    int loops = 0;
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
        auto [nd, l] = compose(letterDiagram(k, *it), d);
        d = nd;
        loops += l;
    }
    return {d, loops};
}

namespace detail {

// Per-k table of minimal generator words, built by a shortest-path sweep from
// the identity: prepending a generator is one step, cost (s-letters, length).
// Loop-creating steps are excluded, so every table word is loop-free, and the
// s-cost of the optimum equals the crossing number. pred[d] holds the first
// letter of word(d) and the diagram the rest of the word evaluates to.
struct FactorTable {
    std::map<BrauerDiagram, std::pair<GenLetter, BrauerDiagram>> pred;

    explicit FactorTable(int k) {
        using Cost = std::pair<int, int>;
        std::map<BrauerDiagram, Cost> dist;
        auto id = BrauerDiagram::identity(k);
        dist[id] = {0, 0};
        // (cost, diagram) ordered set as a deterministic priority queue
        std::set<std::pair<Cost, BrauerDiagram>> pq;
        pq.insert({{0, 0}, id});
        std::vector<GenLetter> gens;
        for (int i = 0; i + 1 < k; ++i) gens.push_back({false, i});
        for (int i = 0; i + 1 < k; ++i) gens.push_back({true, i});
        while (!pq.empty()) {
            auto [cost, d] = *pq.begin();
            pq.erase(pq.begin());
            if (dist[d] < cost) continue;
            for (const auto& g : gens) {
                auto [nd, loops] = compose(letterDiagram(k, g), d);
                if (loops > 0) continue;
                Cost ncost{cost.first + (g.isE ? 0 : 1), cost.second + 1};
                auto it = dist.find(nd);
                if (it == dist.end() || ncost < it->second) {
                    if (it != dist.end()) pq.erase({it->second, nd});
                    dist[nd] = ncost;
                    pred[nd] = {g, d};
                    pq.insert({ncost, nd});
                }
            }
        }
    }
};

inline const FactorTable& factorTable(int k) {
    static std::map<int, FactorTable> tables;
    auto it = tables.find(k);
    if (it == tables.end()) it = tables.emplace(k, FactorTable(k)).first;
    return it->second;
}

} // namespace detail

// First letter of the canonical minimal word of d, plus the diagram the rest
// of the word evaluates to. Requires d != identity.
inline std::pair<GenLetter, BrauerDiagram> peelWord(const BrauerDiagram& d) {
    const auto& tab = detail::factorTable(d.k());
    auto it = tab.pred.find(d);
    if (it == tab.pred.end()) throw std::logic_error("peelWord: diagram not reachable");
    return it->second;
}

// Minimal-length word for d over {s_i, e_i} whose s-letter count equals
// crossings(d). Deterministic; evaluating it via compose returns d, loop-free.
inline GenWord factorize(const BrauerDiagram& d) {
    GenWord w;
    BrauerDiagram cur = d;
    while (!cur.isIdentity()) {
        auto [g, rest] = peelWord(cur);
        w.push_back(g);
        cur = rest;
    }
    return w;
}

} // namespace bmwalg

template <>
struct std::hash<bmwalg::BrauerDiagram> {
    size_t operator()(const bmwalg::BrauerDiagram& d) const {
        size_t h = std::hash<int>()(d.k());
        for (int v : d.match()) h = h * 1000003u + static_cast<size_t>(v);
        return h;
    }
};
