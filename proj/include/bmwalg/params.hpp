// Parameter sets for the two algebra flavors, with validation and JSON I/O.

#pragma once

#include <bmwalg/rational.hpp>

#include <json.hpp>

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bmwalg {

enum class Flavor { Degenerate, Affine };
enum class Mode { Cyclotomic, GenericBounded };

// Raised when a parameter set violates its invariants (q = 1, b_j = 0, ...).
struct ParamError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct ParamSet {
    Flavor flavor = Flavor::Degenerate;
    Rat epsilon = Rat(1);      // degenerate only, +1 or -1
    Rat kappa0 = Rat(0);       // degenerate only
    Rat kappa1 = Rat(0);       // degenerate only
    int r = 1;                 // cyclotomic degree
    std::vector<Rat> b;        // roots of the cyclotomic polynomial, size r
    Rat q = Rat(0);            // affine only
    Rat z = Rat(0);            // affine only
    Mode mode = Mode::Cyclotomic;
    int L_default = 6;

    void validate() const {
        if (r < 1) throw ParamError("ParamSet: r must be a positive integer");
        if (static_cast<int>(b.size()) != r)
            throw ParamError("ParamSet: need exactly r entries in b");
        if (L_default < 1) throw ParamError("ParamSet: L must be positive");
        if (flavor == Flavor::Degenerate) {
            if (epsilon != Rat(1) && epsilon != Rat(-1))
                throw ParamError("ParamSet: epsilon must be +1 or -1");
        } else {
            if (q.isZero()) throw ParamError("ParamSet: q must be nonzero");
            if (z.isZero()) throw ParamError("ParamSet: z must be nonzero");
            if ((q - q.inv()).isZero())
                throw ParamError("ParamSet: q - q^-1 must be invertible");
            for (const auto& bj : b)
                if (bj.isZero())
                    throw ParamError("ParamSet: cyclotomic roots must be nonzero (Y1 is invertible)");
        }
    }

    Rat Q() const { return q - q.inv(); } // affine q - q^-1

    nlohmann::json toJson() const {
        nlohmann::json j;
        j["flavor"] = flavor == Flavor::Degenerate ? "degenerate" : "affine";
        j["epsilon"] = epsilon.str();
        j["kappa0"] = kappa0.str();
        j["kappa1"] = kappa1.str();
        j["r"] = r;
        auto arr = nlohmann::json::array();
        for (const auto& x : b) arr.push_back(x.str());
        j["b"] = arr;
        j["q"] = q.str();
        j["z"] = z.str();
        j["mode"] = mode == Mode::Cyclotomic ? "cyclotomic" : "generic-bounded";
        j["L"] = L_default;
        return j;
    }

    static ParamSet fromJson(const nlohmann::json& j) {
        ParamSet p;
        std::string fl = j.at("flavor").get<std::string>();
        if (fl == "degenerate") p.flavor = Flavor::Degenerate;
        else if (fl == "affine") p.flavor = Flavor::Affine;
        else throw ParamError("ParamSet: flavor must be 'degenerate' or 'affine'");
        auto rat = [&](const char* key, Rat dflt) {
            if (!j.contains(key)) return dflt;
            const auto& v = j.at(key);
            if (v.is_number_integer()) return Rat(v.get<long>());
            return Rat::parse(v.get<std::string>());
        };
        p.epsilon = rat("epsilon", Rat(1));
        p.kappa0 = rat("kappa0", Rat(0));
        p.kappa1 = rat("kappa1", Rat(0));
        p.r = j.at("r").get<int>();
        for (const auto& v : j.at("b")) {
            if (v.is_number_integer()) p.b.push_back(Rat(v.get<long>()));
            else p.b.push_back(Rat::parse(v.get<std::string>()));
        }
        p.q = rat("q", Rat(0));
        p.z = rat("z", Rat(0));
        std::string md = j.value("mode", std::string("cyclotomic"));
        if (md == "cyclotomic") p.mode = Mode::Cyclotomic;
        else if (md == "generic-bounded") p.mode = Mode::GenericBounded;
        else throw ParamError("ParamSet: mode must be 'cyclotomic' or 'generic-bounded'");
        p.L_default = j.value("L", 6);
        p.validate();
        return p;
    }
};

inline ParamSet degenerateParams(Rat eps, int r, std::vector<Rat> b,
                                 Mode mode = Mode::Cyclotomic,
                                 Rat kappa0 = Rat(0), Rat kappa1 = Rat(0), int L = 6) {
    ParamSet p;
    p.flavor = Flavor::Degenerate;
    p.epsilon = eps;
    p.kappa0 = kappa0;
    p.kappa1 = kappa1;
    p.r = r;
    p.b = std::move(b);
    p.mode = mode;
    p.L_default = L;
    p.validate();
    return p;
}

inline ParamSet affineParams(Rat q, Rat z, int r, std::vector<Rat> b,
                             Mode mode = Mode::Cyclotomic, int L = 6) {
    ParamSet p;
    p.flavor = Flavor::Affine;
    p.q = q;
    p.z = z;
    p.r = r;
    p.b = std::move(b);
    p.mode = mode;
    p.L_default = L;
    p.validate();
    return p;
}

} // namespace bmwalg
