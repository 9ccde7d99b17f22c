#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "params.hpp"

namespace dgf {

// Occupation list of one species: n sorted site indices (0-based), repeated
// entries allowed for bosons only.
struct Config
{
    std::array<int, 2> site{0, 0};
    int n = 1;

    int count(int s) const
    {
        int c = 0;
        for (int i = 0; i < n; ++i) c += (site[i] == s);
        return c;
    }
    bool operator==(const Config&) const = default;
};

struct Hop
{
    int target;   // index of the resulting configuration
    double amp;   // matrix element of a+_x a_y including statistics
};

// Single-species configuration table in lexicographic order.
class SpeciesBasis
{
public:
    SpeciesBasis() = default;
    SpeciesBasis(int L, int n, Statistics st) : L_(L), n_(n), stat_(st)
    {
        if (n != 1 && n != 2) throw std::invalid_argument("particle count per species must be 1 or 2");
        if (n == 1) {
            lookup_.assign(L, -1);
            for (int a = 0; a < L; ++a) {
                lookup_[a] = static_cast<int>(confs_.size());
                confs_.push_back(Config{{a, a}, 1});
            }
        } else {
            lookup_.assign(L * L, -1);
            for (int a = 0; a < L; ++a)
                for (int b = a + (st == Statistics::fermion ? 1 : 0); b < L; ++b) {
                    lookup_[a * L + b] = static_cast<int>(confs_.size());
                    confs_.push_back(Config{{a, b}, 2});
                }
        }
    }

    int L() const { return L_; }
    int n() const { return n_; }
    Statistics stat() const { return stat_; }
    int size() const { return static_cast<int>(confs_.size()); }
    const Config& config(int i) const { return confs_.at(i); }

    // Index of a configuration given in any order; -1 if not allowed.
    int index(Config c) const
    {
        for (int i = 0; i < c.n; ++i)
            if (c.site[i] < 0 || c.site[i] >= L_) return -1;
        if (c.n != n_) return -1;
        if (n_ == 1) return lookup_[c.site[0]];
        if (c.site[0] > c.site[1]) std::swap(c.site[0], c.site[1]);
        return lookup_[c.site[0] * L_ + c.site[1]];
    }

    // a+_x a_y acting on configuration i (x != y).
    std::optional<Hop> hop(int i, int x, int y) const
    {
        const Config& c = confs_[i];
        int ny = c.count(y);
        if (ny == 0) return std::nullopt;
        if (n_ == 1) return Hop{lookup_[x], 1.0};
        // remove one particle at y
        int pos = (c.site[0] == y) ? 0 : 1;
        int rest = c.site[1 - pos];
        if (stat_ == Statistics::boson) {
            int nx = (rest == x) ? 1 : 0;
            double amp = std::sqrt(double(ny)) * std::sqrt(double(nx + 1));
            return Hop{index(Config{{rest, x}, 2}), amp};
        }
        if (rest == x) return std::nullopt;
        // Jordan-Wigner sign: occupied sites in front of y, then in front of x
        double sign = (pos == 1) ? -1.0 : 1.0;
        if (rest < x) sign = -sign;
        return Hop{index(Config{{rest, x}, 2}), sign};
    }

private:
    int L_ = 0, n_ = 0;
    Statistics stat_ = Statistics::boson;
    std::vector<Config> confs_;
    std::vector<int> lookup_;
};

// Two-species product basis; global index = i_up * dim_dn + i_dn.
class StateIndexer
{
public:
    StateIndexer(const BasisSpec& spec, int L) : spec_(spec), L_(L)
    {
        if (L < 4 || L % 2 != 0)
            throw std::invalid_argument("L must be even and >= 4 (got " + std::to_string(L) + ")");
        up_ = SpeciesBasis(L, spec.n_up, spec.stat_up);
        dn_ = SpeciesBasis(L, spec.n_dn, spec.stat_dn);
    }

    const BasisSpec& spec() const { return spec_; }
    int L() const { return L_; }
    int dim() const { return up_.size() * dn_.size(); }
    const SpeciesBasis& species(Species s) const { return s == Species::up ? up_ : dn_; }

    int index(int i_up, int i_dn) const { return i_up * dn_.size() + i_dn; }
    std::pair<int, int> split(int idx) const { return {idx / dn_.size(), idx % dn_.size()}; }

    int index(const Config& cu, const Config& cd) const
    {
        int a = up_.index(cu), b = dn_.index(cd);
        return (a < 0 || b < 0) ? -1 : index(a, b);
    }
    std::pair<Config, Config> configs(int idx) const
    {
        auto [a, b] = split(idx);
        return {up_.config(a), dn_.config(b)};
    }

    // occupation of species s at 0-based site j in basis state idx
    int occupation(int idx, Species s, int j) const
    {
        auto [a, b] = split(idx);
        return s == Species::up ? up_.config(a).count(j) : dn_.config(b).count(j);
    }

private:
    BasisSpec spec_;
    int L_;
    SpeciesBasis up_, dn_;
};

inline StateIndexer build_basis(const BasisSpec& spec, int L) { return StateIndexer(spec, L); }

} // namespace dgf
