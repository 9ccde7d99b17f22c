#pragma once

#include <array>
#include <random>
#include <stdexcept>
#include <vector>

#include "basis.hpp"
#include "operator.hpp"
#include "params.hpp"

namespace dgf {

// Selects which pieces of the model go into an assembled matrix.
struct Terms
{
    bool hopping = true;
    bool loss = true;
    bool gauge = true;
    bool disorder = true;
    bool nrh = true;

    static Terms all() { return {}; }
    static Terms only_hopping() { return {true, false, false, false, false}; }
    static Terms only_loss() { return {false, true, false, false, false}; }
    static Terms only_gauge() { return {false, false, true, false, false}; }
    static Terms only_nrh() { return {false, false, false, false, true}; }
};

// On-site disorder energies eps[species][site], uniform in [-1, 1]. The up
// array is drawn first, then the down array, from one generator.
inline std::array<std::vector<double>, 2> disorder_field(const ModelParams& p)
{
    std::mt19937_64 rng(p.disorder_seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::array<std::vector<double>, 2> eps;
    for (auto& e : eps) e.resize(p.L);
    for (int j = 0; j < p.L; ++j) eps[0][j] = dist(rng);
    if (p.disorder_shared)
        eps[1] = eps[0];
    else
        for (int j = 0; j < p.L; ++j) eps[1][j] = dist(rng);
    return eps;
}

namespace detail {

struct Bond
{
    int x, y;   // a+_x a_y, 0-based sites
    double amp;
};

// SSH bonds of one species: intra-cell u on (2j-1, 2j), inter-cell v on
// (2j, 2j+1), the last v bond wrapping to site 1 under periodic boundaries.
inline std::vector<Bond> ssh_bonds(int L, double u, double v, Boundary bc)
{
    std::vector<Bond> b;
    for (int c = 0; c < L / 2; ++c) {
        int o = 2 * c, e = 2 * c + 1;
        if (u != 0) {
            b.push_back({o, e, u});
            b.push_back({e, o, u});
        }
        if (v == 0) continue;
        if (e + 1 < L) {
            b.push_back({e, e + 1, v});
            b.push_back({e + 1, e, v});
        } else if (bc == Boundary::periodic) {
            b.push_back({e, 0, v});
            b.push_back({0, e, v});
        }
    }
    return b;
}

// Adds amp * a+_{s,x} a_{s,y} acting on every basis state.
inline void add_hop(OperatorMatrix& H, const StateIndexer& B, Species s, int x, int y, double amp)
{
    const SpeciesBasis& sb = B.species(s);
    const SpeciesBasis& ob = B.species(other(s));
    for (int i = 0; i < sb.size(); ++i) {
        auto h = sb.hop(i, x, y);
        if (!h) continue;
        for (int k = 0; k < ob.size(); ++k) {
            int from = s == Species::up ? B.index(i, k) : B.index(k, i);
            int to = s == Species::up ? B.index(h->target, k) : B.index(k, h->target);
            H.add(to, from, amp * h->amp);
        }
    }
}

} // namespace detail

inline OperatorMatrix build_terms(const ModelParams& p, const StateIndexer& B, Terms terms)
{
    p.validate();
    if (B.L() != p.L) throw std::invalid_argument("basis and parameters disagree on L");
    const int L = p.L;
    OperatorMatrix H(B.dim());

    for (Species s : {Species::up, Species::dn}) {
        if (terms.hopping)
            for (const auto& bd : detail::ssh_bonds(L, p.u(s), p.v(s), p.bc(s)))
                detail::add_hop(H, B, s, bd.x, bd.y, bd.amp);
        if (terms.nrh && p.nrh_strength > 0)
            for (int c = 0; c < L / 2; ++c) {
                detail::add_hop(H, B, s, 2 * c, 2 * c + 1, p.nrh_strength);
                detail::add_hop(H, B, s, 2 * c + 1, 2 * c, -p.nrh_strength);
            }
    }

    // density-assisted intra-cell hop: t (n_sb,2j-1 - n_sb,2j) a+_s,2j-1 a_s,2j - h.c.
    if (terms.gauge && p.include_dgf) {
        for (Species s : {Species::up, Species::dn}) {
            Species sb = other(s);
            const SpeciesBasis& own = B.species(s);
            const SpeciesBasis& oth = B.species(sb);
            for (int c = 0; c < L / 2; ++c) {
                int o = 2 * c, e = 2 * c + 1;
                for (int k = 0; k < oth.size(); ++k) {
                    double f = p.t * (oth.config(k).count(o) - oth.config(k).count(e));
                    if (f == 0) continue;
                    for (int i = 0; i < own.size(); ++i) {
                        int from = s == Species::up ? B.index(i, k) : B.index(k, i);
                        if (auto h = own.hop(i, o, e)) {
                            int to = s == Species::up ? B.index(h->target, k) : B.index(k, h->target);
                            H.add(to, from, f * h->amp);
                        }
                        if (auto h = own.hop(i, e, o)) {
                            int to = s == Species::up ? B.index(h->target, k) : B.index(k, h->target);
                            H.add(to, from, -f * h->amp);
                        }
                    }
                }
            }
        }
    }

    const bool dis = terms.disorder && p.disorder_lambda > 0;
    std::array<std::vector<double>, 2> eps;
    if (dis) eps = disorder_field(p);
    if (terms.loss || dis) {
        for (int idx = 0; idx < B.dim(); ++idx) {
            auto [cu, cd] = B.configs(idx);
            cplx d = 0;
            for (Species s : {Species::up, Species::dn}) {
                const Config& c = s == Species::up ? cu : cd;
                for (int i = 0; i < c.n; ++i) {
                    int j = c.site[i];
                    if (terms.loss && j % 2 == 1) d += cplx(0, -p.gamma(s));
                    if (dis) d += p.disorder_lambda * eps[index_of(s)][j];
                }
            }
            H.add(idx, idx, d);
        }
    }
    H.finalize();
    return H;
}

inline OperatorMatrix build_hamiltonian(const ModelParams& p, const StateIndexer& B)
{
    return build_terms(p, B, Terms::all());
}

// Occupation number n_{s,site} with 1-based site.
inline OperatorMatrix build_number_operator(Species s, int site, const StateIndexer& B)
{
    if (site < 1 || site > B.L()) throw std::out_of_range("site index out of range");
    OperatorMatrix n(B.dim());
    for (int idx = 0; idx < B.dim(); ++idx) n.add(idx, idx, B.occupation(idx, s, site - 1));
    n.finalize();
    return n;
}

// Total particle number of species s times the identity.
inline OperatorMatrix build_total_number(Species s, const StateIndexer& B)
{
    OperatorMatrix n(B.dim());
    for (int idx = 0; idx < B.dim(); ++idx) n.add(idx, idx, B.spec().n(s));
    n.finalize();
    return n;
}

struct GaugeTransform
{
    ModelParams params;                       // v -> |v| on flipped species
    std::array<std::vector<int>, 2> site_sign; // +-1 per 0-based site
    std::array<bool, 2> momentum_shift_pi{false, false};
    std::vector<int> state_sign;              // diagonal of U on a basis, filled by apply_gauge_transform(p, B)
};

// Cell-alternating sign a_{2j-1}, a_{2j} -> (-1)^(j-1) on every species with
// v < 0, which flips the sign of v and shifts momenta by pi.
inline GaugeTransform apply_gauge_transform(const ModelParams& p)
{
    GaugeTransform g;
    g.params = p;
    for (Species s : {Species::up, Species::dn}) {
        auto& sign = g.site_sign[index_of(s)];
        sign.assign(p.L, 1);
        if (p.v(s) >= 0) continue;
        if (p.bc(s) == Boundary::periodic && (p.L / 2) % 2 != 0)
            throw std::invalid_argument("cell-alternating gauge needs an even number of cells under periodic boundaries");
        for (int j = 0; j < p.L; ++j) sign[j] = ((j / 2) % 2 == 0) ? 1 : -1;
        g.params.set_v(s, -p.v(s));
        g.momentum_shift_pi[index_of(s)] = true;
    }
    return g;
}

inline GaugeTransform apply_gauge_transform(const ModelParams& p, const StateIndexer& B)
{
    GaugeTransform g = apply_gauge_transform(p);
    g.state_sign.resize(B.dim());
    for (int idx = 0; idx < B.dim(); ++idx) {
        auto [cu, cd] = B.configs(idx);
        int sg = 1;
        for (int i = 0; i < cu.n; ++i) sg *= g.site_sign[0][cu.site[i]];
        for (int i = 0; i < cd.n; ++i) sg *= g.site_sign[1][cd.site[i]];
        g.state_sign[idx] = sg;
    }
    return g;
}

} // namespace dgf
