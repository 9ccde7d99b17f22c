#pragma once

// Independent reference Hamiltonian: occupation-number vectors and literal
// application of creation/annihilation operators, no shared code with the
// library's basis or assembly besides the disorder draw.

#include <complex>
#include <map>
#include <vector>

#include <Eigen/Dense>

#include <dgf/basis.hpp>
#include <dgf/hamiltonian.hpp>

namespace oracle {

using cplx = std::complex<double>;

// occ[s][j], s = 0 up, 1 dn
struct Fock
{
    std::vector<int> occ[2];
    bool operator<(const Fock& o) const
    {
        return occ[0] != o.occ[0] ? occ[0] < o.occ[0] : occ[1] < o.occ[1];
    }
};

struct Ket
{
    cplx amp;
    Fock f;
};

struct Op
{
    enum Kind { create, annihilate, number } kind;
    int s, j;
};

// Applies ops right to left. Fermion signs: ordered by site within a species.
inline bool apply(const std::vector<Op>& ops, Ket& k, const bool fermion[2])
{
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        auto& o = k.f.occ[it->s];
        int& n = o[it->j];
        double sign = 1;
        if (fermion[it->s] && it->kind != Op::number) {
            int before = 0;
            for (int i = 0; i < it->j; ++i) before += o[i];
            sign = before % 2 ? -1 : 1;
        }
        switch (it->kind) {
        case Op::number: k.amp *= double(n); break;
        case Op::annihilate:
            if (n == 0) return false;
            k.amp *= sign * std::sqrt(double(n));
            --n;
            break;
        case Op::create:
            if (fermion[it->s] && n == 1) return false;
            k.amp *= sign * std::sqrt(double(n + 1));
            ++n;
            break;
        }
        if (k.amp == cplx(0)) return false;
    }
    return true;
}

struct Term
{
    cplx c;
    std::vector<Op> ops;
};

inline std::vector<Term> model_terms(const dgf::ModelParams& p)
{
    using K = Op::Kind;
    std::vector<Term> T;
    const int L = p.L;
    auto hop = [&](cplx c, int s, int x, int y) { T.push_back({c, {{K::create, s, x}, {K::annihilate, s, y}}}); };
    for (int s = 0; s < 2; ++s) {
        const double u = s == 0 ? p.u_up : p.u_dn, v = s == 0 ? p.v_up : p.v_dn;
        const dgf::Boundary bc = s == 0 ? p.bc_up : p.bc_dn;
        const double g = s == 0 ? p.gamma_up : p.gamma_dn;
        // 1-based cell j: sites 2j-1 and 2j are 0-based 2j-2 and 2j-1
        for (int j = 1; j <= L / 2; ++j) {
            int a = 2 * j - 2, b = 2 * j - 1;
            hop(u, s, a, b);
            hop(u, s, b, a);
            if (j < L / 2 || bc == dgf::Boundary::periodic) {
                int c = (b + 1) % L;
                hop(v, s, b, c);
                hop(v, s, c, b);
            }
            T.push_back({cplx(0, -g), {{K::number, s, b}}});
            if (p.nrh_strength > 0) {
                hop(p.nrh_strength, s, a, b);
                hop(-p.nrh_strength, s, b, a);
            }
            if (p.include_dgf) {
                const int o = 1 - s;
                // t n_o,a a+_s,a a_s,b - t n_o,b a+_s,a a_s,b, minus the adjoint
                T.push_back({p.t, {{K::number, o, a}, {K::create, s, a}, {K::annihilate, s, b}}});
                T.push_back({-p.t, {{K::number, o, b}, {K::create, s, a}, {K::annihilate, s, b}}});
                T.push_back({-p.t, {{K::create, s, b}, {K::annihilate, s, a}, {K::number, o, a}}});
                T.push_back({p.t, {{K::create, s, b}, {K::annihilate, s, a}, {K::number, o, b}}});
            }
        }
    }
    if (p.disorder_lambda > 0) {
        auto eps = dgf::disorder_field(p);
        for (int s = 0; s < 2; ++s)
            for (int j = 0; j < L; ++j) T.push_back({p.disorder_lambda * eps[s][j], {{K::number, s, j}}});
    }
    return T;
}

// All occupation vectors with n particles on L sites (brute force).
inline std::vector<std::vector<int>> species_states(int L, int n, bool fermion)
{
    std::vector<std::vector<int>> out;
    std::vector<int> occ(L, 0);
    const int cap = fermion ? 1 : n;
    auto rec = [&](auto&& self, int j, int left) -> void {
        if (j == L) {
            if (left == 0) out.push_back(occ);
            return;
        }
        for (int k = 0; k <= std::min(cap, left); ++k) {
            occ[j] = k;
            self(self, j + 1, left - k);
        }
        occ[j] = 0;
    };
    rec(rec, 0, n);
    return out;
}

// Reference matrix expressed in the library's index order, so the two can
// be compared entrywise. The library basis state for sites (a < b) is
// a+_a a+_b |0>, which is the site-ordered Fock state used here.
inline Eigen::MatrixXcd reference_matrix(const dgf::ModelParams& p, const dgf::StateIndexer& B)
{
    const auto& spec = B.spec();
    const bool fermion[2] = {spec.n_up == 2 && spec.stat_up == dgf::Statistics::fermion,
                             spec.n_dn == 2 && spec.stat_dn == dgf::Statistics::fermion};
    auto su = species_states(p.L, spec.n_up, fermion[0]);
    auto sd = species_states(p.L, spec.n_dn, fermion[1]);
    std::map<Fock, int> index;
    auto to_config = [](const std::vector<int>& occ) {
        dgf::Config c;
        c.n = 0;
        for (int j = 0; j < int(occ.size()); ++j)
            for (int k = 0; k < occ[j]; ++k) c.site[c.n++] = j;
        return c;
    };
    for (const auto& a : su)
        for (const auto& b : sd) {
            Fock f;
            f.occ[0] = a;
            f.occ[1] = b;
            index[f] = B.index(to_config(a), to_config(b));
        }
    const int D = static_cast<int>(index.size());
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(D, D);
    const auto terms = model_terms(p);
    for (const auto& [f, col] : index)
        for (const auto& term : terms) {
            Ket k{term.c, f};
            if (!apply(term.ops, k, fermion)) continue;
            H(index.at(k.f), col) += k.amp;
        }
    return H;
}

} // namespace oracle
