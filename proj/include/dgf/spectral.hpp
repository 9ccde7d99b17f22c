#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "basis.hpp"
#include "hamiltonian.hpp"
#include "lapack.hpp"
#include "operator.hpp"

namespace dgf {

struct EigenSystem
{
    VecC values;          // sorted by (Re, Im)
    MatC right;           // columns, unit 2-norm
    MatC left;            // rows, left * right = I where achievable; empty if not requested
    std::vector<int> group;     // degeneracy group id per eigenvalue
    std::vector<bool> defective; // group flagged as numerically defective

    int dim() const { return static_cast<int>(values.size()); }
    bool has_left() const { return left.size() > 0; }
    VecC right_vector(int m) const { return right.col(m); }
    // |psi_L> as a ket, so that <psi_L|psi_R> = left.row(m) * right.col(m)
    VecC left_ket(int m) const { return left.row(m).adjoint(); }
};

struct SpectralOptions
{
    int max_dim = 8192;
    double group_tol = 1e-8;    // relative to the matrix scale
    double defect_tol = 1e-10;  // smallest singular value of a group's overlap matrix
};

inline double matrix_scale(const MatC& h)
{
    double s = h.cwiseAbs().maxCoeff();
    return s > 0 ? s : 1.0;
}

inline std::vector<int> sort_order(const VecC& w)
{
    std::vector<int> ord(w.size());
    std::iota(ord.begin(), ord.end(), 0);
    std::stable_sort(ord.begin(), ord.end(), [&](int a, int b) {
        if (w(a).real() != w(b).real()) return w(a).real() < w(b).real();
        return w(a).imag() < w(b).imag();
    });
    return ord;
}

// Connected components of eigenvalues closer than tol.
inline std::vector<int> degeneracy_groups(const VecC& w, double tol)
{
    const int n = static_cast<int>(w.size());
    std::vector<int> parent(n);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    // scan in real-part order so only a narrow window needs pairwise checks
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return w(a).real() < w(b).real(); });
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n && w(ord[j]).real() - w(ord[i]).real() <= tol; ++j)
            if (std::abs(w(ord[i]) - w(ord[j])) <= tol) parent[find(ord[i])] = find(ord[j]);
    std::vector<int> id(n, -1), g(n);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        int r = find(i);
        if (id[r] < 0) id[r] = next++;
        g[i] = id[r];
    }
    return g;
}

inline EigenSystem eigensystem(const MatC& h, bool want_left, const SpectralOptions& opt = {})
{
    if (h.rows() != h.cols()) throw std::invalid_argument("eigensystem needs a square matrix");
    if (h.rows() > opt.max_dim)
        throw std::invalid_argument("matrix dimension " + std::to_string(h.rows()) + " exceeds the cap " +
                                    std::to_string(opt.max_dim));
    VecC w;
    MatC vl, vr;
    lapack::geev(h, w, want_left ? &vl : nullptr, &vr);

    const auto ord = sort_order(w);
    const int n = static_cast<int>(w.size());
    EigenSystem es;
    es.values.resize(n);
    es.right.resize(n, n);
    for (int i = 0; i < n; ++i) {
        es.values(i) = w(ord[i]);
        es.right.col(i) = vr.col(ord[i]).normalized();
    }
    es.group = degeneracy_groups(es.values, opt.group_tol * matrix_scale(h));
    const int ng = es.group.empty() ? 0 : *std::max_element(es.group.begin(), es.group.end()) + 1;
    es.defective.assign(ng, false);
    if (!want_left) return es;

    MatC u(n, n);
    for (int i = 0; i < n; ++i) u.col(i) = vl.col(ord[i]);
    es.left.resize(n, n);
    std::vector<std::vector<int>> members(ng);
    for (int i = 0; i < n; ++i) members[es.group[i]].push_back(i);
    for (int g = 0; g < ng; ++g) {
        const auto& mem = members[g];
        const int k = static_cast<int>(mem.size());
        MatC ug(n, k), vg(n, k);
        for (int a = 0; a < k; ++a) {
            ug.col(a) = u.col(mem[a]);
            vg.col(a) = es.right.col(mem[a]);
        }
        MatC gram = ug.adjoint() * vg;
        Eigen::JacobiSVD<MatC> svd(gram);
        double smin = svd.singularValues().minCoeff();
        if (smin < opt.defect_tol) {
            // near-defective: keep the raw left vectors rescaled one by one
            es.defective[g] = true;
            for (int a = 0; a < k; ++a) {
                cplx ov = ug.col(a).dot(vg.col(a));
                es.left.row(mem[a]) = ug.col(a).adjoint() / (std::abs(ov) > 0 ? ov : cplx(1));
            }
            continue;
        }
        MatC wg = gram.inverse() * ug.adjoint();
        for (int a = 0; a < k; ++a) es.left.row(mem[a]) = wg.row(a);
    }
    return es;
}

inline EigenSystem eigensystem(const OperatorMatrix& h, bool want_left, const SpectralOptions& opt = {})
{
    return eigensystem(h.dense(), want_left, opt);
}

// Eigenvalues only, sorted by (Re, Im).
inline VecC eigenvalues(const MatC& h)
{
    VecC w;
    lapack::geev(h, w, nullptr, nullptr);
    const auto ord = sort_order(w);
    VecC out(w.size());
    for (int i = 0; i < w.size(); ++i) out(i) = w(ord[i]);
    return out;
}

// Max over m of |H v_m - E_m v_m| / |H|.
inline double max_residual(const MatC& h, const EigenSystem& es)
{
    double nh = h.norm();
    if (nh == 0) nh = 1;
    MatC r = h * es.right - es.right * es.values.asDiagonal();
    return r.colwise().norm().maxCoeff() / nh;
}

inline double biorthogonality_defect(const EigenSystem& es)
{
    MatC d = es.left * es.right - MatC::Identity(es.dim(), es.dim());
    return d.cwiseAbs().maxCoeff();
}

// Right eigenvector for an isolated eigenvalue by shifted inverse iteration.
inline VecC inverse_iteration(const MatC& h, cplx lambda, int iterations = 4, double* residual = nullptr)
{
    const int n = static_cast<int>(h.rows());
    const double offset = 1e-10 * matrix_scale(h);
    MatC a = h;
    a.diagonal().array() -= lambda + cplx(offset, offset);
    lapack::LU lu(a);
    if (lu.singular()) throw NumericalError("shifted matrix is exactly singular in inverse iteration");
    VecC x(n);
    for (int i = 0; i < n; ++i) x(i) = cplx(1.0 + 0.001 * (i % 7), 0.001 * (i % 5));
    x.normalize();
    for (int it = 0; it < iterations; ++it) {
        x = lu.solve(x);
        if (!x.allFinite()) throw NumericalError("inverse iteration produced nonfinite amplitudes");
        x.normalize();
    }
    if (residual) *residual = (h * x - lambda * x).norm() / h.norm();
    return x;
}

struct PairingReport
{
    int pairs = 0;
    int singletons = 0;
    int unpaired = 0;
    double max_defect = 0.0;
};

// Split shifted eigenvalues into conjugate pairs and real singletons.
inline PairingReport pt_pairing_report(const VecC& e, cplx shift, double tol)
{
    const int n = static_cast<int>(e.size());
    std::vector<cplx> z(n);
    for (int i = 0; i < n; ++i) z[i] = e(i) + shift;
    PairingReport rep;
    std::vector<bool> used(n, false);
    std::vector<int> ord(n);
    std::iota(ord.begin(), ord.end(), 0);
    std::sort(ord.begin(), ord.end(), [&](int a, int b) { return z[a].real() < z[b].real(); });
    for (int i = 0; i < n; ++i) {
        if (std::abs(z[i].imag()) <= tol) {
            used[i] = true;
            ++rep.singletons;
        }
    }
    for (int ii = 0; ii < n; ++ii) {
        int i = ord[ii];
        if (used[i]) continue;
        used[i] = true;
        int best = -1;
        double bd = std::numeric_limits<double>::infinity();
        for (int jj = 0; jj < n; ++jj) {
            int j = ord[jj];
            if (used[j]) continue;
            double d = std::abs(z[j] - std::conj(z[i]));
            if (d < bd) {
                bd = d;
                best = j;
            }
        }
        if (best < 0 || bd > std::max(tol, 1e-3)) {
            ++rep.unpaired;
            continue;
        }
        used[best] = true;
        ++rep.pairs;
        rep.max_defect = std::max(rep.max_defect, bd);
    }
    return rep;
}

inline double condition_number(const MatC& v)
{
    MatC vn = v;
    for (int i = 0; i < vn.cols(); ++i) vn.col(i).normalize();
    VecR s = lapack::singular_values(vn);
    double smin = s.minCoeff(), smax = s.maxCoeff();
    if (!(smin > 0) || !std::isfinite(smax / smin)) return std::numeric_limits<double>::infinity();
    return smax / smin;
}

inline double condition_number(const EigenSystem& es) { return condition_number(es.right); }

struct Petermann
{
    double K = 1.0;
    bool near_defective = false;
};

inline Petermann petermann_factor(const EigenSystem& es, int m, double cap = 1e16)
{
    if (!es.has_left()) throw std::invalid_argument("Petermann factor needs left eigenvectors");
    VecC l = es.left_ket(m), r = es.right.col(m);
    double ov = std::abs(l.dot(r));
    double num = l.squaredNorm() * r.squaredNorm();
    Petermann p;
    if (ov * ov * cap <= num || (m < static_cast<int>(es.group.size()) && es.defective[es.group[m]])) {
        p.K = cap;
        p.near_defective = true;
        return p;
    }
    p.K = num / (ov * ov);
    return p;
}

// Loss shift i sum_s gamma_s N_s / 2 that centres the spectrum.
inline cplx pt_shift(const ModelParams& p, const BasisSpec& spec)
{
    return cplx(0, 0.5 * (p.gamma_up * spec.n_up + p.gamma_dn * spec.n_dn));
}

// Signed basis permutation for the site reversal j -> L+1-j of both species.
inline std::vector<std::pair<int, int>> reflection_map(const StateIndexer& B)
{
    const int L = B.L();
    std::vector<std::pair<int, int>> map(B.dim());
    for (int idx = 0; idx < B.dim(); ++idx) {
        auto [cu, cd] = B.configs(idx);
        int sign = 1;
        auto flip = [&](Config c, Statistics st) {
            for (int i = 0; i < c.n; ++i) c.site[i] = L - 1 - c.site[i];
            if (c.n == 2 && st == Statistics::fermion) sign = -sign; // reordering two fermions
            return c;
        };
        Config ru = flip(cu, B.spec().stat_up), rd = flip(cd, B.spec().stat_dn);
        map[idx] = {B.index(ru, rd), sign};
    }
    return map;
}

// |P conj(H_s) P - H_s| in the Frobenius norm.
inline double pt_defect(const OperatorMatrix& h, const ModelParams& p, const StateIndexer& B)
{
    const cplx shift = pt_shift(p, B.spec());
    const auto map = reflection_map(B);
    OperatorMatrix d(B.dim());
    for (const Entry& e : h.entries()) {
        d.add(e.row, e.col, -e.value);
        auto [r, sr] = map[e.row];
        auto [c, sc] = map[e.col];
        d.add(r, c, std::conj(e.value) * double(sr * sc));
    }
    for (int idx = 0; idx < B.dim(); ++idx) {
        d.add(idx, idx, -shift);
        d.add(map[idx].first, map[idx].first, std::conj(shift));
    }
    d.finalize();
    return d.frobenius();
}

inline double pt_defect(const ModelParams& p, const StateIndexer& B)
{
    return pt_defect(build_hamiltonian(p, B), p, B);
}

} // namespace dgf
