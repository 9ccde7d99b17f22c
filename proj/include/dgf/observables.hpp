#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include <Eigen/Eigenvalues>

#include "basis.hpp"
#include "operator.hpp"

namespace dgf {

enum class Normalization { right_unit, biorthogonal_pair };

struct StateVector
{
    const StateIndexer* basis = nullptr;
    VecC amp;
    Normalization mode = Normalization::right_unit;

    StateVector() = default;
    StateVector(const StateIndexer& b, VecC a, Normalization m = Normalization::right_unit)
        : basis(&b), amp(std::move(a)), mode(m)
    {
        if (amp.size() != b.dim()) throw std::invalid_argument("state length does not match the basis dimension");
    }

    static StateVector normalized(const StateIndexer& b, VecC a)
    {
        double n = a.norm();
        if (!(n > 0)) throw std::invalid_argument("cannot normalize a zero state");
        return StateVector(b, a / n);
    }

    // Product state with the given 1-based sites of each species.
    static StateVector product(const StateIndexer& b, std::vector<int> up_sites, std::vector<int> dn_sites)
    {
        auto conf = [](std::vector<int> s) {
            Config c;
            c.n = static_cast<int>(s.size());
            for (int i = 0; i < c.n; ++i) c.site[i] = s[i] - 1;
            return c;
        };
        int idx = b.index(conf(up_sites), conf(dn_sites));
        if (idx < 0) throw std::invalid_argument("product state is not in the basis");
        VecC a = VecC::Zero(b.dim());
        a(idx) = 1.0;
        return StateVector(b, a);
    }
};

namespace detail {

inline void require_unit(const StateVector& psi)
{
    if (!psi.basis) throw std::invalid_argument("state has no basis");
    if (std::abs(psi.amp.squaredNorm() - 1.0) > 1e-10) throw std::invalid_argument("state is not right-unit normalized");
}

} // namespace detail

// <n_{s,j}> for j = 1..L, stored at index j-1.
inline VecR density_profile(const StateVector& psi, Species s)
{
    detail::require_unit(psi);
    const StateIndexer& B = *psi.basis;
    VecR n = VecR::Zero(B.L());
    for (int idx = 0; idx < B.dim(); ++idx) {
        double p = std::norm(psi.amp(idx));
        if (p == 0) continue;
        auto [cu, cd] = B.configs(idx);
        const Config& c = s == Species::up ? cu : cd;
        for (int i = 0; i < c.n; ++i) n(c.site[i]) += p;
    }
    return n;
}

// <psi_L| n_{s,j} |psi_R> for all j, the left state given as a ket.
inline VecC biorthogonal_density(const StateVector& left, const StateVector& right, Species s)
{
    if (!left.basis || left.basis != right.basis) throw std::invalid_argument("states must share a basis");
    cplx ov = left.amp.dot(right.amp);
    if (std::abs(ov - 1.0) > 1e-8) throw std::invalid_argument("left and right states are not biorthonormal");
    const StateIndexer& B = *right.basis;
    VecC n = VecC::Zero(B.L());
    for (int idx = 0; idx < B.dim(); ++idx) {
        cplx p = std::conj(left.amp(idx)) * right.amp(idx);
        if (p == cplx(0)) continue;
        auto [cu, cd] = B.configs(idx);
        const Config& c = s == Species::up ? cu : cd;
        for (int i = 0; i < c.n; ++i) n(c.site[i]) += p;
    }
    return n;
}

// <n_{dn,1} - n_{dn,L}>
inline double edge_imbalance(const StateVector& psi)
{
    VecR n = density_profile(psi, Species::dn);
    return n(0) - n(n.size() - 1);
}

inline double mean_position(const StateVector& psi, Species s)
{
    VecR n = density_profile(psi, s);
    double num = 0, den = 0;
    for (int j = 0; j < n.size(); ++j) {
        num += (j + 1) * n(j);
        den += n(j);
    }
    return num / den;
}

// Reduced density matrix of the down species for one particle per species.
inline MatC reduced_density_dn(const StateVector& psi)
{
    detail::require_unit(psi);
    const StateIndexer& B = *psi.basis;
    if (B.spec().n_up != 1 || B.spec().n_dn != 1)
        throw std::invalid_argument("reduced density matrix is defined for one particle per species");
    const int L = B.L();
    Eigen::Map<const Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>> A(psi.amp.data(), L, L);
    return A.adjoint() * A;
}

// Inter-species entanglement entropy in bits.
inline double entanglement_entropy(const StateVector& psi)
{
    MatC rho = reduced_density_dn(psi);
    Eigen::SelfAdjointEigenSolver<MatC> es(rho, Eigen::EigenvaluesOnly);
    double s = 0;
    for (int i = 0; i < es.eigenvalues().size(); ++i) {
        double w = es.eigenvalues()(i);
        if (w > 1e-300) s -= w * std::log2(w);
    }
    return std::max(0.0, s);
}

struct Correlation
{
    MatR raw;         // Gamma or G
    MatR normalized;  // raw / max
};

struct ComplexCorrelation
{
    MatC raw;
    MatC normalized;  // raw / max |entry|
};

namespace detail {

template <class Weight, class Acc>
void accumulate_pair(const StateIndexer& B, Weight weight, Acc& out)
{
    for (int idx = 0; idx < B.dim(); ++idx) {
        auto w = weight(idx);
        if (w == decltype(w)(0)) continue;
        auto [cu, cd] = B.configs(idx);
        for (int a = 0; a < cu.n; ++a)
            for (int b = 0; b < cd.n; ++b) out(cu.site[a], cd.site[b]) += w;
    }
}

inline double max_abs(const MatR& m) { return m.cwiseAbs().maxCoeff(); }
inline double max_abs(const MatC& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace detail

// Gamma_{j,j'} = <n_{up,j} n_{dn,j'}>
inline Correlation interspecies_correlation(const StateVector& psi)
{
    detail::require_unit(psi);
    const StateIndexer& B = *psi.basis;
    Correlation c;
    c.raw = MatR::Zero(B.L(), B.L());
    detail::accumulate_pair(B, [&](int i) { return std::norm(psi.amp(i)); }, c.raw);
    double mx = detail::max_abs(c.raw);
    if (!(mx > 0)) throw std::logic_error("vanishing two-particle correlation");
    c.normalized = c.raw / mx;
    return c;
}

// Biorthogonal variant <psi_L| n_{up,j} n_{dn,j'} |psi_R>; complex values kept.
inline ComplexCorrelation interspecies_correlation(const StateVector& left, const StateVector& right)
{
    if (!left.basis || left.basis != right.basis) throw std::invalid_argument("states must share a basis");
    const StateIndexer& B = *right.basis;
    ComplexCorrelation c;
    c.raw = MatC::Zero(B.L(), B.L());
    detail::accumulate_pair(B, [&](int i) { return std::conj(left.amp(i)) * right.amp(i); }, c.raw);
    double mx = detail::max_abs(c.raw);
    if (!(mx > 0)) throw std::logic_error("vanishing two-particle correlation");
    c.normalized = c.raw / mx;
    return c;
}

// G^s_{j,j'} = <a+_j a+_j' a_j' a_j> = <n_j n_j'> - delta_jj' <n_j>
inline Correlation intraspecies_correlation(const StateVector& psi, Species s)
{
    detail::require_unit(psi);
    const StateIndexer& B = *psi.basis;
    if (B.spec().n(s) < 2) throw std::invalid_argument("intra-species correlation needs two particles of the species");
    const int L = B.L();
    Correlation c;
    c.raw = MatR::Zero(L, L);
    for (int idx = 0; idx < B.dim(); ++idx) {
        double p = std::norm(psi.amp(idx));
        if (p == 0) continue;
        auto [cu, cd] = B.configs(idx);
        const Config& cf = s == Species::up ? cu : cd;
        // ordered pairs of distinct particles
        for (int a = 0; a < cf.n; ++a)
            for (int b = 0; b < cf.n; ++b)
                if (a != b) c.raw(cf.site[a], cf.site[b]) += p;
    }
    double mx = detail::max_abs(c.raw);
    if (!(mx > 0)) throw std::logic_error("vanishing two-particle correlation");
    c.normalized = c.raw / mx;
    return c;
}

// Fraction of |entries| with |j - j'| <= width.
template <class Mat>
double diagonal_mass(const Mat& m, int width = 2)
{
    double in = 0, tot = 0;
    for (int i = 0; i < m.rows(); ++i)
        for (int j = 0; j < m.cols(); ++j) {
            double a = std::abs(m(i, j));
            tot += a;
            if (std::abs(i - j) <= width) in += a;
        }
    return tot > 0 ? in / tot : 0.0;
}

} // namespace dgf
