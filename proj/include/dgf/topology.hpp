#pragma once

#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>

#include "hamiltonian.hpp"
#include "operator.hpp"
#include "params.hpp"

namespace dgf {

// Parameters sit on a gap-closing line where the indicators are undefined.
struct CriticalPoint : std::domain_error
{
    using std::domain_error::domain_error;
};

inline double bloch_phase(double u, double v, double k) { return std::arg(cplx(u, 0) + v * std::polar(1.0, -k)); }

struct BlochData
{
    Species species;
    std::vector<double> k;       // 4 pi m / L, m = 0 .. L/2-1
    std::vector<double> phi;     // arg(u + v e^{-ik})
    std::vector<double> energy;  // upper band |u + v e^{-ik}|, lower band is its negative
};

inline std::vector<double> momentum_grid(int L)
{
    std::vector<double> k(L / 2);
    for (int m = 0; m < L / 2; ++m) k[m] = 4.0 * std::numbers::pi * m / L;
    return k;
}

inline BlochData bloch_data(const ModelParams& p, Species s)
{
    BlochData b;
    b.species = s;
    b.k = momentum_grid(p.L);
    for (double k : b.k) {
        b.phi.push_back(bloch_phase(p.u(s), p.v(s), k));
        b.energy.push_back(std::abs(cplx(p.u(s), 0) + p.v(s) * std::polar(1.0, -k)));
    }
    return b;
}

struct Indicators
{
    int I0 = 0, Ipi = 0, Isin = 0;
};

inline bool is_critical(double u, double v)
{
    const double scale = std::max({std::abs(u), std::abs(v), 1e-300});
    return std::abs(u + v) <= 1e-14 * scale || std::abs(u - v) <= 1e-14 * scale;
}

inline Indicators single_particle_indicators(double u, double v)
{
    if (is_critical(u, v)) throw CriticalPoint("gap closes at u = +-v; indicators undefined");
    Indicators I;
    I.I0 = (u + v) > 0 ? -1 : 1;
    I.Ipi = (u - v) > 0 ? -1 : 1;
    I.Isin = I.I0 * I.Ipi;
    return I;
}

inline Indicators single_particle_indicators(const ModelParams& p, Species s)
{
    return single_particle_indicators(p.u(s), p.v(s));
}

namespace detail {

// Lower-band eigenvector of the 2x2 Bloch Hamiltonian at momentum k.
inline Eigen::Vector2cd lower_band(double u, double v, double k)
{
    cplx q = cplx(u, 0) + v * std::polar(1.0, -k);
    Eigen::Matrix2cd h;
    h << 0, q, std::conj(q), 0;
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix2cd> es(h);
    return es.eigenvectors().col(0);
}

inline int sign_of(double x, const char* what)
{
    if (std::abs(std::abs(x) - 1.0) > 1e-8) throw std::logic_error(std::string("expectation value not +-1 for ") + what);
    return x > 0 ? 1 : -1;
}

} // namespace detail

struct PhaseLabel
{
    int I00 = 0, Ipp = 0, I0p = 0, Ip0 = 0;
    int Iext = 0;
    Indicators up, dn;
    bool bulk_bound_pt_broken = false;   // predictor for the bulk bound pair
    bool bulk_bound_applicable = false;  // false in the all-trivial phase
    bool single_pt_broken_up = false;
    bool single_pt_broken_dn = false;
    bool edge_confined_possible = false;

    std::string label() const
    {
        auto c = [](int x) { return x > 0 ? '+' : '-'; };
        return std::string("{") + c(I00) + c(Ipp) + c(I0p) + "}";
    }
    // 0..7 from the bit pattern of (I00, Ipp, I0p), minus sign -> bit set
    int code() const { return (I00 < 0 ? 4 : 0) + (Ipp < 0 ? 2 : 0) + (I0p < 0 ? 1 : 0); }
};

// I_{k k'} = <sigma_x x sigma_x> on the product of lower-band states.
inline PhaseLabel interspecies_invariants(const ModelParams& p)
{
    PhaseLabel lab;
    lab.up = single_particle_indicators(p, Species::up);
    lab.dn = single_particle_indicators(p, Species::dn);
    Eigen::Matrix4cd sxx = Eigen::Matrix4cd::Zero();
    sxx(0, 3) = sxx(1, 2) = sxx(2, 1) = sxx(3, 0) = 1.0;
    auto inv = [&](double ku, double kd) {
        Eigen::Vector2cd a = detail::lower_band(p.u_up, p.v_up, ku);
        Eigen::Vector2cd b = detail::lower_band(p.u_dn, p.v_dn, kd);
        Eigen::Vector4cd ab;
        ab << a(0) * b(0), a(0) * b(1), a(1) * b(0), a(1) * b(1);
        return detail::sign_of(ab.dot(sxx * ab).real(), "I_kk'");
    };
    const double pi = std::numbers::pi;
    lab.I00 = inv(0, 0);
    lab.Ipp = inv(pi, pi);
    lab.I0p = inv(0, pi);
    lab.Ip0 = inv(pi, 0);
    if (lab.I00 != lab.up.I0 * lab.dn.I0 || lab.Ipp != lab.up.Ipi * lab.dn.Ipi || lab.I0p != lab.up.I0 * lab.dn.Ipi ||
        lab.Ip0 != lab.up.Ipi * lab.dn.I0)
        throw std::logic_error("inter-species invariants do not factorize");
    lab.Iext = lab.I00 * lab.Ipp;
    return lab;
}

inline bool single_particle_pt_broken(double u, double v, double gamma)
{
    return gamma * gamma > 4.0 * (u * u + v * v - 2.0 * std::abs(u * v));
}

// Invariants plus the PT-transition predictors of each phase.
inline PhaseLabel classify_phase(const ModelParams& p)
{
    PhaseLabel lab = interspecies_invariants(p);
    const double t = p.t;
    const std::string s = lab.label();
    lab.bulk_bound_applicable = true;
    if (s == "{---}" || s == "{++-}")
        lab.bulk_bound_pt_broken = std::abs(p.u_up + p.u_dn) < 2.0 * t;
    else if (s == "{+--}")
        lab.bulk_bound_pt_broken = std::abs(p.u_up - p.v_up / 2 + (p.u_dn / 2 - p.v_dn)) < t;
    else if (s == "{-++}")
        lab.bulk_bound_pt_broken = std::abs(p.u_up - p.v_up / 2 - (p.u_dn / 2 - p.v_dn)) < t;
    else if (s == "{+-+}")
        lab.bulk_bound_pt_broken = std::abs(p.u_dn - p.v_dn / 2 + (p.u_up / 2 - p.v_up)) < t;
    else if (s == "{-+-}")
        lab.bulk_bound_pt_broken = std::abs(p.u_dn - p.v_dn / 2 - (p.u_up / 2 - p.v_up)) < t;
    else
        lab.bulk_bound_applicable = false;
    lab.single_pt_broken_up = single_particle_pt_broken(p.u_up, p.v_up, p.gamma_up);
    lab.single_pt_broken_dn = single_particle_pt_broken(p.u_dn, p.v_dn, p.gamma_dn);
    lab.edge_confined_possible = lab.up.Isin * lab.dn.Isin == -1;
    return lab;
}

enum class Sector { zero, pi };

inline double sector_momentum(Sector K) { return K == Sector::zero ? 0.0 : std::numbers::pi; }

inline Sector parse_sector(double K)
{
    if (K == 0.0) return Sector::zero;
    if (K == std::numbers::pi) return Sector::pi;
    throw std::invalid_argument("total momentum must be 0 or pi");
}

inline void require_sector(int L, Sector K)
{
    if (K == Sector::pi && L % 4 != 0)
        throw std::invalid_argument("the K = pi sector lies on the momentum grid only when L is a multiple of 4");
}

// Gauge-field matrix between opposite-band Bloch pairs |a, -a>(k, K-k).
// Index a*L/2 + m, with a = 0 for (+,-) and a = 1 for (-,+).
inline MatR m_matrix(const ModelParams& p, Sector K)
{
    p.validate_lattice();
    require_sector(p.L, K);
    const int L = p.L, n = L / 2;
    const auto ks = momentum_grid(L);
    const double Kv = sector_momentum(K);
    std::vector<double> pu(n), pd(n);
    for (int m = 0; m < n; ++m) {
        pu[m] = bloch_phase(p.u_up, p.v_up, ks[m]);
        pd[m] = bloch_phase(p.u_dn, p.v_dn, Kv - ks[m]);
    }
    const double pre = p.include_dgf ? 2.0 * p.t / L : 0.0;
    MatR M = MatR::Zero(L, L);
    for (int ap = 0; ap < 2; ++ap) {
        const double sg = ap == 0 ? pre : -pre;
        for (int a = 0; a < 2; ++a)
            for (int mp = 0; mp < n; ++mp)
                for (int m = 0; m < n; ++m) {
                    const double su = pu[m] + pu[mp], du = pu[m] - pu[mp];
                    const double sd = pd[m] + pd[mp], dd = pd[m] - pd[mp];
                    double val;
                    if (a == ap)
                        val = std::sin(su / 2) * std::sin(dd / 2) - std::sin(du / 2) * std::sin(sd / 2);
                    else
                        val = std::cos(du / 2) * std::cos(sd / 2) - std::cos(su / 2) * std::cos(dd / 2);
                    M(ap * n + mp, a * n + m) = sg * val;
                }
    }
    return M;
}

// Sum of squared gauge-field elements over both high-symmetry sectors.
inline double dgf_magnitude(const ModelParams& p)
{
    return m_matrix(p, Sector::zero).squaredNorm() + m_matrix(p, Sector::pi).squaredNorm();
}

enum class BbsMode { sum, integral };

namespace detail {

inline double simpson_adaptive(const std::function<double(double)>& f, double a, double b, double fa, double fm,
                               double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b), lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6 * (fa + 4 * flm + fm), right = (b - m) / 6 * (fm + 4 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15 * tol) return left + right + diff / 15;
    return simpson_adaptive(f, a, m, fa, flm, fm, left, tol / 2, depth - 1) +
           simpson_adaptive(f, m, b, fm, frm, fb, right, tol / 2, depth - 1);
}

} // namespace detail

// Adaptive Simpson on [a, b] with absolute tolerance tol.
inline double integrate(const std::function<double(double)>& f, double a, double b, double tol, int max_depth = 30)
{
    // split into a few panels first so periodic integrands are not undersampled
    const int panels = 8;
    double s = 0;
    for (int i = 0; i < panels; ++i) {
        double x0 = a + (b - a) * i / panels, x1 = a + (b - a) * (i + 1) / panels;
        double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
        double whole = (x1 - x0) / 6 * (f0 + 4 * fm + f1);
        s += detail::simpson_adaptive(f, x0, x1, f0, fm, f1, whole, tol / panels, max_depth);
    }
    return s;
}

// a2 of the bulk bound pair from the double momentum sum or its L -> infinity integral.
inline double bbs_a2(const ModelParams& p, Sector K, BbsMode mode)
{
    p.validate_lattice();
    const double Kv = sector_momentum(K);
    const double t = p.include_dgf ? p.t : 0.0;
    auto A = [&](double k) {
        return 1.0 - std::cos(bloch_phase(p.u_up, p.v_up, k)) * std::cos(bloch_phase(p.u_dn, p.v_dn, Kv - k));
    };
    auto S = [&](double k) {
        return std::sin(bloch_phase(p.u_up, p.v_up, k)) * std::sin(bloch_phase(p.u_dn, p.v_dn, Kv - k));
    };
    double a2;
    if (mode == BbsMode::sum) {
        require_sector(p.L, K);
        const auto ks = momentum_grid(p.L);
        std::vector<double> av, sv;
        for (double k : ks) {
            av.push_back(A(k));
            sv.push_back(S(k));
        }
        double acc = 0;
        for (std::size_t i = 0; i < ks.size(); ++i)
            for (std::size_t j = 0; j < ks.size(); ++j) acc += av[i] * av[j] - sv[i] * sv[j];
        a2 = 4.0 * t * t / (double(p.L) * p.L) * acc;
    } else {
        const double pi = std::numbers::pi;
        // the double integral factorizes into (int A)^2 - (int S)^2
        const double IA = integrate(A, -pi, pi, 1e-13), IS = integrate(S, -pi, pi, 1e-13);
        a2 = t * t / (4 * pi * pi) * (IA * IA - IS * IS);
    }
    // sum-of-squares identity; only roundoff can push it below zero
    if (a2 < -1e-12 * std::max(1.0, t * t)) throw NumericalError("negative a2 in bulk bound energy");
    return std::max(a2, 0.0);
}

inline std::pair<cplx, cplx> bbs_energy(const ModelParams& p, Sector K, BbsMode mode)
{
    double r = std::sqrt(bbs_a2(p, K, mode));
    return {cplx(0, r), cplx(0, -r)};
}

// Two-level projection of the model onto a pair of ansatz states.
enum class AnsatzFamily { mmm, ppm, pmm, mpp };

inline const char* to_string(AnsatzFamily f)
{
    switch (f) {
    case AnsatzFamily::mmm: return "mmm";
    case AnsatzFamily::ppm: return "ppm";
    case AnsatzFamily::pmm: return "pmm";
    case AnsatzFamily::mpp: return "mpp";
    }
    return "?";
}

inline AnsatzFamily parse_family(const std::string& s)
{
    if (s == "mmm") return AnsatzFamily::mmm;
    if (s == "ppm") return AnsatzFamily::ppm;
    if (s == "pmm") return AnsatzFamily::pmm;
    if (s == "mpp") return AnsatzFamily::mpp;
    throw std::invalid_argument("unknown ansatz family '" + s + "'");
}

// Phase label each family is built for.
inline std::string family_label(AnsatzFamily f)
{
    switch (f) {
    case AnsatzFamily::mmm: return "{---}";
    case AnsatzFamily::ppm: return "{++-}";
    case AnsatzFamily::pmm: return "{+--}";
    case AnsatzFamily::mpp: return "{-++}";
    }
    return "";
}

struct AnsatzResult
{
    Eigen::Matrix2cd projected;  // <psi_a|H|psi_b>, a,b in (+, -)
    Eigen::Matrix2cd aligned;    // same with the fixed relative phase of psi_- applied
    Eigen::Matrix2cd predicted;  // closed-form two-level model
    bool label_matches = false;  // phase label agrees with the family
    std::string label;
    double gram_defect = 0.0;    // |<psi_a|psi_b> - delta_ab|
};

// Ansatz pair psi_+ (col 0) and psi_- (col 1) on the n = 1 product basis.
inline MatC ansatz_states(int L, AnsatzFamily f)
{
    const int D = L * L;
    auto site = [L](int j) { return ((j - 1) % L + L) % L; }; // 1-based with wrap
    auto at = [&](int a, int b) { return site(a) * L + site(b); };
    MatC psi = MatC::Zero(D, 2);
    const double r2 = std::sqrt(2.0);
    for (int col = 0; col < 2; ++col) {
        const double s = col == 0 ? 1.0 : -1.0;
        for (int j = 1; j <= L / 2; ++j) {
            // a_{j,s} = (|2j-1> + s|2j>)/sqrt(2) amplitudes on the up species
            const std::array<std::pair<int, double>, 2> up{{{2 * j - 1, 1 / r2}, {2 * j, s / r2}}};
            switch (f) {
            case AnsatzFamily::mmm:
                for (auto [a, ca] : up)
                    for (auto [b, cb] : up) psi(at(a, b), col) += std::sqrt(2.0 / L) * ca * cb;
                break;
            case AnsatzFamily::ppm: {
                const double c = 1.0 / (2.0 * std::sqrt(double(L)));
                psi(at(2 * j - 1, 2 * j - 1), col) += c * r2;
                psi(at(2 * j, 2 * j), col) += c * r2;
                psi(at(2 * j - 1, 2 * j), col) += c * s;
                psi(at(2 * j, 2 * j - 1), col) += c * s;
                psi(at(2 * j, 2 * j + 3), col) += c * s;
                psi(at(2 * j + 3, 2 * j), col) += c * s;
                break;
            }
            case AnsatzFamily::pmm:
            case AnsatzFamily::mpp: {
                // down part |2j-2> -+ |2j-1> - |2j> +- |2j+1> for pmm,
                // |2j-2> +- |2j-1> + |2j> +- |2j+1> for mpp
                const bool p = f == AnsatzFamily::pmm;
                const std::array<std::pair<int, double>, 4> dn{{{2 * j - 2, 1.0},
                                                                {2 * j - 1, p ? -s : s},
                                                                {2 * j, p ? -1.0 : 1.0},
                                                                {2 * j + 1, s}}};
                const double c = 1.0 / std::sqrt(2.0 * L);
                for (auto [a, ca] : up)
                    for (auto [b, cb] : dn) psi(at(a, b), col) += c * ca * cb;
                break;
            }
            }
        }
    }
    return psi;
}

inline Eigen::Matrix2cd predicted_two_level(const ModelParams& p, AnsatzFamily f)
{
    const cplx I(0, 1);
    const double t = p.t;
    Eigen::Matrix2cd tz, tx, ty;
    tz << 1, 0, 0, -1;
    tx << 0, 1, 1, 0;
    ty << 0, -I, I, 0;
    switch (f) {
    case AnsatzFamily::mmm: return (p.u_up + p.u_dn) * tz + 2.0 * I * t * tx;
    case AnsatzFamily::ppm: return (p.u_up + p.u_dn) / std::sqrt(2.0) * tz + std::sqrt(2.0) * I * t * tx;
    case AnsatzFamily::pmm: return (p.u_up - p.v_up / 2 + p.u_dn / 2 - p.v_dn) * tz + I * t * ty;
    case AnsatzFamily::mpp: return (p.u_up - p.v_up / 2 - p.u_dn / 2 + p.v_dn) * tz + I * t * ty;
    }
    return Eigen::Matrix2cd::Zero();
}

// Relative phase c on psi_- that brings the projection into the tau_x / tau_y
// convention of the closed forms.
inline cplx ansatz_phase(AnsatzFamily f)
{
    return (f == AnsatzFamily::mmm || f == AnsatzFamily::ppm) ? cplx(0, -1) : cplx(1, 0);
}

inline AnsatzResult ansatz_two_level(const ModelParams& params, AnsatzFamily f)
{
    ModelParams p = params;
    p.gamma_up = p.gamma_dn = 0.0;
    p.bc_up = p.bc_dn = Boundary::periodic;
    p.disorder_lambda = 0.0;
    p.nrh_strength = 0.0;
    StateIndexer B(BasisSpec{}, p.L);
    OperatorMatrix H = build_hamiltonian(p, B);
    MatC psi = ansatz_states(p.L, f);
    AnsatzResult r;
    MatC hpsi(psi.rows(), 2);
    hpsi.col(0) = H.apply(psi.col(0));
    hpsi.col(1) = H.apply(psi.col(1));
    r.projected = psi.adjoint() * hpsi;
    r.gram_defect = (psi.adjoint() * psi - MatC::Identity(2, 2)).cwiseAbs().maxCoeff();
    Eigen::Matrix2cd D = Eigen::Matrix2cd::Identity();
    D(1, 1) = ansatz_phase(f);
    r.aligned = D.adjoint() * r.projected * D;
    r.predicted = predicted_two_level(p, f);
    try {
        r.label = interspecies_invariants(p).label();
        r.label_matches = r.label == family_label(f);
    } catch (const CriticalPoint&) {
        r.label = "critical";
        r.label_matches = false;
    }
    return r;
}

inline double max_imag_eigenvalue(const Eigen::Matrix2cd& m)
{
    Eigen::ComplexEigenSolver<Eigen::Matrix2cd> es(m);
    return std::max(es.eigenvalues()(0).imag(), es.eigenvalues()(1).imag());
}

} // namespace dgf
