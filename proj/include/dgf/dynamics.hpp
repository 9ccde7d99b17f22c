#pragma once

#include <cmath>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "lapack.hpp"
#include "observables.hpp"
#include "operator.hpp"
#include "spectral.hpp"

namespace dgf {

enum class PropagationMethod { eig, expm_step };

struct PropagationOptions
{
    PropagationMethod method = PropagationMethod::eig;
    bool forbid_fallback = false;  // error instead of switching to expm steps
    double cond_threshold = 1e8;
    double step = 0.05;
};

struct Trajectory
{
    std::vector<double> times;
    std::vector<VecC> raw;         // e^{-iH tau} psi0, decay kept
    std::vector<VecC> normalized;
    std::vector<double> norm;      // <psi(tau)|psi(tau)>
    PropagationMethod used = PropagationMethod::eig;
    double cond = 0;               // cond(V) when the eigenbasis was tried
};

// Uniform grid 0, dt, ..., tmax (tmax included when it falls on the grid).
inline std::vector<double> time_grid(double tmax, double dt)
{
    if (!(dt > 0) || tmax < 0) throw std::invalid_argument("time grid needs dt > 0 and tmax >= 0");
    std::vector<double> g;
    const long n = std::lround(std::floor(tmax / dt + 1e-9));
    for (long i = 0; i <= n; ++i) g.push_back(i * dt);
    return g;
}

namespace detail {

inline void check_finite(const VecC& v, double tau)
{
    if (!v.allFinite()) throw NumericalError("nonfinite amplitudes at tau = " + std::to_string(tau));
}

inline void check_grid(const std::vector<double>& times)
{
    if (times.empty() || times.front() != 0.0) throw std::invalid_argument("time grid must start at 0");
    for (std::size_t i = 1; i < times.size(); ++i)
        if (!(times[i] > times[i - 1])) throw std::invalid_argument("time grid must be strictly ascending");
}

} // namespace detail

inline Trajectory propagate(const MatC& H, const VecC& psi0, const std::vector<double>& times,
                            const PropagationOptions& opt = {})
{
    detail::check_grid(times);
    if (psi0.size() != H.rows()) throw std::invalid_argument("initial state does not match the Hamiltonian");
    Trajectory tr;
    tr.times = times;
    const cplx mi(0, -1);

    bool use_eig = opt.method == PropagationMethod::eig;
    EigenSystem es;
    if (use_eig) {
        es = eigensystem(H, false);
        tr.cond = condition_number(es);
        if (!(tr.cond < opt.cond_threshold)) {
            if (opt.forbid_fallback)
                throw NumericalError("eigenbasis too ill-conditioned for spectral propagation (cond = " +
                                     std::to_string(tr.cond) + ")");
            use_eig = false;
        }
    }

    if (use_eig) {
        tr.used = PropagationMethod::eig;
        lapack::LU lu(es.right);
        if (lu.singular()) throw NumericalError("eigenvector matrix is singular");
        const VecC c = lu.solve(psi0);
        for (double tau : times) {
            VecC ph = (mi * tau * es.values.array()).exp().matrix();
            VecC psi = es.right * ph.cwiseProduct(c);
            detail::check_finite(psi, tau);
            tr.raw.push_back(psi);
        }
    } else {
        tr.used = PropagationMethod::expm_step;
        if (!(opt.step > 0)) throw std::invalid_argument("expm step must be > 0");
        const MatC U = (mi * opt.step * H).exp();
        std::map<long long, MatC> partial; // remainder steps keyed in units of 1e-12
        VecC psi = psi0;
        double now = 0;
        for (double tau : times) {
            const double dtot = tau - now;
            const long n = static_cast<long>(std::floor(dtot / opt.step + 1e-9));
            for (long i = 0; i < n; ++i) psi = U * psi;
            const double rem = dtot - n * opt.step;
            if (rem > 1e-12) {
                const long long key = std::llround(rem * 1e12);
                auto it = partial.find(key);
                if (it == partial.end()) it = partial.emplace(key, (mi * rem * H).exp()).first;
                psi = it->second * psi;
            }
            now = tau;
            detail::check_finite(psi, tau);
            tr.raw.push_back(psi);
        }
    }

    for (const VecC& psi : tr.raw) {
        const double n2 = psi.squaredNorm();
        if (!(n2 > 0)) throw NumericalError("state norm vanished during propagation");
        tr.norm.push_back(n2);
        tr.normalized.push_back(psi / std::sqrt(n2));
    }
    return tr;
}

inline Trajectory propagate(const OperatorMatrix& H, const StateVector& psi0, const std::vector<double>& times,
                            const PropagationOptions& opt = {})
{
    return propagate(H.dense(), psi0.amp, times, opt);
}

struct TrajectoryPoint
{
    double tau = 0;
    double x_up = 0, x_dn = 0;
    double norm = 0;
    VecR n_up, n_dn;
};

inline std::vector<TrajectoryPoint> trajectory_observables(const Trajectory& tr, const StateIndexer& B)
{
    std::vector<TrajectoryPoint> out;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        StateVector s(B, tr.normalized[i]);
        TrajectoryPoint p;
        p.tau = tr.times[i];
        p.norm = tr.norm[i];
        p.n_up = density_profile(s, Species::up);
        p.n_dn = density_profile(s, Species::dn);
        p.x_up = mean_position(s, Species::up);
        p.x_dn = mean_position(s, Species::dn);
        out.push_back(std::move(p));
    }
    return out;
}

// Mean density over grid points with tau in [ta, tb].
inline VecR time_averaged_density(const Trajectory& tr, const StateIndexer& B, double ta, double tb, Species s)
{
    VecR acc = VecR::Zero(B.L());
    int n = 0;
    for (std::size_t i = 0; i < tr.times.size(); ++i) {
        const double tau = tr.times[i];
        if (tau < ta - 1e-12 || tau > tb + 1e-12) continue;
        acc += density_profile(StateVector(B, tr.normalized[i]), s);
        ++n;
    }
    if (n == 0) throw std::invalid_argument("averaging window contains no grid points");
    return acc / n;
}

} // namespace dgf
