#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hamiltonian.hpp"
#include "operator.hpp"
#include "params.hpp"
#include "spectral.hpp"

namespace dgf {

// Down species in the mean field of a left-edge up particle.
struct MeanFieldModel
{
    int L = 0;
    double kappa = 0, eta = 0, t_prime = 0;
    std::vector<double> t_nr;  // per cell j = 1..L/2
    Boundary bc = Boundary::open;
};

inline MeanFieldModel make_meanfield(const ModelParams& p, Boundary bc)
{
    p.validate_lattice();
    if (p.v_up == 0 || !(std::abs(p.u_up) < std::abs(p.v_up)))
        throw std::invalid_argument("mean-field edge state needs |u_up| < |v_up|");
    MeanFieldModel m;
    m.L = p.L;
    m.kappa = p.u_up / p.v_up;
    m.eta = m.kappa * m.kappa;
    m.t_prime = p.t * (1.0 - m.eta);
    m.bc = bc;
    for (int j = 0; j < p.L / 2; ++j) m.t_nr.push_back(m.t_prime * std::pow(m.eta, j));
    return m;
}

// Zero mode of the semi-infinite up chain truncated to L sites: (-kappa)^(j-1)
// on site 2j-1. Only |amplitude|^2 = eta^(j-1) enters the mean field.
inline VecC left_edge_state(const ModelParams& p)
{
    MeanFieldModel m = make_meanfield(p, Boundary::open);
    VecC psi = VecC::Zero(p.L);
    double a = 1.0;
    for (int j = 0; j < p.L / 2; ++j, a *= -m.kappa) psi(2 * j) = a;
    return psi.normalized();
}

// Single-particle SSH chain with hoppings (u, v).
inline OperatorMatrix ssh_chain(int L, double u, double v, Boundary bc)
{
    OperatorMatrix h(L);
    for (const auto& b : detail::ssh_bonds(L, u, v, bc)) h.add(b.x, b.y, b.amp);
    h.finalize();
    return h;
}

inline OperatorMatrix effective_down_hamiltonian(const ModelParams& p, Boundary bc)
{
    MeanFieldModel m = make_meanfield(p, bc);
    OperatorMatrix h(p.L);
    for (const auto& b : detail::ssh_bonds(p.L, p.u_dn, p.v_dn, bc)) h.add(b.x, b.y, b.amp);
    if (p.include_dgf)
        for (int j = 0; j < p.L / 2; ++j) {
            h.add(2 * j, 2 * j + 1, m.t_nr[j]);
            h.add(2 * j + 1, 2 * j, -m.t_nr[j]);
        }
    h.finalize();
    return h;
}

struct MeanFieldReport
{
    MeanFieldModel model;
    VecC obc_spectrum, pbc_spectrum;
    MatR obc_profiles;        // column m: |psi_m(j)|^2 of OBC eigenstate m
    VecR edge_imbalance;      // n_1 - n_L per OBC eigenstate
    VecR mean_profile;        // average over OBC eigenstates
    double max_im_obc = 0, max_im_pbc = 0;
    double edge_contrast = 0; // mean_profile(site 1) minus the bulk average
    double bulk_spread = 0;   // (max - min) / mean of mean_profile on sites L/4..3L/4
};

inline MeanFieldReport meanfield_report(const ModelParams& p)
{
    MeanFieldReport r;
    r.model = make_meanfield(p, Boundary::open);
    const int L = p.L;
    EigenSystem obc = eigensystem(effective_down_hamiltonian(p, Boundary::open), false);
    r.obc_spectrum = obc.values;
    r.pbc_spectrum = eigenvalues(effective_down_hamiltonian(p, Boundary::periodic).dense());
    r.max_im_obc = r.obc_spectrum.imag().cwiseAbs().maxCoeff();
    r.max_im_pbc = r.pbc_spectrum.imag().cwiseAbs().maxCoeff();
    r.obc_profiles = obc.right.cwiseAbs2();
    r.edge_imbalance.resize(L);
    for (int m = 0; m < L; ++m) r.edge_imbalance(m) = r.obc_profiles(0, m) - r.obc_profiles(L - 1, m);
    r.mean_profile = r.obc_profiles.rowwise().mean();
    const int lo = L / 4 - 1, hi = 3 * L / 4 - 1;
    const VecR bulk = r.mean_profile.segment(lo, hi - lo + 1);
    const double mean = bulk.mean();
    r.edge_contrast = r.mean_profile(0) - mean;
    r.bulk_spread = (bulk.maxCoeff() - bulk.minCoeff()) / mean;
    return r;
}

} // namespace dgf
