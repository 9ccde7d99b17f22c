#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>

namespace dgf {

enum class Species { up = 0, dn = 1 };
enum class Boundary { open, periodic };
enum class Statistics { boson, fermion };

inline Species other(Species s) { return s == Species::up ? Species::dn : Species::up; }
inline int index_of(Species s) { return static_cast<int>(s); }

inline const char* to_string(Species s) { return s == Species::up ? "up" : "dn"; }
inline const char* to_string(Boundary b) { return b == Boundary::open ? "open" : "periodic"; }
inline const char* to_string(Statistics s) { return s == Statistics::boson ? "boson" : "fermion"; }

inline Boundary parse_boundary(const std::string& s)
{
    if (s == "open" || s == "obc") return Boundary::open;
    if (s == "periodic" || s == "pbc") return Boundary::periodic;
    throw std::invalid_argument("unknown boundary condition '" + s + "'");
}

// cos(pi x) and sin(pi x), exact at multiples of 1/2 so that angle grids hit
// the flat-band and decoupled lines without roundoff.
inline double cos_pi(double x)
{
    double r = std::fmod(x, 2.0);
    if (r < 0) r += 2.0;
    if (r == 0.0) return 1.0;
    if (r == 0.5 || r == 1.5) return 0.0;
    if (r == 1.0) return -1.0;
    return std::cos(std::numbers::pi * r);
}

inline double sin_pi(double x) { return cos_pi(x - 0.5); }

struct ModelParams
{
    int L = 32;
    double u_up = 0.0, v_up = 0.0;
    double u_dn = 0.0, v_dn = 0.0;
    double gamma_up = 0.0, gamma_dn = 0.0;
    double t = 0.5;
    Boundary bc_up = Boundary::periodic;
    Boundary bc_dn = Boundary::periodic;
    double disorder_lambda = 0.0;
    std::uint64_t disorder_seed = 0;
    // same disorder array for both species instead of independent draws
    bool disorder_shared = false;
    double nrh_strength = 0.0;
    bool include_dgf = true;

    double u(Species s) const { return s == Species::up ? u_up : u_dn; }
    double v(Species s) const { return s == Species::up ? v_up : v_dn; }
    double gamma(Species s) const { return s == Species::up ? gamma_up : gamma_dn; }
    Boundary bc(Species s) const { return s == Species::up ? bc_up : bc_dn; }

    void set_u(Species s, double x) { (s == Species::up ? u_up : u_dn) = x; }
    void set_v(Species s, double x) { (s == Species::up ? v_up : v_dn) = x; }

    // Lattice size and finiteness only; analytic momentum-space routines accept t = 0.
    void validate_lattice() const
    {
        if (L < 4 || L % 2 != 0)
            throw std::invalid_argument("L must be even and >= 4 (got " + std::to_string(L) + ")");
        for (double x : {u_up, v_up, u_dn, v_dn, gamma_up, gamma_dn, t, disorder_lambda, nrh_strength})
            if (!std::isfinite(x)) throw std::invalid_argument("nonfinite model parameter");
    }

    void validate() const
    {
        validate_lattice();
        if (gamma_up < 0 || gamma_dn < 0) throw std::invalid_argument("loss rates must be >= 0");
        if (include_dgf && !(t > 0)) throw std::invalid_argument("t must be > 0 when the gauge-field term is on");
        if (disorder_lambda < 0) throw std::invalid_argument("disorder strength must be >= 0");
        if (nrh_strength < 0) throw std::invalid_argument("nrh strength must be >= 0");
    }
};

// Hoppings from angles given in units of pi: u = r cos(pi theta), v = r sin(pi theta).
inline void set_angles(ModelParams& p, double theta_up, double theta_dn, double r_up, double r_dn)
{
    p.u_up = r_up * cos_pi(theta_up);
    p.v_up = r_up * sin_pi(theta_up);
    p.u_dn = r_dn * cos_pi(theta_dn);
    p.v_dn = r_dn * sin_pi(theta_dn);
}

inline ModelParams from_angles(double theta_up, double theta_dn, double r = std::sqrt(2.0))
{
    ModelParams p;
    set_angles(p, theta_up, theta_dn, r, r);
    return p;
}

// Inverse of the angle helper, theta in units of pi within (-1, 1].
inline double angle_of(double u, double v) { return std::atan2(v, u) / std::numbers::pi; }
inline double radius_of(double u, double v) { return std::hypot(u, v); }

struct BasisSpec
{
    int n_up = 1, n_dn = 1;
    Statistics stat_up = Statistics::boson;
    Statistics stat_dn = Statistics::boson;

    int n(Species s) const { return s == Species::up ? n_up : n_dn; }
    Statistics stat(Species s) const { return s == Species::up ? stat_up : stat_dn; }
};

// Closed-form Hilbert-space dimension for the supported particle numbers.
inline long long expected_dimension(const BasisSpec& spec, int L)
{
    auto one = [L](int n, Statistics st) -> long long {
        if (n == 1) return L;
        return st == Statistics::boson ? (1LL * L * L + L) / 2 : (1LL * L * L - L) / 2;
    };
    return one(spec.n_up, spec.stat_up) * one(spec.n_dn, spec.stat_dn);
}

} // namespace dgf
