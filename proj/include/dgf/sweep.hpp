#pragma once

#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "basis.hpp"
#include "hamiltonian.hpp"
#include "lapack.hpp"
#include "observables.hpp"
#include "spectral.hpp"
#include "table.hpp"
#include "topology.hpp"

namespace dgf {

enum class Task { max_im_energy, max_entropy, invariants, dgf_magnitude, cond_number, pt_flags };

inline const char* to_string(Task t)
{
    switch (t) {
    case Task::max_im_energy: return "max-im-energy";
    case Task::max_entropy: return "max-entropy";
    case Task::invariants: return "invariants";
    case Task::dgf_magnitude: return "dgf-magnitude";
    case Task::cond_number: return "cond-number";
    case Task::pt_flags: return "pt-flags";
    }
    return "?";
}

inline Task parse_task(const std::string& s)
{
    for (Task t : {Task::max_im_energy, Task::max_entropy, Task::invariants, Task::dgf_magnitude, Task::cond_number,
                   Task::pt_flags})
        if (s == to_string(t)) return t;
    throw std::invalid_argument("unknown task '" + s + "'");
}

// Which non-reciprocal pieces enter the condition-number model.
enum class CondModel { dgf, nrh, both };

inline CondModel parse_cond_model(const std::string& s)
{
    if (s == "dgf") return CondModel::dgf;
    if (s == "nrh") return CondModel::nrh;
    if (s == "both") return CondModel::both;
    throw std::invalid_argument("cond model must be dgf, nrh or both (got '" + s + "')");
}

inline const char* to_string(CondModel m)
{
    return m == CondModel::dgf ? "dgf" : m == CondModel::nrh ? "nrh" : "both";
}

inline void apply_cond_model(ModelParams& p, CondModel m)
{
    p.include_dgf = m != CondModel::nrh;
    p.nrh_strength = m == CondModel::dgf ? 0.0 : p.t;
}

struct Axis
{
    double lo = 0, hi = 1;
    int count = 1;
    bool half_offset = true;  // cell centres, so exact gap-closing lines are skipped

    std::vector<double> values() const
    {
        if (count < 1) throw std::invalid_argument("axis count must be >= 1");
        std::vector<double> v;
        const double step = count > 1 || half_offset ? (hi - lo) / (half_offset ? count : count - 1) : 0.0;
        for (int i = 0; i < count; ++i) v.push_back(lo + (half_offset ? i + 0.5 : i) * step);
        return v;
    }
};

struct HoppingPair
{
    double u = 0, v = 0;
};

struct SweepGrid
{
    ModelParams base;
    double r_up = std::sqrt(2.0), r_dn = std::sqrt(2.0);
    Axis theta_up, theta_dn;
    // If both lists are non-empty they replace the angle axes.
    std::vector<HoppingPair> explicit_up, explicit_dn;
    BasisSpec stats;
    Task task = Task::invariants;
    CondModel cond_model = CondModel::dgf;
    int workers = 1;

    bool uses_explicit() const { return !explicit_up.empty() && !explicit_dn.empty(); }
    std::size_t size() const
    {
        return uses_explicit() ? explicit_up.size() * explicit_dn.size()
                               : static_cast<std::size_t>(theta_up.count) * theta_dn.count;
    }

    // Row-major over (up, dn).
    ModelParams point(std::size_t i) const
    {
        ModelParams p = base;
        if (uses_explicit()) {
            const auto& a = explicit_up[i / explicit_dn.size()];
            const auto& b = explicit_dn[i % explicit_dn.size()];
            p.u_up = a.u, p.v_up = a.v, p.u_dn = b.u, p.v_dn = b.v;
        } else {
            const auto tu = theta_up.values(), td = theta_dn.values();
            set_angles(p, tu[i / td.size()], td[i % td.size()], r_up, r_dn);
        }
        if (task == Task::cond_number) apply_cond_model(p, cond_model);
        return p;
    }

    // Grid angles in units of pi; recovered from the hoppings for explicit lists.
    std::pair<double, double> angles(std::size_t i) const
    {
        if (uses_explicit()) {
            const auto& a = explicit_up[i / explicit_dn.size()];
            const auto& b = explicit_dn[i % explicit_dn.size()];
            return {angle_of(a.u, a.v), angle_of(b.u, b.v)};
        }
        const auto tu = theta_up.values(), td = theta_dn.values();
        return {tu[i / td.size()], td[i % td.size()]};
    }

    void validate() const
    {
        if (workers < 1) throw std::invalid_argument("workers must be >= 1");
        if (!uses_explicit()) {
            theta_up.values();
            theta_dn.values();
            if (!(r_up > 0) || !(r_dn > 0)) throw std::invalid_argument("radius must be > 0");
        }
        ModelParams p = point(0);
        p.validate();
        if (task == Task::max_entropy && (stats.n_up != 1 || stats.n_dn != 1))
            throw std::invalid_argument("max-entropy needs one particle per species");
    }
};

inline std::vector<std::string> task_columns(Task t)
{
    switch (t) {
    case Task::max_im_energy: return {"max_im_energy"};
    case Task::max_entropy: return {"max_entropy", "re_energy", "im_energy"};
    case Task::invariants:
        return {"I0_up", "Ipi_up", "I0_dn", "Ipi_dn", "I00", "Ipp", "I0p", "Ip0", "Iext", "phase_code"};
    case Task::dgf_magnitude: return {"dgf_magnitude"};
    case Task::cond_number: return {"ln_cond"};
    case Task::pt_flags:
        return {"bulk_bound_applicable", "bulk_bound_pt_broken", "single_pt_broken_up", "single_pt_broken_dn",
                "edge_confined_possible"};
    }
    return {};
}

inline std::vector<std::string> task_units(Task t)
{
    switch (t) {
    case Task::max_im_energy: return {"energy"};
    case Task::max_entropy: return {"bits", "energy", "energy"};
    case Task::dgf_magnitude: return {"energy^2"};
    case Task::cond_number: return {"ln"};
    default: return std::vector<std::string>(task_columns(t).size(), "");
    }
}

// Error codes in the error column.
enum ErrorCode { ok = 0, internal_error = 1, config_error = 2, numerical_error = 3 };

inline std::vector<double> evaluate_task(Task task, const ModelParams& p, const BasisSpec& stats)
{
    switch (task) {
    case Task::max_im_energy: {
        StateIndexer B(stats, p.L);
        VecC e = eigenvalues(build_hamiltonian(p, B).dense());
        return {e.imag().maxCoeff()};
    }
    case Task::max_entropy: {
        StateIndexer B(stats, p.L);
        EigenSystem es = eigensystem(build_hamiltonian(p, B), false);
        double best = -1;
        int arg = 0;
        for (int m = 0; m < es.dim(); ++m) {
            double s = entanglement_entropy(StateVector(B, es.right.col(m)));
            if (s > best) best = s, arg = m;
        }
        return {best, es.values(arg).real(), es.values(arg).imag()};
    }
    case Task::invariants: {
        PhaseLabel l = interspecies_invariants(p);
        return {double(l.up.I0), double(l.up.Ipi), double(l.dn.I0), double(l.dn.Ipi), double(l.I00),
                double(l.Ipp),   double(l.I0p),    double(l.Ip0),    double(l.Iext),   double(l.code())};
    }
    case Task::dgf_magnitude: return {dgf_magnitude(p)};
    case Task::cond_number: {
        StateIndexer B(stats, p.L);
        EigenSystem es = eigensystem(build_hamiltonian(p, B), false);
        return {std::log(condition_number(es))};
    }
    case Task::pt_flags: {
        PhaseLabel l = classify_phase(p);
        return {double(l.bulk_bound_applicable), double(l.bulk_bound_pt_broken), double(l.single_pt_broken_up),
                double(l.single_pt_broken_dn), double(l.edge_confined_possible)};
    }
    }
    return {};
}

struct PointResult
{
    std::vector<double> values;
    int error = ok;
    std::string message;
};

inline PointResult evaluate_point(const SweepGrid& g, std::size_t i)
{
    PointResult r;
    const std::size_t nc = task_columns(g.task).size();
    try {
        ModelParams p = g.point(i);
        p.validate();
        r.values = evaluate_task(g.task, p, g.stats);
    } catch (const NumericalError& e) {
        r.error = numerical_error, r.message = e.what();
    } catch (const std::invalid_argument& e) {
        r.error = config_error, r.message = e.what();
    } catch (const std::domain_error& e) {
        r.error = config_error, r.message = e.what();
    } catch (const std::exception& e) {
        r.error = internal_error, r.message = e.what();
    }
    if (r.error != ok) r.values.assign(nc, std::numeric_limits<double>::quiet_NaN());
    return r;
}

inline SweepTable run_sweep(const SweepGrid& g)
{
    g.validate();
    const auto t0 = std::chrono::steady_clock::now();
    const std::size_t n = g.size();
    std::vector<PointResult> results(n);

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < n;) results[i] = evaluate_point(g, i);
    };
    const int nw = std::max(1, std::min<int>(g.workers, static_cast<int>(n)));
    if (nw == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < nw; ++w) pool.emplace_back(work);
    }

    std::vector<std::string> cols{"theta_up", "theta_dn", "u_up", "v_up", "u_dn", "v_dn"};
    std::vector<std::string> units{"pi", "pi", "energy", "energy", "energy", "energy"};
    for (const auto& c : task_columns(g.task)) cols.push_back(c);
    for (const auto& u : task_units(g.task)) units.push_back(u);
    cols.push_back("error");
    units.push_back("");
    SweepTable table(cols, units);

    json errors = json::array();
    for (std::size_t i = 0; i < n; ++i) {
        ModelParams p = g.point(i);
        auto [tu, td] = g.angles(i);
        std::vector<double> row{tu, td, p.u_up, p.v_up, p.u_dn, p.v_dn};
        row.insert(row.end(), results[i].values.begin(), results[i].values.end());
        row.push_back(results[i].error);
        table.add_row(std::move(row));
        if (results[i].error != ok) errors.push_back({{"row", i}, {"message", results[i].message}});
    }

    const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    table.manifest = make_manifest(g.base, std::string("phase-diagram:") + to_string(g.task), wall);
    table.manifest["grid"] = {{"r_up", g.r_up},
                              {"r_dn", g.r_dn},
                              {"theta_up", {g.theta_up.lo, g.theta_up.hi, g.theta_up.count}},
                              {"theta_dn", {g.theta_dn.lo, g.theta_dn.hi, g.theta_dn.count}},
                              {"half_offset", g.theta_up.half_offset},
                              {"explicit", g.uses_explicit()}};
    table.manifest["stats"] = {{"n_up", g.stats.n_up},
                               {"n_dn", g.stats.n_dn},
                               {"stat_up", to_string(g.stats.stat_up)},
                               {"stat_dn", to_string(g.stats.stat_dn)}};
    if (g.task == Task::cond_number) table.manifest["cond_model"] = to_string(g.cond_model);
    table.manifest["workers"] = g.workers;
    table.manifest["errors"] = errors;
    return table;
}

} // namespace dgf
