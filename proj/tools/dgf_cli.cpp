// Command-line front end for the gauge-field lattice library.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <dgf/dgf.hpp>

using namespace dgf;

namespace {

struct Common
{
    int L = 32;
    double t = 0.5, gamma_up = 0, gamma_dn = 0;
    std::optional<double> theta_up, theta_dn;
    double r = std::sqrt(2.0);
    std::optional<double> u_up, v_up, u_dn, v_dn;
    std::string bc_up = "periodic", bc_dn = "periodic";
    double disorder = 0;
    std::uint64_t seed = 0;
    bool disorder_shared = false;
    double nrh = 0;
    bool no_dgf = false;
    std::vector<std::string> stats{"single", "single"};
    std::string out, format = "csv";
    int workers = 1;
};

struct ConfigError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

ModelParams base_params(const Common& c)
{
    ModelParams p;
    p.L = c.L;
    p.t = c.t;
    p.gamma_up = c.gamma_up;
    p.gamma_dn = c.gamma_dn;
    p.bc_up = parse_boundary(c.bc_up);
    p.bc_dn = parse_boundary(c.bc_dn);
    p.disorder_lambda = c.disorder;
    p.disorder_seed = c.seed;
    p.disorder_shared = c.disorder_shared;
    p.nrh_strength = c.nrh;
    p.include_dgf = !c.no_dgf;
    return p;
}

// Point parameters from either the angle form or explicit hoppings.
ModelParams point_params(const Common& c)
{
    ModelParams p = base_params(c);
    const bool hop = c.u_up || c.v_up || c.u_dn || c.v_dn;
    if (hop) {
        if (!(c.u_up && c.v_up && c.u_dn && c.v_dn))
            throw ConfigError("explicit hoppings need all of --u-up --v-up --u-dn --v-dn");
        p.u_up = *c.u_up, p.v_up = *c.v_up, p.u_dn = *c.u_dn, p.v_dn = *c.v_dn;
    } else {
        if (!c.theta_up || !c.theta_dn) throw ConfigError("give --theta-up and --theta-dn, or explicit hoppings");
        set_angles(p, *c.theta_up, *c.theta_dn, c.r, c.r);
    }
    p.validate();
    return p;
}

BasisSpec basis_spec(const Common& c)
{
    if (c.stats.size() != 2) throw ConfigError("--stats takes two values (up, dn)");
    BasisSpec s;
    auto one = [](const std::string& x, int& n, Statistics& st) {
        if (x == "single") n = 1, st = Statistics::boson;
        else if (x == "boson") n = 2, st = Statistics::boson;
        else if (x == "fermion") n = 2, st = Statistics::fermion;
        else throw ConfigError("--stats values are single, boson or fermion (got '" + x + "')");
    };
    one(c.stats[0], s.n_up, s.stat_up);
    one(c.stats[1], s.n_dn, s.stat_dn);
    return s;
}

json stats_json(const BasisSpec& s)
{
    return {{"n_up", s.n_up}, {"n_dn", s.n_dn}, {"stat_up", to_string(s.stat_up)}, {"stat_dn", to_string(s.stat_dn)}};
}

double seconds_since(std::chrono::steady_clock::time_point t0)
{
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void write_out(const SweepTable& t, const Common& c)
{
    const Format f = parse_format(c.format);
    if (c.out.empty()) {
        std::cout << (f == Format::csv ? csv_body(t) : table_json(t).dump(2) + "\n");
        return;
    }
    emit(t, c.out, f);
}

std::vector<std::string> site_columns(const std::string& prefix, int L)
{
    std::vector<std::string> v;
    for (int j = 1; j <= L; ++j) v.push_back(prefix + std::to_string(j));
    return v;
}

// ---- subcommands ----

struct SpectrumOpts
{
    bool vectors = false, left = false;
};

void cmd_spectrum(const Common& c, const SpectrumOpts& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    BasisSpec spec = basis_spec(c);
    StateIndexer B(spec, p.L);
    OperatorMatrix H = build_hamiltonian(p, B);
    const bool one_each = spec.n_up == 1 && spec.n_dn == 1;
    std::vector<std::string> cols{"index", "re_energy", "im_energy"};
    if (o.vectors) {
        cols.insert(cols.end(), {"x_up", "x_dn", "edge_imbalance", "up_left_weight"});
        if (one_each) cols.push_back("entropy");
    }
    if (o.left) cols.push_back("petermann");
    SweepTable tab(cols);
    if (!o.vectors && !o.left) {
        VecC e = eigenvalues(H.dense());
        for (int m = 0; m < e.size(); ++m) tab.add_row({double(m), e(m).real(), e(m).imag()});
    } else {
        EigenSystem es = eigensystem(H, o.left);
        for (int m = 0; m < es.dim(); ++m) {
            std::vector<double> r{double(m), es.values(m).real(), es.values(m).imag()};
            if (o.vectors) {
                StateVector s(B, es.right.col(m));
                VecR nu = density_profile(s, Species::up);
                r.insert(r.end(), {mean_position(s, Species::up), mean_position(s, Species::dn), edge_imbalance(s),
                                   nu(0) + nu(2)});
                if (one_each) r.push_back(entanglement_entropy(s));
            }
            if (o.left) r.push_back(petermann_factor(es, m).K);
            tab.add_row(std::move(r));
        }
    }
    tab.manifest = make_manifest(p, "spectrum", seconds_since(t0));
    tab.manifest["stats"] = stats_json(spec);
    tab.manifest["dim"] = B.dim();
    write_out(tab, c);
}

void cmd_invariants(const Common& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    PhaseLabel l = classify_phase(p);
    SweepTable tab({"I0_up", "Ipi_up", "I0_dn", "Ipi_dn", "I00", "Ipp", "I0p", "Ip0", "Iext", "phase_code",
                    "bulk_bound_applicable", "bulk_bound_pt_broken", "single_pt_broken_up", "single_pt_broken_dn",
                    "edge_confined_possible", "dgf_magnitude"});
    tab.add_row({double(l.up.I0), double(l.up.Ipi), double(l.dn.I0), double(l.dn.Ipi), double(l.I00), double(l.Ipp),
                 double(l.I0p), double(l.Ip0), double(l.Iext), double(l.code()), double(l.bulk_bound_applicable),
                 double(l.bulk_bound_pt_broken), double(l.single_pt_broken_up), double(l.single_pt_broken_dn),
                 double(l.edge_confined_possible), dgf_magnitude(p)});
    tab.manifest = make_manifest(p, "invariants", seconds_since(t0));
    tab.manifest["label"] = l.label();
    write_out(tab, c);
}

Sector sector_of(const std::string& s)
{
    if (s == "0") return Sector::zero;
    if (s == "pi") return Sector::pi;
    throw ConfigError("--K must be 0 or pi");
}

void cmd_mmatrix(const Common& c, const std::string& K)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    const Sector s = sector_of(K);
    MatR M = m_matrix(p, s);
    const int n = p.L / 2;
    const auto ks = momentum_grid(p.L);
    SweepTable tab({"row", "col", "band_row", "k_row", "band_col", "k_col", "value"},
                   {"", "", "", "rad", "", "rad", "energy"});
    for (int i = 0; i < M.rows(); ++i)
        for (int j = 0; j < M.cols(); ++j)
            tab.add_row({double(i), double(j), double(i / n), ks[i % n], double(j / n), ks[j % n], M(i, j)});
    tab.manifest = make_manifest(p, "mmatrix", seconds_since(t0));
    tab.manifest["K"] = K;
    tab.manifest["a2_sum"] = bbs_a2(p, s, BbsMode::sum);
    write_out(tab, c);
}

void cmd_bbs(const Common& c, const std::string& mode)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    if (mode != "sum" && mode != "integral" && mode != "both") throw ConfigError("--mode is sum, integral or both");
    SweepTable tab({"K", "a2_sum", "im_energy_sum", "a2_integral", "im_energy_integral", "error"},
                   {"pi", "energy^2", "energy", "energy^2", "energy", ""});
    json errors = json::array();
    for (Sector s : {Sector::zero, Sector::pi}) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        std::vector<double> r{s == Sector::zero ? 0.0 : 1.0, nan, nan, nan, nan, 0};
        try {
            if (mode != "integral") {
                r[1] = bbs_a2(p, s, BbsMode::sum);
                r[2] = bbs_energy(p, s, BbsMode::sum).first.imag();
            }
            if (mode != "sum") {
                r[3] = bbs_a2(p, s, BbsMode::integral);
                r[4] = bbs_energy(p, s, BbsMode::integral).first.imag();
            }
        } catch (const std::invalid_argument& e) {
            r[5] = config_error;
            errors.push_back(e.what());
        }
        tab.add_row(r);
    }
    tab.manifest = make_manifest(p, "bbs-energy", seconds_since(t0));
    tab.manifest["errors"] = errors;
    write_out(tab, c);
}

struct GridOpts
{
    std::string task = "invariants";
    std::vector<double> up_range{0.0, 1.0}, dn_range{0.0, 1.0};
    int n_up = 50, n_dn = 50;
    bool no_offset = false;
    std::string cond_model = "dgf";
};

void cmd_grid(const Common& c, const GridOpts& o, const std::string& command)
{
    SweepGrid g;
    g.base = base_params(c);
    g.r_up = g.r_dn = c.r;
    if (o.up_range.size() != 2 || o.dn_range.size() != 2) throw ConfigError("theta ranges take two values");
    g.theta_up = Axis{o.up_range[0], o.up_range[1], o.n_up, !o.no_offset};
    g.theta_dn = Axis{o.dn_range[0], o.dn_range[1], o.n_dn, !o.no_offset};
    g.stats = basis_spec(c);
    g.task = parse_task(o.task);
    g.cond_model = parse_cond_model(o.cond_model);
    g.workers = c.workers;
    SweepTable tab = run_sweep(g);
    tab.manifest["command"] = command;
    write_out(tab, c);
}

struct DynOpts
{
    std::vector<int> init_up{15}, init_dn{18};
    double tmax = 150, dt = 0.5, step = 0.05;
    std::string method = "eig";
    bool strict = false, profiles = false;
    std::vector<double> avg_window;
};

void cmd_dynamics(const Common& c, const DynOpts& o)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    BasisSpec spec = basis_spec(c);
    StateIndexer B(spec, p.L);
    StateVector psi0 = StateVector::product(B, o.init_up, o.init_dn);
    PropagationOptions po;
    if (o.method == "eig") po.method = PropagationMethod::eig;
    else if (o.method == "expm") po.method = PropagationMethod::expm_step;
    else throw ConfigError("--method is eig or expm");
    po.forbid_fallback = o.strict;
    po.step = o.step;
    Trajectory tr = propagate(build_hamiltonian(p, B), psi0, time_grid(o.tmax, o.dt), po);
    auto obs = trajectory_observables(tr, B);

    std::vector<std::string> cols{"tau", "x_up", "x_dn", "norm"};
    if (o.profiles) {
        for (auto& s : site_columns("n_up_", p.L)) cols.push_back(s);
        for (auto& s : site_columns("n_dn_", p.L)) cols.push_back(s);
    }
    SweepTable tab(cols);
    for (const auto& pt : obs) {
        std::vector<double> r{pt.tau, pt.x_up, pt.x_dn, pt.norm};
        if (o.profiles) {
            r.insert(r.end(), pt.n_up.data(), pt.n_up.data() + p.L);
            r.insert(r.end(), pt.n_dn.data(), pt.n_dn.data() + p.L);
        }
        tab.add_row(std::move(r));
    }
    tab.manifest = make_manifest(p, "dynamics", seconds_since(t0));
    tab.manifest["method"] = tr.used == PropagationMethod::eig ? "eig" : "expm";
    tab.manifest["cond"] = tr.cond;
    tab.manifest["init_up"] = o.init_up;
    tab.manifest["init_dn"] = o.init_dn;
    if (!o.avg_window.empty()) {
        if (o.avg_window.size() != 2) throw ConfigError("--avg-window takes two times");
        VecR up = time_averaged_density(tr, B, o.avg_window[0], o.avg_window[1], Species::up);
        VecR dn = time_averaged_density(tr, B, o.avg_window[0], o.avg_window[1], Species::dn);
        tab.manifest["avg_window"] = o.avg_window;
        tab.manifest["avg_n_up"] = std::vector<double>(up.data(), up.data() + up.size());
        tab.manifest["avg_n_dn"] = std::vector<double>(dn.data(), dn.data() + dn.size());
    }
    write_out(tab, c);
}

void cmd_meanfield(const Common& c)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    MeanFieldReport r = meanfield_report(p);
    std::vector<std::string> cols{"periodic", "index", "re_energy", "im_energy", "edge_imbalance"};
    for (auto& s : site_columns("n_", p.L)) cols.push_back(s);
    SweepTable tab(cols);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int m = 0; m < p.L; ++m) {
        std::vector<double> row{0, double(m), r.obc_spectrum(m).real(), r.obc_spectrum(m).imag(), r.edge_imbalance(m)};
        for (int j = 0; j < p.L; ++j) row.push_back(r.obc_profiles(j, m));
        tab.add_row(std::move(row));
    }
    for (int m = 0; m < p.L; ++m) {
        std::vector<double> row{1, double(m), r.pbc_spectrum(m).real(), r.pbc_spectrum(m).imag(), nan};
        row.resize(cols.size(), nan);
        tab.add_row(std::move(row));
    }
    tab.manifest = make_manifest(p, "meanfield", seconds_since(t0));
    tab.manifest["kappa"] = r.model.kappa;
    tab.manifest["eta"] = r.model.eta;
    tab.manifest["t_prime"] = r.model.t_prime;
    tab.manifest["max_im_obc"] = r.max_im_obc;
    tab.manifest["max_im_pbc"] = r.max_im_pbc;
    tab.manifest["edge_contrast"] = r.edge_contrast;
    tab.manifest["bulk_spread"] = r.bulk_spread;
    tab.manifest["mean_profile"] = std::vector<double>(r.mean_profile.data(), r.mean_profile.data() + p.L);
    write_out(tab, c);
}

void cmd_condnum(const Common& c, GridOpts o)
{
    o.task = "cond-number";
    cmd_grid(c, o, "condnum");
}

void cmd_ansatz(const Common& c, const std::string& family)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    AnsatzFamily f = parse_family(family);
    AnsatzResult r = ansatz_two_level(p, f);
    SweepTable tab({"row", "col", "re_projected", "im_projected", "re_aligned", "im_aligned", "re_predicted",
                    "im_predicted"});
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            tab.add_row({double(i), double(j), r.projected(i, j).real(), r.projected(i, j).imag(),
                         r.aligned(i, j).real(), r.aligned(i, j).imag(), r.predicted(i, j).real(),
                         r.predicted(i, j).imag()});
    tab.manifest = make_manifest(p, "ansatz-check", seconds_since(t0));
    tab.manifest["family"] = family;
    tab.manifest["family_label"] = family_label(f);
    tab.manifest["label"] = r.label;
    tab.manifest["label_matches"] = r.label_matches;
    tab.manifest["gram_defect"] = r.gram_defect;
    tab.manifest["max_deviation"] = (r.aligned - r.predicted).cwiseAbs().maxCoeff();
    tab.manifest["max_im_projected"] = max_imag_eigenvalue(r.aligned);
    tab.manifest["max_im_predicted"] = max_imag_eigenvalue(r.predicted);
    write_out(tab, c);
}

void cmd_multiparticle(const Common& c, int width)
{
    const auto t0 = std::chrono::steady_clock::now();
    ModelParams p = point_params(c);
    BasisSpec spec = basis_spec(c);
    StateIndexer B(spec, p.L);
    const MatC H = build_hamiltonian(p, B).dense();
    VecC e = eigenvalues(H);
    int arg = 0;
    for (int m = 1; m < e.size(); ++m)
        if (e(m).imag() > e(arg).imag()) arg = m;
    double res = 0;
    StateVector psi(B, inverse_iteration(H, e(arg), 4, &res));

    SweepTable tab({"kind", "j", "jp", "value"}, {"0=Gamma 1=G_up 2=G_dn", "site", "site", ""});
    json summary{{"dim", B.dim()},
                 {"expected_dim", expected_dimension(spec, p.L)},
                 {"re_energy", e(arg).real()},
                 {"im_energy", e(arg).imag()},
                 {"residual", res}};
    auto dump = [&](int kind, const MatR& m, const char* name) {
        for (int j = 0; j < m.rows(); ++j)
            for (int jp = 0; jp < m.cols(); ++jp) tab.add_row({double(kind), double(j + 1), double(jp + 1), m(j, jp)});
        summary[std::string("diag_mass_") + name] = diagonal_mass(m, width);
    };
    dump(0, interspecies_correlation(psi).normalized, "Gamma");
    if (spec.n_up >= 2) dump(1, intraspecies_correlation(psi, Species::up).normalized, "G_up");
    if (spec.n_dn >= 2) dump(2, intraspecies_correlation(psi, Species::dn).normalized, "G_dn");
    tab.manifest = make_manifest(p, "multiparticle", seconds_since(t0));
    tab.manifest["stats"] = stats_json(spec);
    tab.manifest["summary"] = summary;
    tab.manifest["diag_width"] = width;
    write_out(tab, c);
}

void add_common(CLI::App& app, Common& c)
{
    app.add_option("--L", c.L, "number of sites (even)")->capture_default_str();
    app.add_option("--t", c.t, "gauge-field strength")->capture_default_str();
    app.add_option("--gamma-up", c.gamma_up, "loss rate on even sites, up species")->capture_default_str();
    app.add_option("--gamma-dn", c.gamma_dn, "loss rate on even sites, down species")->capture_default_str();
    auto* tu = app.add_option("--theta-up", c.theta_up, "arg(u+iv) of the up species in units of pi");
    auto* td = app.add_option("--theta-dn", c.theta_dn, "arg(u+iv) of the down species in units of pi");
    auto* r = app.add_option("--r", c.r, "|u+iv| for both species")->capture_default_str();
    for (auto [name, dst] : {std::pair{"--u-up", &c.u_up}, {"--v-up", &c.v_up}, {"--u-dn", &c.u_dn}, {"--v-dn", &c.v_dn}})
        app.add_option(name, *dst, "explicit hopping")->excludes(tu)->excludes(td)->excludes(r);
    app.add_option("--bc-up", c.bc_up)->check(CLI::IsMember({"open", "periodic"}))->capture_default_str();
    app.add_option("--bc-dn", c.bc_dn)->check(CLI::IsMember({"open", "periodic"}))->capture_default_str();
    app.add_option("--disorder", c.disorder, "disorder strength lambda")->capture_default_str();
    app.add_option("--seed", c.seed, "disorder seed")->capture_default_str();
    app.add_flag("--disorder-shared", c.disorder_shared, "same disorder array for both species");
    app.add_option("--nrh", c.nrh, "intra-cell non-reciprocal hopping strength")->capture_default_str();
    app.add_flag("--no-dgf", c.no_dgf, "drop the gauge-field term");
    app.add_option("--stats", c.stats, "particle content per species: single, boson or fermion")
        ->expected(2)
        ->check(CLI::IsMember({"single", "boson", "fermion"}))
        ->capture_default_str();
    app.add_option("--out", c.out, "output path (stdout if empty)");
    app.add_option("--format", c.format)->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    app.add_option("--workers", c.workers, "worker threads for sweeps")->check(CLI::PositiveNumber)->capture_default_str();
}

void add_grid(CLI::App* sub, GridOpts& g, bool with_task)
{
    if (with_task)
        sub->add_option("--task", g.task)
            ->check(CLI::IsMember({"max-im-energy", "max-entropy", "invariants", "dgf-magnitude", "cond-number",
                                   "pt-flags"}))
            ->capture_default_str();
    sub->add_option("--theta-up-range", g.up_range, "lo hi in units of pi")->expected(2)->capture_default_str();
    sub->add_option("--theta-dn-range", g.dn_range, "lo hi in units of pi")->expected(2)->capture_default_str();
    sub->add_option("--n-up", g.n_up, "grid points along theta_up")->capture_default_str();
    sub->add_option("--n-dn", g.n_dn, "grid points along theta_dn")->capture_default_str();
    sub->add_flag("--no-offset", g.no_offset, "include the range endpoints instead of cell centres");
    sub->add_option("--cond-model", g.cond_model)->check(CLI::IsMember({"dgf", "nrh", "both"}))->capture_default_str();
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Two-species lattice model with a density-dependent gauge field"};
    app.set_config("--config", "", "key = value file; command-line flags override it");
    app.fallthrough();
    app.require_subcommand(1);
    Common c;
    add_common(app, c);

    SpectrumOpts so;
    auto* spectrum = app.add_subcommand("spectrum", "eigenvalues and per-state observables");
    spectrum->add_flag("--vectors", so.vectors, "compute eigenvectors and observables");
    spectrum->add_flag("--left", so.left, "compute left vectors and Petermann factors");

    auto* invariants = app.add_subcommand("invariants", "topological indicators and PT predictors at one point");

    std::string K = "0";
    auto* mmatrix = app.add_subcommand("mmatrix", "gauge-field matrix in a total-momentum sector");
    mmatrix->add_option("--K", K, "0 or pi")->check(CLI::IsMember({"0", "pi"}))->capture_default_str();

    std::string bbs_mode = "both";
    auto* bbs = app.add_subcommand("bbs-energy", "analytic bulk bound-state energies");
    bbs->add_option("--mode", bbs_mode)->check(CLI::IsMember({"sum", "integral", "both"}))->capture_default_str();

    GridOpts grid;
    auto* phase = app.add_subcommand("phase-diagram", "theta_up x theta_dn sweep");
    add_grid(phase, grid, true);

    GridOpts cgrid;
    cgrid.n_up = cgrid.n_dn = 10;
    auto* condnum = app.add_subcommand("condnum", "eigenvector condition numbers over a theta grid");
    add_grid(condnum, cgrid, false);

    DynOpts dyn;
    auto* dynamics = app.add_subcommand("dynamics", "time evolution from a product state");
    dynamics->add_option("--init-up", dyn.init_up, "1-based sites of the up particles")->capture_default_str();
    dynamics->add_option("--init-dn", dyn.init_dn, "1-based sites of the down particles")->capture_default_str();
    dynamics->add_option("--tmax", dyn.tmax)->capture_default_str();
    dynamics->add_option("--dt", dyn.dt, "output spacing")->capture_default_str();
    dynamics->add_option("--method", dyn.method)->check(CLI::IsMember({"eig", "expm"}))->capture_default_str();
    dynamics->add_option("--step", dyn.step, "expm step")->capture_default_str();
    dynamics->add_flag("--strict", dyn.strict, "fail instead of falling back from eig to expm");
    dynamics->add_flag("--profiles", dyn.profiles, "emit density profiles");
    dynamics->add_option("--avg-window", dyn.avg_window, "time window for averaged profiles")->expected(2);

    auto* meanfield = app.add_subcommand("meanfield", "down species in the up edge-state mean field");

    std::string family = "mmm";
    auto* ansatz = app.add_subcommand("ansatz-check", "project H onto an ansatz pair");
    ansatz->add_option("--family", family)->check(CLI::IsMember({"mmm", "ppm", "pmm", "mpp"}))->capture_default_str();

    int width = 2;
    auto* multi = app.add_subcommand("multiparticle", "max-Im eigenstate correlations for two particles per species");
    multi->add_option("--diag-width", width, "band half-width for the diagonal mass")->capture_default_str();

    for (auto* s : app.get_subcommands([](CLI::App*) { return true; })) s->configurable();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (*spectrum) cmd_spectrum(c, so);
        else if (*invariants) cmd_invariants(c);
        else if (*mmatrix) cmd_mmatrix(c, K);
        else if (*bbs) cmd_bbs(c, bbs_mode);
        else if (*phase) cmd_grid(c, grid, "phase-diagram");
        else if (*condnum) cmd_condnum(c, cgrid);
        else if (*dynamics) cmd_dynamics(c, dyn);
        else if (*meanfield) cmd_meanfield(c);
        else if (*ansatz) cmd_ansatz(c, family);
        else if (*multi) cmd_multiparticle(c, width);
    } catch (const NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 3;
    } catch (const IoError& e) {
        std::cerr << "i/o error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
