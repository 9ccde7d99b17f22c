#include <gtest/gtest.h>

#include <random>

#include <Eigen/Eigenvalues>

#include <dgf/spectral.hpp>

using namespace dgf;

namespace {

ModelParams fig2a(int L)
{
    ModelParams p;
    p.L = L;
    p.u_up = 2, p.v_up = 5, p.u_dn = 1, p.v_dn = 0.5;
    p.gamma_up = 0.5, p.t = 0.5;
    p.bc_up = p.bc_dn = Boundary::open;
    return p;
}

MatC random_matrix(int n, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    MatC m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = cplx(d(rng), d(rng));
    return m;
}

} // namespace

TEST(Eigensystem, DiagonalInput)
{
    MatC h = MatC::Zero(2, 2);
    h(0, 0) = 1;
    h(1, 1) = cplx(0, 2);
    EigenSystem es = eigensystem(h, true);
    EXPECT_EQ(es.values(0), cplx(0, 2)); // sorted by real part first
    EXPECT_EQ(es.values(1), cplx(1, 0));
    EXPECT_NEAR(std::abs(es.right(1, 0)), 1.0, 1e-15);
    EXPECT_NEAR(std::abs(es.right(0, 1)), 1.0, 1e-15);
    EXPECT_LT(biorthogonality_defect(es), 1e-15);
}

TEST(Eigensystem, SymmetricSwap)
{
    MatC h(2, 2);
    h << 0, 3, 3, 0;
    VecC w = eigenvalues(h);
    EXPECT_NEAR(std::abs(w(0) - cplx(-3)), 0, 1e-14);
    EXPECT_NEAR(std::abs(w(1) - cplx(3)), 0, 1e-14);
}

TEST(Eigensystem, ResidualsAndBiorthogonality)
{
    ModelParams p = fig2a(8);
    StateIndexer B({1, 1}, 8);
    MatC H = build_hamiltonian(p, B).dense();
    EigenSystem es = eigensystem(H, true);
    EXPECT_LT(max_residual(H, es), 1e-10);
    EXPECT_LT(biorthogonality_defect(es), 1e-8);
    for (int m = 0; m < es.dim(); ++m) {
        EXPECT_NEAR(es.right.col(m).norm(), 1.0, 1e-12);
        VecC l = es.left_ket(m);
        EXPECT_LT((l.adjoint() * H - es.values(m) * l.adjoint()).norm() / H.norm(), 1e-10);
    }
}

TEST(Eigensystem, DegenerateGroupsAreBiorthogonalized)
{
    // identical decoupled species: E_a + E_b = E_b + E_a
    ModelParams p = fig2a(8);
    p.t = 0, p.include_dgf = false;
    p.u_dn = p.u_up, p.v_dn = p.v_up, p.gamma_dn = p.gamma_up;
    StateIndexer B({1, 1}, 8);
    MatC H = build_hamiltonian(p, B).dense();
    EigenSystem es = eigensystem(H, true);
    int biggest = 0;
    std::vector<int> sizes(es.defective.size(), 0);
    for (int g : es.group) biggest = std::max(biggest, ++sizes[g]);
    EXPECT_GT(biggest, 1);
    bool any_defective = std::any_of(es.defective.begin(), es.defective.end(), [](bool b) { return b; });
    if (!any_defective) EXPECT_LT(biorthogonality_defect(es), 1e-8);
    EXPECT_LT(max_residual(H, es), 1e-10);
}

TEST(Eigensystem, AgreesWithTextbookSolver)
{
    std::mt19937_64 rng(4);
    for (int rep = 0; rep < 5; ++rep) {
        ModelParams p = fig2a(4);
        std::uniform_real_distribution<double> d(-2, 2);
        p.u_up = d(rng), p.v_up = d(rng), p.u_dn = d(rng), p.v_dn = d(rng);
        p.bc_dn = Boundary::periodic;
        StateIndexer B({1, 1}, 4);
        MatC H = build_hamiltonian(p, B).dense();
        VecC a = eigenvalues(H);
        Eigen::ComplexEigenSolver<MatC> ces(H, false);
        VecC b = ces.eigenvalues();
        std::vector<bool> used(b.size(), false);
        for (int i = 0; i < a.size(); ++i) {
            int best = -1;
            for (int j = 0; j < b.size(); ++j)
                if (!used[j] && (best < 0 || std::abs(a(i) - b(j)) < std::abs(a(i) - b(best)))) best = j;
            used[best] = true;
            EXPECT_LT(std::abs(a(i) - b(best)), 1e-12);
        }
    }
}

TEST(Eigensystem, SortedAndTraceConserved)
{
    std::mt19937_64 rng(9);
    for (int n : {3, 17, 40}) {
        MatC h = random_matrix(n, rng);
        VecC w = eigenvalues(h);
        for (int i = 1; i < n; ++i)
            EXPECT_TRUE(w(i - 1).real() < w(i).real() ||
                        (w(i - 1).real() == w(i).real() && w(i - 1).imag() <= w(i).imag()));
        EXPECT_LT(std::abs(w.sum() - h.trace()), 1e-8 * n);
    }
}

TEST(Eigensystem, HermitianInputHasRealSpectrum)
{
    ModelParams p = fig2a(8);
    p.gamma_up = 0;
    p.include_dgf = false;
    StateIndexer B({1, 1}, 8);
    MatC H = build_hamiltonian(p, B).dense();
    VecC w = eigenvalues(H);
    EXPECT_LE(w.imag().cwiseAbs().maxCoeff(), 1e-10 * H.norm());
}

TEST(Eigensystem, DefectiveInputIsFlagged)
{
    MatC j(2, 2);
    j << 0, 1, 0, 0;
    EigenSystem es = eigensystem(j, true);
    ASSERT_EQ(es.defective.size(), 1u);
    EXPECT_TRUE(es.defective[0]);
    Petermann k = petermann_factor(es, 0);
    EXPECT_TRUE(k.near_defective);
}

TEST(Eigensystem, DimensionCap)
{
    SpectralOptions opt;
    opt.max_dim = 10;
    EXPECT_THROW(eigensystem(MatC::Identity(11, 11), false, opt), std::invalid_argument);
}

TEST(Pairing, Examples)
{
    VecC real(3);
    real << 1, 2, 3;
    PairingReport r = pt_pairing_report(real, 0, 1e-10);
    EXPECT_EQ(r.singletons, 3);
    EXPECT_EQ(r.pairs, 0);
    EXPECT_EQ(r.max_defect, 0.0);

    VecC pair(2);
    pair << cplx(1, 1), cplx(1, -1);
    r = pt_pairing_report(pair, 0, 1e-10);
    EXPECT_EQ(r.pairs, 1);
    EXPECT_EQ(r.singletons, 0);
    EXPECT_EQ(r.max_defect, 0.0);

    VecC lone(1);
    lone << cplx(0, 1);
    EXPECT_EQ(pt_pairing_report(lone, 0, 1e-10).unpaired, 1);
}

TEST(Pairing, ShiftedSpectrumAtBulkBoundParameters)
{
    ModelParams p = from_angles(0.1, 0.9);
    p.L = 12;
    p.gamma_up = 0.5;
    StateIndexer B({1, 1}, 12);
    VecC e = eigenvalues(build_hamiltonian(p, B).dense());
    PairingReport r = pt_pairing_report(e, pt_shift(p, B.spec()), 1e-8);
    EXPECT_EQ(r.unpaired, 0);
    EXPECT_LT(r.max_defect, 1e-8);
    EXPECT_EQ(2 * r.pairs + r.singletons, e.size());
}

TEST(ConditionNumber, HermitianIsOne)
{
    ModelParams p = fig2a(8);
    p.gamma_up = 0;
    p.include_dgf = false;
    p.u_dn = 0.37; // lift accidental degeneracies between the two chains
    StateIndexer B({1, 1}, 8);
    MatC H = build_hamiltonian(p, B).dense();
    Eigen::SelfAdjointEigenSolver<MatC> sa(H);
    EXPECT_NEAR(condition_number(sa.eigenvectors()), 1.0, 1e-8);
    MatC d = VecC::LinSpaced(5, 1.0, 5.0).asDiagonal();
    EXPECT_NEAR(condition_number(eigensystem(d, false)), 1.0, 1e-8);
}

TEST(ConditionNumber, SingularIsInfinite)
{
    MatC v(2, 2);
    v << 1, 1, 0, 0;
    EXPECT_TRUE(std::isinf(condition_number(v)));
}

TEST(Petermann, HermitianIsOne)
{
    MatC h(3, 3);
    h << 1, cplx(0, 1), 0, cplx(0, -1), 2, 0.5, 0, 0.5, -1;
    EigenSystem es = eigensystem(h, true);
    for (int m = 0; m < 3; ++m) EXPECT_NEAR(petermann_factor(es, m).K, 1.0, 1e-8);
}

TEST(Petermann, TwoLevelClosedForm)
{
    // H = D sz + i c sx: right vectors (i c, E - D), left vectors (-i c, E - D)
    // with E = sqrt(D^2 - c^2); K = D^2 / (D^2 - c^2)
    const double c = 0.5, D = 2 * c;
    Eigen::Matrix2cd h;
    h << D, cplx(0, c), cplx(0, c), -D;
    const double E = std::sqrt(D * D - c * c);
    Eigen::Vector2cd r(cplx(0, c), E - D), l(cplx(0, -c), E - D);
    const double closed = (l.squaredNorm() * r.squaredNorm()) / std::norm(l.dot(r));
    EXPECT_NEAR(closed, 4.0 / 3.0, 1e-14);
    EigenSystem es = eigensystem(MatC(h), true);
    for (int m = 0; m < 2; ++m) EXPECT_NEAR(petermann_factor(es, m).K, 4.0 / 3.0, 1e-12);

    // approaching the exceptional point
    Eigen::Matrix2cd nearEP;
    const double Dn = c * (1 + 1e-6);
    nearEP << Dn, cplx(0, c), cplx(0, c), -Dn;
    EigenSystem en = eigensystem(MatC(nearEP), true);
    EXPECT_GT(petermann_factor(en, 0).K, 1e4);
}

TEST(PtDefect, ExactForCleanModel)
{
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> d(-2, 2);
    for (const BasisSpec& spec : {BasisSpec{1, 1}, BasisSpec{2, 2, Statistics::fermion, Statistics::boson},
                                  BasisSpec{2, 1, Statistics::boson, Statistics::boson}})
        for (auto bu : {Boundary::open, Boundary::periodic})
            for (auto bd : {Boundary::open, Boundary::periodic}) {
                ModelParams p = fig2a(8);
                p.u_up = d(rng), p.v_dn = d(rng), p.gamma_dn = 0.3;
                p.bc_up = bu, p.bc_dn = bd;
                StateIndexer B(spec, 8);
                EXPECT_LE(pt_defect(p, B), 1e-14);
                p.disorder_lambda = 0.2;
                p.disorder_seed = 5;
                EXPECT_GT(pt_defect(p, B), 1e-3);
            }
}

// The reflection sends the cell bond (2j-1, 2j) to (2j', 2j'-1), so the
// antisymmetric intra-cell term changes sign: P conj(H_NRH) P = -H_NRH.
TEST(PtDefect, NonReciprocalTermIsOdd)
{
    ModelParams p = fig2a(8);
    p.gamma_up = 0, p.include_dgf = false;
    p.u_up = p.v_up = p.u_dn = p.v_dn = 0;
    p.nrh_strength = 0.4;
    StateIndexer B({2, 1, Statistics::fermion, Statistics::boson}, 8);
    OperatorMatrix h = build_hamiltonian(p, B);
    const auto map = reflection_map(B);
    MatC H = h.dense(), R = MatC::Zero(B.dim(), B.dim());
    for (int i = 0; i < B.dim(); ++i)
        for (int j = 0; j < B.dim(); ++j)
            R(map[i].first, map[j].first) = std::conj(H(i, j)) * double(map[i].second * map[j].second);
    EXPECT_GT(H.norm(), 1.0);
    EXPECT_LE((R + H).norm(), 1e-14);
    EXPECT_NEAR(pt_defect(h, p, B), 2 * H.norm(), 1e-12);
}

TEST(PtDefect, SpectrumClosedUnderConjugation)
{
    ModelParams p = fig2a(8);
    p.bc_dn = Boundary::periodic;
    StateIndexer B({1, 1}, 8);
    ASSERT_LE(pt_defect(p, B), 1e-14);
    VecC e = eigenvalues(build_hamiltonian(p, B).dense());
    const cplx s = pt_shift(p, B.spec());
    for (int i = 0; i < e.size(); ++i) {
        double best = 1e300;
        for (int j = 0; j < e.size(); ++j) best = std::min(best, std::abs(e(j) + s - std::conj(e(i) + s)));
        EXPECT_LT(best, 1e-8);
    }
}

TEST(InverseIteration, RecoversEigenvector)
{
    ModelParams p = fig2a(8);
    StateIndexer B({1, 1}, 8);
    MatC H = build_hamiltonian(p, B).dense();
    VecC e = eigenvalues(H);
    int arg = 0;
    for (int m = 1; m < e.size(); ++m)
        if (e(m).imag() > e(arg).imag()) arg = m;
    double res = 1;
    VecC x = inverse_iteration(H, e(arg), 4, &res);
    EXPECT_NEAR(x.norm(), 1.0, 1e-12);
    EXPECT_LT(res, 1e-10);
}
