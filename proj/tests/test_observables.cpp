#include <gtest/gtest.h>

#include <numeric>
#include <random>

#include <dgf/meanfield.hpp>
#include <dgf/observables.hpp>
#include <dgf/spectral.hpp>

using namespace dgf;

namespace {

// Amplitude array A(j_up, j_dn) -> state vector for one particle per species.
StateVector from_grid(const StateIndexer& B, const MatC& A)
{
    VecC a(B.dim());
    for (int i = 0; i < B.L(); ++i)
        for (int j = 0; j < B.L(); ++j) a(B.index(Config{{i, 0}, 1}, Config{{j, 0}, 1})) = A(i, j);
    return StateVector::normalized(B, a);
}

StateVector random_state(const StateIndexer& B, std::mt19937_64& rng)
{
    std::normal_distribution<double> d;
    VecC a(B.dim());
    for (auto& x : a) x = cplx(d(rng), d(rng));
    return StateVector::normalized(B, a);
}

ModelParams fig2(int L)
{
    ModelParams p;
    p.L = L;
    p.u_up = 2, p.v_up = 5, p.u_dn = 1, p.v_dn = 0.5;
    p.gamma_up = 0.5, p.t = 0.5;
    p.bc_up = p.bc_dn = Boundary::open;
    return p;
}

} // namespace

TEST(Density, ProductState)
{
    StateIndexer B({1, 1}, 8);
    StateVector s = StateVector::product(B, {3}, {5});
    VecR up = density_profile(s, Species::up), dn = density_profile(s, Species::dn);
    for (int j = 1; j <= 8; ++j) {
        EXPECT_EQ(up(j - 1), j == 3 ? 1.0 : 0.0);
        EXPECT_EQ(dn(j - 1), j == 5 ? 1.0 : 0.0);
    }
}

TEST(Density, FlatSuperposition)
{
    StateIndexer B({1, 1}, 10);
    MatC A = MatC::Zero(10, 10);
    A.col(3).setOnes();
    VecR up = density_profile(from_grid(B, A), Species::up);
    for (int j = 0; j < 10; ++j) EXPECT_NEAR(up(j), 0.1, 1e-15);
    EXPECT_NEAR(mean_position(from_grid(B, A), Species::up), 5.5, 1e-13);
}

TEST(Density, SumsToParticleCount)
{
    std::mt19937_64 rng(1);
    for (BasisSpec spec : {BasisSpec{1, 1}, BasisSpec{2, 1}, BasisSpec{2, 2, Statistics::fermion, Statistics::boson}}) {
        StateIndexer B(spec, 6);
        StateVector s = random_state(B, rng);
        EXPECT_NEAR(density_profile(s, Species::up).sum(), spec.n_up, 1e-10);
        EXPECT_NEAR(density_profile(s, Species::dn).sum(), spec.n_dn, 1e-10);
    }
}

TEST(Density, RejectsUnnormalized)
{
    StateIndexer B({1, 1}, 4);
    StateVector s(B, VecC::Constant(16, 1.0));
    EXPECT_THROW(density_profile(s, Species::up), std::invalid_argument);
    EXPECT_THROW(entanglement_entropy(s), std::invalid_argument);
    EXPECT_THROW(interspecies_correlation(s), std::invalid_argument);
}

TEST(Density, EdgeStateOddSiteRatio)
{
    // up in the zero-energy left edge state: odd-site weights fall by kappa^2
    ModelParams p = fig2(16);
    StateIndexer B({1, 1}, 16);
    VecC e = left_edge_state(p);
    MatC A = e * VecC::Unit(16, 6).transpose();
    VecR up = density_profile(from_grid(B, A), Species::up);
    const double eta = std::pow(p.u_up / p.v_up, 2);
    for (int j = 0; j + 2 < 16; j += 2) {
        EXPECT_NEAR(up(j + 2) / up(j), eta, 1e-12);
        EXPECT_EQ(up(j + 1), 0.0);
    }
}

TEST(MeanPosition, Examples)
{
    StateIndexer B({1, 1}, 32);
    StateVector s = StateVector::product(B, {15}, {18});
    EXPECT_EQ(mean_position(s, Species::up), 15.0);
    EXPECT_EQ(mean_position(s, Species::dn), 18.0);

    ModelParams p = fig2(32);
    VecC e = left_edge_state(p);
    MatC A = e * VecC::Unit(32, 0).transpose();
    const double eta = 0.16;
    double num = 0, den = 0;
    for (int j = 1; j <= 16; ++j) {
        num += (2 * j - 1) * std::pow(eta, j - 1);
        den += std::pow(eta, j - 1);
    }
    const double x = mean_position(from_grid(B, A), Species::up);
    EXPECT_NEAR(x, num / den, 1e-12);
    EXPECT_LT(x, 3.0);
}

TEST(EdgeImbalance, Examples)
{
    StateIndexer B({1, 1}, 8);
    EXPECT_EQ(edge_imbalance(StateVector::product(B, {4}, {1})), 1.0);
    EXPECT_EQ(edge_imbalance(StateVector::product(B, {4}, {8})), -1.0);

    // site-reversal symmetric amplitudes
    std::mt19937_64 rng(3);
    std::normal_distribution<double> d;
    MatC A(8, 8);
    for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j) A(i, j) = A(7 - i, 7 - j) = cplx(d(rng), d(rng));
    EXPECT_NEAR(edge_imbalance(from_grid(B, A)), 0.0, 1e-15);
}

TEST(BiorthogonalDensity, HermitianEqualsOrdinary)
{
    ModelParams p = fig2(8);
    p.gamma_up = 0, p.include_dgf = false;
    p.u_dn = 0.37;
    StateIndexer B({1, 1}, 8);
    EigenSystem es = eigensystem(build_hamiltonian(p, B), true);
    for (int m = 0; m < es.dim(); m += 7) {
        StateVector r(B, es.right.col(m)), l(B, es.left_ket(m));
        VecC bo = biorthogonal_density(l, r, Species::dn);
        VecR n = density_profile(StateVector::normalized(B, es.right.col(m)), Species::dn);
        EXPECT_LT((bo - n.cast<cplx>()).norm(), 1e-8);
    }
}

TEST(BiorthogonalDensity, SumsToParticleCount)
{
    ModelParams p = fig2(8);
    StateIndexer B({2, 1, Statistics::fermion, Statistics::boson}, 8);
    EigenSystem es = eigensystem(build_hamiltonian(p, B), true);
    for (int m = 0; m < es.dim(); m += 5) {
        StateVector r(B, es.right.col(m)), l(B, es.left_ket(m), Normalization::biorthogonal_pair);
        EXPECT_LT(std::abs(biorthogonal_density(l, r, Species::up).sum() - 2.0), 1e-8);
        EXPECT_LT(std::abs(biorthogonal_density(l, r, Species::dn).sum() - 1.0), 1e-8);
    }
}

TEST(BiorthogonalDensity, RejectsNonBiorthonormalPair)
{
    StateIndexer B({1, 1}, 4);
    StateVector a = StateVector::product(B, {1}, {2}), b = StateVector::product(B, {2}, {2});
    EXPECT_THROW(biorthogonal_density(a, b, Species::up), std::invalid_argument);
}

TEST(Entropy, ProductAndMaximal)
{
    StateIndexer B({1, 1}, 16);
    EXPECT_NEAR(entanglement_entropy(StateVector::product(B, {2}, {9})), 0.0, 1e-14);
    EXPECT_NEAR(entanglement_entropy(from_grid(B, MatC::Identity(16, 16))), 4.0, 1e-12);
    // any rank-one amplitude grid is a product state
    std::mt19937_64 rng(5);
    std::normal_distribution<double> d;
    VecC x(16), y(16);
    for (int i = 0; i < 16; ++i) x(i) = cplx(d(rng), d(rng)), y(i) = cplx(d(rng), d(rng));
    EXPECT_NEAR(entanglement_entropy(from_grid(B, x * y.transpose())), 0.0, 1e-10);
}

TEST(Entropy, BoundsAndPermutationInvariance)
{
    std::mt19937_64 rng(7);
    StateIndexer B({1, 1}, 12);
    std::vector<int> perm(12);
    std::iota(perm.begin(), perm.end(), 0);
    for (int rep = 0; rep < 5; ++rep) {
        StateVector s = random_state(B, rng);
        double S = entanglement_entropy(s);
        EXPECT_GE(S, 0.0);
        EXPECT_LE(S, std::log2(12.0) + 1e-12);
        std::shuffle(perm.begin(), perm.end(), rng);
        VecC a(B.dim());
        for (int i = 0; i < 12; ++i)
            for (int j = 0; j < 12; ++j)
                a(B.index(Config{{perm[i], 0}, 1}, Config{{j, 0}, 1})) = s.amp(B.index(Config{{i, 0}, 1}, Config{{j, 0}, 1}));
        EXPECT_NEAR(entanglement_entropy(StateVector(B, a)), S, 1e-12);
    }
}

TEST(Entropy, RejectsTwoParticles)
{
    StateIndexer B({2, 1}, 4);
    EXPECT_THROW(entanglement_entropy(StateVector::product(B, {1, 2}, {1})), std::invalid_argument);
}

TEST(ReducedDensity, HermitianPsdUnitTrace)
{
    std::mt19937_64 rng(11);
    StateIndexer B({1, 1}, 10);
    for (int rep = 0; rep < 5; ++rep) {
        MatC rho = reduced_density_dn(random_state(B, rng));
        EXPECT_LT((rho - rho.adjoint()).norm(), 1e-14);
        EXPECT_NEAR(rho.trace().real(), 1.0, 1e-10);
        Eigen::SelfAdjointEigenSolver<MatC> es(rho);
        EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12);
    }
}

TEST(InterspeciesCorrelation, Examples)
{
    StateIndexer B({1, 1}, 8);
    Correlation c = interspecies_correlation(StateVector::product(B, {2}, {5}));
    EXPECT_EQ(c.normalized.sum(), 1.0);
    EXPECT_EQ(c.normalized(1, 4), 1.0);

    Correlation d = interspecies_correlation(from_grid(B, MatC::Identity(8, 8)));
    EXPECT_LT((d.normalized - MatR::Identity(8, 8)).norm(), 1e-14);
    EXPECT_NEAR(diagonal_mass(d.normalized, 0), 1.0, 1e-15);
}

TEST(InterspeciesCorrelation, MarginalsAndRange)
{
    std::mt19937_64 rng(13);
    StateIndexer B({1, 1}, 8);
    StateVector s = random_state(B, rng);
    Correlation c = interspecies_correlation(s);
    EXPECT_LT((c.raw.rowwise().sum() - density_profile(s, Species::up)).norm(), 1e-14);
    EXPECT_LT((c.raw.colwise().sum().transpose() - density_profile(s, Species::dn)).norm(), 1e-14);
    EXPECT_EQ(c.normalized.maxCoeff(), 1.0);
    EXPECT_GE(c.normalized.minCoeff(), 0.0);
}

TEST(InterspeciesCorrelation, BiorthogonalKeepsComplexValues)
{
    ModelParams p = fig2(8);
    StateIndexer B({1, 1}, 8);
    EigenSystem es = eigensystem(build_hamiltonian(p, B), true);
    StateVector r(B, es.right.col(3)), l(B, es.left_ket(3));
    ComplexCorrelation c = interspecies_correlation(l, r);
    EXPECT_NEAR(c.normalized.cwiseAbs().maxCoeff(), 1.0, 1e-15);
    EXPECT_LT(std::abs(c.raw.sum() - 1.0), 1e-8);
    VecC marg = c.raw.rowwise().sum();
    EXPECT_LT((marg - biorthogonal_density(l, r, Species::up)).norm(), 1e-12);
}

TEST(IntraspeciesCorrelation, Examples)
{
    StateIndexer Bf({2, 2, Statistics::fermion, Statistics::fermion}, 6);
    std::mt19937_64 rng(17);
    Correlation f = intraspecies_correlation(random_state(Bf, rng), Species::up);
    for (int j = 0; j < 6; ++j) EXPECT_EQ(f.normalized(j, j), 0.0);
    EXPECT_LT((f.raw - f.raw.transpose()).norm(), 1e-15);
    EXPECT_NEAR(f.raw.sum(), 2.0, 1e-12); // N(N-1)

    StateIndexer Bb({2, 1, Statistics::boson, Statistics::boson}, 8);
    Correlation g = intraspecies_correlation(StateVector::product(Bb, {4, 4}, {1}), Species::up);
    EXPECT_EQ(g.raw(3, 3), 2.0);
    EXPECT_EQ(g.normalized.sum(), 1.0);

    Correlation h = intraspecies_correlation(StateVector::product(Bb, {2, 7}, {1}), Species::up);
    EXPECT_EQ(h.normalized(1, 6), 1.0);
    EXPECT_EQ(h.normalized(6, 1), 1.0);
    EXPECT_EQ(h.normalized.sum(), 2.0);

    EXPECT_THROW(intraspecies_correlation(StateVector::product(Bb, {2, 7}, {1}), Species::dn),
                 std::invalid_argument);
}

TEST(DiagonalMass, Bands)
{
    MatR m = MatR::Ones(5, 5);
    EXPECT_NEAR(diagonal_mass(m, 0), 5.0 / 25, 1e-15);
    EXPECT_NEAR(diagonal_mass(m, 1), 13.0 / 25, 1e-15);
    EXPECT_NEAR(diagonal_mass(m, 4), 1.0, 1e-15);
}
