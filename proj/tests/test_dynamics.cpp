#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>
#include <cmath>
#include <numbers>
#include <random>

#include "chaocav/dynamics.hpp"
#include "chaocav/oracle.hpp"
#include "support.hpp"

using namespace chaocav;
using namespace testing_support;

namespace {

// Maclaurin series of erf summed in long double.
double erf_series(double x) {
    long double sum = 0.0L, term = x;  // term = (-1)^n x^{2n+1} / n!
    for (int n = 0; n < 50; ++n) {
        sum += term / (2 * n + 1);
        term *= -static_cast<long double>(x) * x / (n + 1);
    }
    return static_cast<double>(2.0L / std::sqrt(std::numbers::pi_v<long double>) * sum);
}

AtomicInit figure_init() { return {0.2, 0.0, 0.0, std::sqrt(1.0 - 0.04)}; }

AtomicInit random_init(std::mt19937_64& rng) {
    const auto v = random_state<4>(rng);
    return {v[0], v[1], v[2], v[3]};
}

ModelParams params(double gamma, PhaseModel pm = PhaseModel::mean_field, Variant v = Variant::corrected) {
    ModelParams p;
    p.gamma = gamma;
    p.phase_model = pm;
    p.variant = v;
    return p;
}

}  // namespace

TEST(Erf, MatchesSeriesOracle) {
    for (double x = 0.0; x <= 3.0; x += 0.05) EXPECT_NEAR(chaocav::erf(x), erf_series(x), 2e-15) << x;
    EXPECT_EQ(chaocav::erf(-0.7), -chaocav::erf(0.7));
}

TEST(AveragedQ, ExactLimits) {
    EXPECT_EQ(averaged_q(0.0, 0.8), 1.0);
    EXPECT_EQ(averaged_q(7.0, 0.0), 1.0);
    EXPECT_THROW(averaged_q(-1.0, 0.5), ValidationError);
    EXPECT_THROW(averaged_q(1.0, -0.5), ValidationError);
}

TEST(AveragedQ, ValueAtUnitTime) {
    // exp(-(1/2) sqrt(pi/2) erf(1/sqrt2)) from the series erf
    const double expected = std::exp(-0.5 * std::sqrt(std::numbers::pi * 0.5) * erf_series(std::sqrt(0.5)));
    EXPECT_NEAR(averaged_q(1.0, 0.5), expected, 1e-15);
    EXPECT_NEAR(averaged_q(1.0, 0.5), 0.651934, 1e-6);
}

TEST(AveragedQ, AsymptoticRegimes) {
    const double t = 1e-3;
    EXPECT_NEAR(averaged_q(t, 1.0) / std::exp(-t * t), 1.0, 1e-4);
    const double h = 1e-3;
    const double slope = -(std::log(averaged_q(100.0 + h, 1.0)) - std::log(averaged_q(100.0 - h, 1.0))) / (2 * h);
    EXPECT_NEAR(slope, 0.5 * std::sqrt(std::numbers::pi), 1e-3);
}

TEST(AveragedQ, MonotoneAndBounded) {
    for (double g : {0.1, 0.5, 1.0})
        for (double t = 0.1; t < 10.0; t += 0.1) {
            const double q = averaged_q(t, g);
            EXPECT_GT(q, 0.0);
            EXPECT_LT(q, 1.0);
            EXPECT_LT(averaged_q(t + 0.1, g), q);
            EXPECT_LT(averaged_q(t, g + 0.1), q);
        }
}

TEST(Sectors, CountFollowsVariant) {
    const auto f = coherent_weights(5.0, 1e-12);
    EXPECT_EQ(sector_count(f, Variant::corrected), f.n_max + 2);
    EXPECT_EQ(sector_count(f, Variant::verbatim), f.n_max + 1);
    const auto init = figure_init();
    const auto p = params(0.1);
    EXPECT_THROW(dressed_amplitudes(-1, 0.0, 1.0, 1.0, init, f, p), ValidationError);
    EXPECT_THROW(dressed_amplitudes(static_cast<long>(f.n_max) + 2, 0.0, 1.0, 1.0, init, f, p), ValidationError);
    EXPECT_NO_THROW(dressed_amplitudes(static_cast<long>(f.n_max) + 1, 0.0, 1.0, 1.0, init, f, p));
}

TEST(Sectors, InitialContentAtTimeZero) {
    std::mt19937_64 rng(11);
    const auto f = coherent_weights(3.0, 1e-12);
    for (int k = 0; k < 20; ++k) {
        const auto init = random_init(rng);
        for (long n : {0L, 1L, 4L, 9L}) {
            const auto a = dressed_amplitudes(n, 0.0, 1.0, 1.0, init, f, params(0.3));
            const auto ref = oracle::initial_sector(n, init, f);
            EXPECT_NEAR(std::abs(a.a - ref[0]), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(a.b - ref[1]), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(a.c - ref[2]), 0.0, 1e-15);
            EXPECT_NEAR(std::abs(a.d - ref[3]), 0.0, 1e-15);
        }
    }
}

// Closed form with exact phases against exp(-iHt) from an eigendecomposition
// of the interaction-frame block.
TEST(Sectors, ExactPhasesReproduceMatrixExponential) {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto f = coherent_weights(4.0, 1e-12);
    for (int k = 0; k < 40; ++k) {
        const auto init = random_init(rng);
        const long n = static_cast<long>(uni(rng) * 30.0);
        const double t = 5.0 * uni(rng);
        ModelParams p = params(0.0, PhaseModel::coherent);
        p.omega_rabi = 0.2 + 2.0 * uni(rng);
        p.g0 = 0.3 + uni(rng);
        p.coupling_phase = 1.2 * uni(rng);
        oracle::HamiltonianParams hp;
        hp.omega_rabi = p.omega_rabi;
        hp.g0 = p.g0;

        const auto h = to_eigen(oracle::build_block(n, hp, p.coupling_phase, oracle::Frame::interaction).matrix);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4cd> es(h);
        Eigen::Vector4cd phases;
        for (int i = 0; i < 4; ++i) phases(i) = std::polar(1.0, -es.eigenvalues()(i) * t);
        const Eigen::Matrix4cd u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
        const auto psi0 = oracle::initial_sector(n, init, f);
        Eigen::Vector4cd v0(psi0[0], psi0[1], psi0[2], psi0[3]);
        const Eigen::Vector4cd ref = u * v0;

        const auto [qp, qm] = sector_phase(n, t, p);
        const auto a = dressed_amplitudes(n, t, qp, qm, init, f, p);
        EXPECT_LT(std::abs(a.a - ref(0)), 1e-12) << "n " << n << " t " << t;
        EXPECT_LT(std::abs(a.b - ref(1)), 1e-12);
        EXPECT_LT(std::abs(a.c - ref(2)), 1e-12);
        EXPECT_LT(std::abs(a.d - ref(3)), 1e-12);
    }
}

TEST(Density, InitialStateIsReproducedByCorrectedVariant) {
    std::mt19937_64 rng(13);
    for (int k = 0; k < 10; ++k) {
        const auto init = random_init(rng);
        const auto expected = ComplexMatrix4::projector(init.as_vector());
        for (double g : {0.0, 0.5, 1.0}) {
            const auto r = atomic_density(0.0, init, params(g));
            EXPECT_LT(max_abs_diff(r.rho, expected), 1e-9);
            EXPECT_NEAR(r.pre_norm_trace, 1.0, 1e-11);
        }
    }
}

TEST(Density, VerbatimVariantDeviatesAtTimeZero) {
    // Recorded deviation of the printed amplitudes; see the notes in README.
    const auto init = figure_init();
    const auto r = atomic_density(0.0, init, params(0.1, PhaseModel::mean_field, Variant::verbatim));
    EXPECT_GT(max_abs_diff(r.rho, ComplexMatrix4::projector(init.as_vector())), 0.1);
    EXPECT_LT(r.pre_norm_trace, 0.1);
}

// The index-shifted sums are the partial trace of the full state vector.
TEST(Density, ShiftedSumsEqualDirectFieldTrace) {
    std::mt19937_64 rng(14);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 30; ++k) {
        const auto init = random_init(rng);
        const auto pm = k % 2 ? PhaseModel::coherent : PhaseModel::mean_field;
        const auto variant = k % 3 ? Variant::corrected : Variant::verbatim;
        ModelParams p = params(uni(rng), pm, variant);
        p.alpha = 1.0 + 5.0 * uni(rng);
        const auto f = coherent_weights(p.alpha, p.eps_trunc);
        const auto s = amplitude_stream(8.0 * uni(rng), init, f, p);
        EXPECT_LT(max_abs_diff(assemble_density(s), oracle::reduced_atomic_state(s)), 1e-14);
    }
}

TEST(Density, PhysicalAcrossTheFigureGrid) {
    const auto init = figure_init();
    for (auto pm : {PhaseModel::mean_field, PhaseModel::coherent})
        for (double g = 0.0; g <= 1.0001; g += 0.1)
            for (double t = 0.0; t <= 10.0; t += 0.25) {
                const auto r = atomic_density(t, init, params(g, pm));
                EXPECT_FALSE(density_violation(r.rho).has_value()) << "t " << t << " g " << g;
                EXPECT_LE(r.pre_norm_trace, 1.0 + 1e-12);
                EXPECT_GT(r.pre_norm_trace, 0.0);
            }
}

TEST(Density, NormConservedWithExactPhases) {
    const auto init = figure_init();
    const auto f = coherent_weights(5.0, 1e-12);
    const double kept = f.norm_squared();  // every atomic component sees the same truncated field
    for (double t : {0.0, 0.5, 3.0, 10.0}) {
        const auto r = atomic_density(t, init, params(0.0, PhaseModel::coherent));
        EXPECT_NEAR(r.pre_norm_trace, kept, 1e-12);
    }
}

TEST(Density, MeanFieldTraceDecaysTowardsPlateau) {
    const auto init = figure_init();
    const double t0 = atomic_density(0.0, init, params(0.5)).pre_norm_trace;
    const double t5 = atomic_density(5.0, init, params(0.5)).pre_norm_trace;
    const double t10 = atomic_density(10.0, init, params(0.5)).pre_norm_trace;
    EXPECT_GT(t0, t5);
    EXPECT_GE(t5, t10);
    EXPECT_NEAR(t5, t10, 5e-3);
}

TEST(Validation, ParametersAndInitialState) {
    EXPECT_THROW(atomic_density(-0.1, figure_init(), params(0.1)), ValidationError);
    EXPECT_THROW(atomic_density(1.0, figure_init(), params(-0.1)), ValidationError);
    EXPECT_THROW(atomic_density(1.0, AtomicInit{1.0, 1.0, 0.0, 0.0}, params(0.1)), ValidationError);
    ModelParams bad = params(0.1);
    bad.eps_trunc = 0.0;
    EXPECT_THROW(bad.validate(), ValidationError);
    bad = params(0.1);
    bad.g0 = std::numeric_limits<double>::infinity();
    EXPECT_THROW(bad.validate(), ValidationError);
    EXPECT_NO_THROW(atomic_density(1.0, AtomicInit{1.0, 0.0, 0.0, 0.0}, params(0.1)));
}

TEST(GroundSector, OnlyCorrectedVariantCarriesIt) {
    const auto f = coherent_weights(2.0, 1e-12);
    const AtomicInit init{1.0, 0.0, 0.0, 0.0};
    EXPECT_EQ(ground_amplitude(init, f, Variant::corrected), Complex{f.weight(0)});
    EXPECT_EQ(ground_amplitude(init, f, Variant::verbatim), Complex{});
}
