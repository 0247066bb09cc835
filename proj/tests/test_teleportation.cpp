#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chaocav/teleportation.hpp"
#include "support.hpp"

using namespace chaocav;
using namespace testing_support;

namespace {

UnknownQubit random_qubit(std::mt19937_64& rng) {
    const auto v = random_state<2>(rng);
    return {v[0], v[1]};
}

AtomicInit figure_init() { return {0.2, 0.0, 0.0, std::sqrt(1.0 - 0.04)}; }

// phi+ branch fidelity for the pure channel a|gg> + b|ee> (a, b real): Bob
// holds alpha a|g> + beta b|e> up to normalization.
double two_component_fidelity(double a, double b, const UnknownQubit& u) {
    const double pa = std::norm(u.alpha_u), pb = std::norm(u.beta_u);
    return std::pow(pa * a + pb * b, 2) / (pa * a * a + pb * b * b);
}

}  // namespace

TEST(BellProjection, BellChannelTeleportsEveryQubit) {
    std::mt19937_64 rng(31);
    const auto channel = ComplexMatrix4::projector(bell_vector(BellLabel::phi_plus));
    for (int k = 0; k < 50; ++k) {
        const auto u = random_qubit(rng);
        for (const auto& o : bell_project_teleport(channel, u)) {
            EXPECT_TRUE(o.defined);
            EXPECT_NEAR(o.fidelity, 1.0, 1e-10) << to_string(o.bell_label);
            EXPECT_NEAR(o.outcome_weight, 0.25, 1e-12);
        }
    }
}

TEST(BellProjection, MaximallyMixedChannelGivesOneHalf) {
    std::mt19937_64 rng(32);
    const auto channel = ComplexMatrix4::identity() * Complex{0.25};
    for (int k = 0; k < 50; ++k)
        for (const auto& o : bell_project_teleport(channel, random_qubit(rng))) {
            EXPECT_NEAR(o.fidelity, 0.5, 1e-10);
            EXPECT_NEAR(o.outcome_weight, 0.25, 1e-12);
        }
}

TEST(BellProjection, GroundChannelGivesPopulation) {
    std::mt19937_64 rng(33);
    const auto channel = ComplexMatrix4::projector(ComplexVector<4>{1.0, 0.0, 0.0, 0.0});
    for (int k = 0; k < 50; ++k) {
        const auto u = random_qubit(rng);
        const auto out = bell_project_teleport(channel, u);
        EXPECT_NEAR(out[0].fidelity, std::norm(u.alpha_u), 1e-10);  // phi+: Bob keeps |g>
        EXPECT_NEAR(out[1].fidelity, std::norm(u.alpha_u), 1e-10);  // phi-: Z|g> ~ |g>
        EXPECT_NEAR(out[2].fidelity, std::norm(u.beta_u), 1e-10);   // psi+: X|g> = |e>
        EXPECT_NEAR(out[3].fidelity, std::norm(u.beta_u), 1e-10);
    }
}

TEST(BellProjection, OutcomeWeightsSumToOne) {
    std::mt19937_64 rng(34);
    for (int k = 0; k < 50; ++k) {
        double total = 0.0;
        for (const auto& o : bell_project_teleport(random_density<4>(rng), random_qubit(rng))) total += o.outcome_weight;
        EXPECT_NEAR(total, 1.0, 1e-12);
    }
}

TEST(BellProjection, ZeroWeightBranchIsMarkedUndefined) {
    // Alice holds |g>|e>, orthogonal to phi+-.
    const auto channel = ComplexMatrix4::projector(ComplexVector<4>{0.0, 0.0, 1.0, 0.0});
    const auto out = bell_project_teleport(channel, UnknownQubit{1.0, 0.0});
    EXPECT_FALSE(out[0].defined);
    EXPECT_FALSE(out[1].defined);
    EXPECT_TRUE(out[2].defined);
    EXPECT_EQ(out[0].outcome_weight, 0.0);
}

TEST(BellProjection, RejectsInvalidInputs) {
    EXPECT_THROW(bell_project_teleport(ComplexMatrix4::identity(), UnknownQubit{1.0, 0.0}), ValidationError);
    EXPECT_THROW(bell_project_teleport(ComplexMatrix4::identity() * Complex{0.25}, UnknownQubit{1.0, 1.0}),
                 ValidationError);
    EXPECT_THROW(UnknownQubit::from_real_alpha(1.1), ValidationError);
}

TEST(ClosedForm, MatchesProjectionOnRandomStates) {
    std::mt19937_64 rng(35);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    for (int k = 0; k < 60; ++k) {
        const auto v = random_state<4>(rng);
        const AtomicInit init{v[0], v[1], v[2], v[3]};
        const auto u = random_qubit(rng);
        ModelParams p;
        p.gamma = uni(rng);
        p.alpha = 1.0 + 5.0 * uni(rng);
        p.phase_model = k % 2 ? PhaseModel::coherent : PhaseModel::mean_field;
        const double t = 6.0 * uni(rng);
        const auto proj = bell_project_teleport(atomic_density(t, init, p).rho, u)[0];
        const auto cf = bob_state_closed_form(t, init, p, u);
        EXPECT_LT(max_abs_diff(proj.bob_state, cf.outcome.bob_state), 1e-9) << k;
        EXPECT_NEAR(proj.outcome_weight, cf.outcome.outcome_weight, 1e-9);
        EXPECT_NEAR(proj.fidelity, cf.outcome.fidelity, 1e-9);
        EXPECT_NEAR((cf.kappa[0] + cf.kappa[3]).real(), cf.outcome.outcome_weight, 1e-15);
        EXPECT_LT(std::abs(cf.kappa[1] - std::conj(cf.kappa[2])), 1e-14);
    }
}

TEST(ClosedForm, TwoComponentChannelAtTimeZero) {
    const auto u = UnknownQubit::from_real_alpha(0.95);
    for (double a : {0.05, 0.2, 0.5, 0.7, 0.9}) {
        const double b = std::sqrt(1.0 - a * a);
        ModelParams p;
        p.gamma = 0.3;
        const auto cf = bob_state_closed_form(0.0, AtomicInit{a, 0.0, 0.0, b}, p, u);
        EXPECT_NEAR(cf.outcome.fidelity, two_component_fidelity(a, b, u), 1e-12) << a;
    }
    // the figure state: 0.5875 regardless of gamma
    for (double g : {0.0, 0.5, 1.0}) {
        ModelParams p;
        p.gamma = g;
        EXPECT_NEAR(bob_state_closed_form(0.0, figure_init(), p, u).outcome.fidelity, 0.587453, 1e-6);
    }
}

TEST(ClosedForm, DegenerateBranchThrows) {
    ModelParams p;
    p.gamma = 0.2;
    EXPECT_THROW(bob_state_closed_form(0.0, AtomicInit{0.0, 0.0, 1.0, 0.0}, p, UnknownQubit{1.0, 0.0}),
                 DegenerateOutcome);
}

TEST(ClosedForm, RealQubitKeepsCrossTermsOut) {
    // beta = 0: only |A|^2, A B* and |B|^2 sums enter.
    ModelParams p;
    p.gamma = 0.4;
    const auto cf = bob_state_closed_form(1.3, figure_init(), p, UnknownQubit{1.0, 0.0});
    const auto proj = bell_project_teleport(atomic_density(1.3, figure_init(), p).rho, UnknownQubit{1.0, 0.0})[0];
    EXPECT_LT(max_abs_diff(cf.outcome.bob_state, proj.bob_state), 1e-12);
    EXPECT_NEAR(cf.outcome.fidelity, cf.outcome.bob_state(0, 0).real(), 1e-15);
}

TEST(ClosedForm, VerbatimIndicesBreakHermiticity) {
    // The printed kappa_2 / kappa_3 are not conjugate pairs once C and D
    // overlap; the corrected indices are.
    ModelParams p;
    p.gamma = 0.0;
    p.variant = Variant::verbatim;
    const auto cf = bob_state_closed_form(0.5, figure_init(), p, UnknownQubit::from_real_alpha(0.95));
    EXPECT_GT(cf.outcome.bob_state.hermiticity_error(), 1e-6);
}

TEST(Sweep, GridOrderAndWorkerIndependence) {
    std::vector<GridPoint> grid;
    for (double g : {0.0, 0.5, 1.0})
        for (double t : {0.0, 0.1, 1.0, 2.5}) grid.push_back({t, g});
    ModelParams p;
    const auto u = UnknownQubit::from_real_alpha(0.95);
    const auto serial = teleport_fidelity_sweep(grid, figure_init(), p, u, 1);
    const auto parallel = teleport_fidelity_sweep(grid, figure_init(), p, u, 4);
    ASSERT_EQ(serial.size(), grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        EXPECT_EQ(serial[i].t, grid[i].t);
        EXPECT_EQ(serial[i].gamma, grid[i].gamma);
        EXPECT_FALSE(serial[i].error.has_value());
        EXPECT_EQ(serial[i].fidelity, parallel[i].fidelity);
        EXPECT_GE(serial[i].fidelity, 0.0);
        EXPECT_LE(serial[i].fidelity, 1.0);
        ModelParams q = p;
        q.gamma = grid[i].gamma;
        EXPECT_EQ(serial[i].fidelity, bob_state_closed_form(grid[i].t, figure_init(), q, u).outcome.fidelity);
    }
}

TEST(Sweep, FailuresAreRecordedPerRow) {
    const std::vector<GridPoint> grid{{0.0, 0.1}, {-1.0, 0.1}};
    const auto rows = teleport_fidelity_sweep(grid, figure_init(), ModelParams{}, UnknownQubit{1.0, 0.0}, 1);
    EXPECT_FALSE(rows[0].error.has_value());
    ASSERT_TRUE(rows[1].error.has_value());
    EXPECT_NE(rows[1].error->find("t must be"), std::string::npos);
}
