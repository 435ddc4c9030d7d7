#include "randstab/errors.hpp"
#include "randstab/riccati.hpp"
#include "randstab/system.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace randstab;
using randstab::testing::gaussian_matrix;
using randstab::testing::random_orthogonal;
using randstab::testing::rel_diff;

namespace {

DynamicsParameter scalar_plant(double a, double b) {
    return DynamicsParameter(Matrix::Constant(1, 1, a), Matrix::Constant(1, 1, b));
}

CostPair scalar_costs(double q, double r) {
    return CostPair(Matrix::Constant(1, 1, q), Matrix::Constant(1, 1, r));
}

// Scalar DARE k = q + a^2 k - a^2 b^2 k^2 / (b^2 k + r) rearranges to
// b^2 k^2 + (r - a^2 r - q b^2) k - q r = 0; the stabilizing root is the positive one.
double scalar_dare_oracle(double a, double b, double q, double r) {
    const double qa = b * b;
    const double qb = r - a * a * r - q * b * b;
    const double qc = -q * r;
    return (-qb + std::sqrt(qb * qb - 4.0 * qa * qc)) / (2.0 * qa);
}

}  // namespace

TEST_CASE("scalar DARE matches the quadratic oracle") {
    const RiccatiSolution sol = solve_dare(scalar_plant(2.0, 1.0), scalar_costs(1.0, 1.0));
    const double k = scalar_dare_oracle(2.0, 1.0, 1.0, 1.0);
    CHECK(k == doctest::Approx(2.0 + std::sqrt(5.0)).epsilon(1e-14));
    CHECK(std::abs(sol.k(0, 0) - k) < 1e-9);
    const double gain = -2.0 * k / (k + 1.0);
    CHECK(std::abs(sol.gain(0, 0) - gain) < 1e-9);
    CHECK(std::abs((2.0 + sol.gain(0, 0)) - (3.0 - std::sqrt(5.0)) / 2.0) < 1e-9);
}

TEST_CASE("scalar DARE oracle over random coefficients") {
    Rng rng(11);
    std::uniform_real_distribution<double> coef(-3.0, 3.0);
    std::uniform_real_distribution<double> weight(0.1, 5.0);
    for (int i = 0; i < 50; ++i) {
        double b = coef(rng);
        if (std::abs(b) < 0.2) b = 0.2;
        const double a = coef(rng);
        const double q = weight(rng);
        const double r = weight(rng);
        const RiccatiSolution sol = solve_dare(scalar_plant(a, b), scalar_costs(q, r));
        CHECK(rel_diff(sol.k(0, 0), scalar_dare_oracle(a, b, q, r)) < 1e-9);
    }
}

TEST_CASE("A = 0 gives K = Q and L = 0") {
    Rng rng(3);
    const Matrix b = gaussian_matrix(rng, 3, 2);
    const Matrix q = (Matrix(3, 3) << 2, 0.5, 0, 0.5, 1, 0, 0, 0, 3).finished();
    const CostPair costs(q, Matrix::Identity(2, 2));
    const RiccatiSolution sol = solve_dare(DynamicsParameter(Matrix::Zero(3, 3), b), costs);
    CHECK((sol.k - q).norm() == 0.0);
    CHECK(sol.gain.norm() == 0.0);
}

TEST_CASE("benchmark plant reproduces the reference K and L") {
    const auto [plant, costs] = preset_benchmark();
    const RiccatiSolution sol = solve_dare(plant, costs);
    const Matrix k_ref = (Matrix(3, 3) << 2.83, 0.00, -0.87,
                                          0.00, 2.20, -0.32,
                                          -0.87, -0.32, 7.31).finished();
    const Matrix l_ref = (Matrix(3, 3) << 0.45, -0.19, 0.50,
                                          -0.62, 0.35, -0.04,
                                          0.13, 0.06, -0.77).finished();
    CHECK((sol.k - k_ref).cwiseAbs().maxCoeff() <= 0.02);
    CHECK((sol.gain - l_ref).cwiseAbs().maxCoeff() <= 0.02);
    CHECK(std::abs(spectral_radius(plant.closed_loop(sol.gain)) - 0.51) <= 0.01);
    CHECK(sol.residual <= SolverOptions{}.tolerance * std::max(1.0, operator_norm(sol.k)));
    CHECK(riccati_residual(sol.k, plant, costs) == sol.residual);
}

TEST_CASE("feedback_gain examples") {
    const Matrix i3 = Matrix::Identity(3, 3);
    const Matrix l = feedback_gain(i3, DynamicsParameter(i3, i3), i3);
    CHECK((l + 0.5 * i3).norm() < 1e-15);

    const double k = 2.0 + std::sqrt(5.0);
    CHECK(feedback_gain(Matrix::Constant(1, 1, k), scalar_plant(2.0, 1.0), Matrix::Identity(1, 1))(0, 0) ==
          doctest::Approx(-1.61803).epsilon(1e-5));

    const auto [plant, costs] = preset_benchmark();
    const Matrix k_ref = (Matrix(3, 3) << 2.83, 0.00, -0.87,
                                          0.00, 2.20, -0.32,
                                          -0.87, -0.32, 7.31).finished();
    const Matrix l_ref = (Matrix(3, 3) << 0.45, -0.19, 0.50,
                                          -0.62, 0.35, -0.04,
                                          0.13, 0.06, -0.77).finished();
    CHECK((feedback_gain(k_ref, plant, costs.r()) - l_ref).cwiseAbs().maxCoeff() <= 0.02);
}

TEST_CASE("singular inner matrix is reported") {
    const Matrix z = Matrix::Zero(1, 1);
    CHECK_THROWS_AS((void)feedback_gain(z, scalar_plant(1.0, 1.0), z), Error);
    try {
        (void)feedback_gain(z, scalar_plant(1.0, 1.0), z);
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularInnerMatrix);
    }
}

TEST_CASE("unstabilizable plant does not converge") {
    // a = 2 with b = 0 has no stabilizing gain; the iteration grows like 4^t.
    try {
        (void)solve_dare(scalar_plant(2.0, 0.0), scalar_costs(1.0, 1.0));
        FAIL("expected NoConvergence");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NoConvergence);
    }
}

TEST_CASE("cost validation") {
    CHECK_THROWS_AS(CostPair(Matrix::Zero(2, 2), Matrix::Identity(1, 1)), Error);
    CHECK_THROWS_AS(CostPair(Matrix::Identity(2, 2), (Matrix(2, 2) << 1, 1, 0, 1).finished()), Error);
    CHECK_THROWS_AS(CostPair(Matrix::Identity(2, 3), Matrix::Identity(1, 1)), Error);
}

TEST_CASE("spectral radius examples") {
    CHECK(spectral_radius(Matrix::Identity(3, 3)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(spectral_radius((Matrix(2, 2) << 0, 2, -2, 0).finished()) == doctest::Approx(2.0).epsilon(1e-14));
    Matrix bad = Matrix::Identity(2, 2);
    bad(0, 1) = std::nan("");
    CHECK_THROWS_AS((void)spectral_radius(bad), Error);
    CHECK_THROWS_AS((void)spectral_radius(Matrix::Zero(2, 3)), Error);
}

TEST_CASE("spectral radius scales with |c| and ignores transposition") {
    Rng rng(5);
    for (int i = 0; i < 100; ++i) {
        const Matrix m = gaussian_matrix(rng, 4, 4);
        const double rho = spectral_radius(m);
        for (double c : {-2.0, 0.5}) CHECK(rel_diff(spectral_radius(c * m), std::abs(c) * rho) <= 1e-8);
        CHECK(rel_diff(spectral_radius(m.transpose()), rho) <= 1e-8);
    }
}

TEST_CASE("spectral radius agrees with the product of a 2x2 complex pair") {
    // Oracle: for a real 2x2 block with complex eigenvalues, |lambda|^2 = det.
    Rng rng(8);
    std::uniform_real_distribution<double> u(-2.0, 2.0);
    int checked = 0;
    for (int i = 0; i < 200 && checked < 50; ++i) {
        const Matrix m = (Matrix(2, 2) << u(rng), u(rng), u(rng), u(rng)).finished();
        const double tr = m.trace();
        const double det = m.determinant();
        if (tr * tr - 4.0 * det >= 0.0) continue;
        ++checked;
        CHECK(rel_diff(spectral_radius(m), std::sqrt(det)) <= 1e-8);
    }
    CHECK(checked == 50);
}

TEST_CASE("random stabilizable pairs are stabilized") {
    Rng rng(21);
    const CostPair costs(Matrix::Identity(3, 3), Matrix::Identity(3, 3));
    for (int i = 0; i < 100; ++i) {
        const Matrix a = 0.9 * random_orthogonal(rng, 3);
        Matrix b = gaussian_matrix(rng, 3, 3);
        while (Eigen::FullPivLU<Matrix>(b).rank() < 3) b = gaussian_matrix(rng, 3, 3);
        const DynamicsParameter theta(a, b);
        const RiccatiSolution sol = solve_dare(theta, costs);
        CHECK(spectral_radius(theta.closed_loop(sol.gain)) < 1.0);
        CHECK(sol.residual <= SolverOptions{}.tolerance * std::max(1.0, operator_norm(sol.k)));
        CHECK(sol.k == sol.k.transpose());
        CHECK(min_symmetric_eigenvalue(sol.k) >= 0.0);
    }
}

TEST_CASE("small parameter perturbations keep the certainty-equivalent gain stabilizing") {
    const auto [plant, costs] = preset_benchmark();
    const Matrix theta0 = plant.joined();
    Rng rng(99);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        Matrix delta = gaussian_matrix(rng, 3, 6);
        delta *= 0.01 / operator_norm(delta);
        const RiccatiSolution sol = solve_dare(DynamicsParameter::from_joined(theta0 + delta, 3), costs);
        worst = std::max(worst, spectral_radius(plant.closed_loop(sol.gain)));
    }
    CHECK(worst < 1.0);
}
