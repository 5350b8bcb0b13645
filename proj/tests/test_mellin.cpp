#include <doctest.h>

#include <cmath>
#include <random>

#include "zhall/mellin.hpp"
#include "zhall/specfun.hpp"

using namespace zhall;
using namespace zhall::mellin;

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;

LogGaussianTestFunction standard_lg() { return {{0.0}, {1.0}, 1.0}; }
}

TEST_CASE("forward transform of the standard log-Gaussian") {
    auto f = standard_lg();
    for (Complex s : {Complex(0.0), Complex(1.5), Complex(0.5, 2.0), Complex(-2.0, 1.0)}) {
        Complex got = mellin_forward([&](double a) { return Complex(f({a})); }, s);
        Complex want = kSqrt2Pi * std::exp(0.5 * s * s);
        CHECK(std::abs(got - want) < 1e-10);
    }
}

TEST_CASE("forward transform reproduces Gamma(s/2) from 2 exp(-a^2)") {
    for (Complex s : {Complex(1.0), Complex(2.5), Complex(3.0, 1.0)}) {
        Complex got =
            mellin_forward([](double a) { return Complex(2.0 * std::exp(-a * a)); }, s);
        CHECK(std::abs(got - specfun::gamma(s / 2.0)) < 1e-10);
    }
}

TEST_CASE("forward transform of theta(a^2) - 1 hits the completed zeta") {
    auto f = [](double a) { return Complex(specfun::theta(a * a) - 1.0); };
    MellinQuad quad;
    quad.tol = 1e-10;
    CHECK(std::abs(mellin_forward(f, Complex(2.0), quad) - specfun::zeta_star(Complex(2.0))) < 1e-8);
    CHECK(std::abs(mellin_forward(f, Complex(3.0), quad) - specfun::zeta_star(Complex(3.0))) < 1e-8);
}

TEST_CASE("closed form: total mass, quadrature agreement, shift rule") {
    auto f = standard_lg();
    GradedEvaluator F = mellin_closed_form(f);
    CHECK(std::abs(F(Complex(0.0)) - kSqrt2Pi) < 1e-14);

    std::mt19937_64 rng(20240811);
    std::uniform_real_distribution<double> re(-3.0, 3.0), im(-2.0, 2.0);
    for (int k = 0; k < 10; ++k) {
        Complex s(re(rng), im(rng));
        Complex byquad = mellin_forward([&](double a) { return Complex(f({a})); }, s);
        CHECK(std::abs(byquad - F(s)) < 1e-9);
    }

    LogGaussianTestFunction shifted{{0.7}, {1.0}, 1.0};
    GradedEvaluator Fs = mellin_closed_form(shifted);
    for (Complex s : {Complex(1.0, 0.5), Complex(-0.5, 2.0)}) {
        CHECK(std::abs(Fs(s) - std::exp(0.7 * s) * F(s)) < 1e-12);
    }
}

TEST_CASE("inverse transform recovers the log-Gaussian on any vertical line") {
    auto f = standard_lg();
    GradedEvaluator F = mellin_closed_form(f);
    for (double sigma0 : {-2.0, 0.0, 2.0}) {
        for (double a : {1.0, 2.0, 0.5}) {
            Complex got = mellin_inverse(F, {a}, VerticalContour{{sigma0}, 40.0, 801}, 1e-9);
            CHECK(std::abs(got - Complex(f({a}))) < 1e-8);
        }
    }
}

TEST_CASE("coefficient functions of zeta_star in the three strips") {
    GradedEvaluator F;
    F.degree = 1;
    F.eval = [](const std::vector<Complex>& s) { return specfun::zeta_star(s[0]); };
    auto theta_m1 = [](double a) { return specfun::theta(a * a) - 1.0; };
    for (double a : {0.8, 1.5}) {
        Complex right = mellin_inverse(F, {a}, VerticalContour{{2.0}, 40.0, 1601}, 1e-8);
        CHECK(std::abs(right - Complex(theta_m1(a))) < 1e-6);
        // contour moved past s = 1 (residue 1): drop a^{-1}
        Complex mid = mellin_inverse(F, {a}, VerticalContour{{0.5}, 40.0, 1601}, 1e-8);
        CHECK(std::abs(mid - Complex(theta_m1(a) - 1.0 / a)) < 1e-6);
        // and past s = 0 (residue -1): add back 1
        Complex left = mellin_inverse(F, {a}, VerticalContour{{-1.0}, 40.0, 1601}, 1e-8);
        CHECK(std::abs(left - Complex(theta_m1(a) - 1.0 / a + 1.0)) < 1e-6);
        // the two residue shifts seen directly
        CHECK(std::abs((right - mid) - Complex(1.0 / a)) < 1e-6);
        CHECK(std::abs((mid - left) + Complex(1.0)) < 1e-6);
    }
}

TEST_CASE("round trip and contour independence on random log-Gaussians") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> mu(-0.8, 0.8), sg(0.4, 1.6), amp(0.5, 2.0);
    for (int k = 0; k < 20; ++k) {
        LogGaussianTestFunction f{{mu(rng)}, {sg(rng)}, amp(rng)};
        GradedEvaluator F = mellin_closed_form(f);
        for (double a : {0.25, 1.0, 4.0}) {
            Complex got = mellin_inverse(F, {a}, VerticalContour{{1.0}, 40.0, 801}, 1e-9);
            CHECK(std::abs(got - Complex(f({a}))) < 1e-8);
        }
    }
    LogGaussianTestFunction f{{0.3}, {0.9}, 1.3};
    GradedEvaluator F = mellin_closed_form(f);
    Complex ref = mellin_inverse(F, {1.7}, VerticalContour{{-2.0}, 40.0, 801}, 1e-9);
    for (double sigma0 : {-1.0, 0.0, 1.0, 2.0}) {
        Complex v = mellin_inverse(F, {1.7}, VerticalContour{{sigma0}, 40.0, 801}, 1e-9);
        CHECK(std::abs(v - ref) < 1e-8);
    }
}

TEST_CASE("product of transforms is the transform of the multiplicative convolution") {
    LogGaussianTestFunction f1{{0.4}, {0.8}, 1.1};
    LogGaussianTestFunction f2{{-0.2}, {0.6}, 0.9};
    // log-space Gaussians convolve to a Gaussian: mu adds, sigma^2 adds
    double s3 = std::sqrt(0.8 * 0.8 + 0.6 * 0.6);
    LogGaussianTestFunction f12{{0.2}, {s3}, 1.1 * 0.9 * kSqrt2Pi * 0.8 * 0.6 / s3};
    GradedEvaluator F1 = mellin_closed_form(f1);
    GradedEvaluator F2 = mellin_closed_form(f2);
    GradedEvaluator F12 = mellin_closed_form(f12);
    for (Complex s : {Complex(0.0), Complex(1.2, 0.8), Complex(-2.0, 0.3)}) {
        CHECK(std::abs(F1(s) * F2(s) - F12(s)) / std::abs(F12(s)) < 1e-13);
    }
    // and the coefficient function of the product is that convolution
    GradedEvaluator P;
    P.degree = 1;
    P.eval = [F1, F2](const std::vector<Complex>& s) { return F1(s) * F2(s); };
    for (double a : {0.6, 1.0, 2.3}) {
        Complex got = mellin_inverse(P, {a}, VerticalContour{{0.0}, 40.0, 801}, 1e-9);
        CHECK(std::abs(got - Complex(f12({a}))) < 1e-8);
    }
}

TEST_CASE("derivative rule on the log-Gaussian family") {
    LogGaussianTestFunction f = standard_lg();
    VerticalContour contour{{0.5}, 40.0, 801};
    auto rep = derivative_rule_check(f, 0, {{1.0}, {std::exp(1.0)}, {0.7}}, contour);
    CHECK(rep.max_discrepancy < 1e-8);
    // at the log-center both sides vanish
    GradedEvaluator F = mellin_closed_form(f);
    GradedEvaluator sF;
    sF.degree = 1;
    sF.eval = [F](const std::vector<Complex>& s) { return s[0] * F(s); };
    Complex at_center = mellin_inverse(sF, {1.0}, contour, 1e-10);
    CHECK(std::abs(at_center) < 1e-8);
    // one sigma above center: -a f'(a) = f(e) exactly
    Complex at_e = mellin_inverse(sF, {std::exp(1.0)}, contour, 1e-10);
    CHECK(std::abs(at_e - Complex(f({std::exp(1.0)}))) < 1e-8);

    // two-axis product function: axis 1 factorizes, axis 0 untouched
    LogGaussianTestFunction f2{{0.0, 0.3}, {1.0, 0.7}, 1.0};
    VerticalContour c2{{0.5, 0.5}, 30.0, 257};
    auto rep2 = derivative_rule_check(f2, 1, {{1.0, 1.0}, {1.3, 0.8}}, c2);
    CHECK(rep2.max_discrepancy < 1e-6);
}

TEST_CASE("invalid inputs are rejected") {
    LogGaussianTestFunction bad{{0.0}, {-1.0}, 1.0};
    CHECK(!bad.valid());
    CHECK_THROWS_AS(mellin_closed_form(bad), ConfigError);
    GradedEvaluator F = mellin_closed_form(standard_lg());
    CHECK_THROWS_AS(mellin_inverse(F, {-1.0}, VerticalContour{{0.0}, 40.0, 801}, 1e-9),
                    DomainError);
    CHECK_THROWS_AS(mellin_inverse(F, {1.0}, VerticalContour{{0.0}, 40.0, 8}, 1e-9), ConfigError);
}
