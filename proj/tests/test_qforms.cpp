#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "zhall/mellin.hpp"
#include "zhall/qforms.hpp"
#include "zhall/specfun.hpp"

using namespace zhall;
using namespace zhall::qforms;

namespace {

constexpr double kPi = 3.14159265358979323846;

Eigen::MatrixXd random_pd_gram(std::mt19937_64& rng, int n, double spread = 1.0) {
    std::normal_distribution<double> g(0.0, spread);
    Eigen::MatrixXd A(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) A(i, j) = g(rng);
    return A.transpose() * A + 0.3 * Eigen::MatrixXd::Identity(n, n);
}

// Brute-force oracle: primitive vectors up to sign with q <= bound, over a box.
std::vector<IntVector> brute_short(const Eigen::MatrixXd& G, double bound, int box) {
    std::vector<std::pair<double, IntVector>> hits;
    int n = static_cast<int>(G.rows());
    std::vector<int> v(n, -box);
    while (true) {
        IntVector iv(n);
        for (int i = 0; i < n; ++i) iv(i) = v[i];
        if (!iv.isZero()) {
            int fnz = 0;
            while (iv(fnz) == 0) ++fnz;
            if (iv(fnz) > 0) {
                std::int64_t g = 0;
                for (int i = 0; i < n; ++i) g = std::gcd(g, std::abs(iv(i)));
                if (g == 1) {
                    Eigen::VectorXd vd = iv.cast<double>();
                    double q = vd.dot(G * vd);
                    if (q <= bound + 1e-12) hits.emplace_back(q, iv);
                }
            }
        }
        int k = n - 1;
        while (k >= 0 && v[k] == box) v[k--] = -box;
        if (k < 0) break;
        ++v[k];
    }
    std::sort(hits.begin(), hits.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return std::lexicographical_compare(a.second.data(), a.second.data() + a.second.size(),
                                            b.second.data(), b.second.data() + b.second.size());
    });
    std::vector<IntVector> out;
    for (auto& h : hits) out.push_back(h.second);
    return out;
}

double catalan_series() {
    // beta(2) by averaged alternating partial sums
    double s = 0.0;
    int K = 200000;
    for (int k = 0; k < K; ++k) {
        double term = 1.0 / ((2.0 * k + 1.0) * (2.0 * k + 1.0));
        s += (k % 2 == 0) ? term : -term;
    }
    double next = 1.0 / ((2.0 * K + 1.0) * (2.0 * K + 1.0));
    return s + 0.5 * ((K % 2 == 0) ? next : -next);
}

} // namespace

TEST_CASE("degree of basic bundles") {
    CHECK(degree(GramBundle(Eigen::MatrixXd::Identity(3, 3))) == doctest::Approx(1.0));
    double a = 2.7;
    Eigen::MatrixXd line(1, 1);
    line << 1.0 / (a * a);
    CHECK(degree(GramBundle(line)) == doctest::Approx(a));
    CHECK(degree(bundle_from_tau({0.0, 1.0})) == doctest::Approx(1.0));
    CHECK(degree(bundle_from_tau({0.4, 2.2})) == doctest::Approx(1.0));
}

TEST_CASE("bundle_from_tau: orthonormal at i, modular invariance of the minimum") {
    GramBundle Ei = bundle_from_tau({0.0, 1.0});
    CHECK((Ei.G - Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);
    UpperHalfPoint tau{0.37, 1.21};
    GramBundle E1 = bundle_from_tau(tau);
    GramBundle E2 = bundle_from_tau({tau.x + 1.0, tau.y});
    CHECK(degree(E1) == doctest::Approx(degree(E2)));
    auto m1 = brute_short(E1.G, 50.0, 10);
    auto m2 = brute_short(E2.G, 50.0, 10);
    double min1 = 1e300, min2 = 1e300;
    for (auto& v : m1) min1 = std::min(min1, E1.q(v));
    for (auto& v : m2) min2 = std::min(min2, E2.q(v));
    CHECK(min1 == doctest::Approx(min2).epsilon(1e-12));
}

TEST_CASE("restrict_form basics and primitivity check") {
    GramBundle Ei = bundle_from_tau({0.0, 1.0});
    IntMatrix full(2, 2);
    full << 1, 0, 0, 1;
    CHECK((restrict_form(Ei, full).G - Ei.G).norm() < 1e-15);

    IntMatrix e1(2, 1);
    e1 << 1, 0;
    GramBundle r1 = restrict_form(Ei, e1);
    CHECK(r1.G(0, 0) == doctest::Approx(1.0));
    CHECK(degree(r1) == doctest::Approx(1.0));

    IntMatrix d11(2, 1);
    d11 << 1, 1;
    GramBundle r2 = restrict_form(Ei, d11);
    CHECK(r2.G(0, 0) == doctest::Approx(2.0));
    CHECK(degree(r2) == doctest::Approx(1.0 / std::sqrt(2.0)));

    IntMatrix imprim(2, 1);
    imprim << 2, 0;
    CHECK_THROWS_AS(restrict_form(Ei, imprim), NonPrimitiveError);
}

TEST_CASE("pushforward_form: block projection, E_tau slice, surjectivity check") {
    Eigen::MatrixXd G = Eigen::MatrixXd::Zero(3, 3);
    G(0, 0) = 2.0;
    G.block<2, 2>(1, 1) << 3.0, 0.5, 0.5, 1.0;
    IntMatrix J(2, 3);
    J << 0, 1, 0, 0, 0, 1;
    GramBundle pushed = pushforward_form(GramBundle(G), J);
    CHECK((pushed.G - G.block<2, 2>(1, 1)).norm() < 1e-14);

    // E_tau quotient by span(e1): 1x1 Gram [y]
    double x = 0.4, y = 1.7;
    GramBundle Etau = bundle_from_tau({x, y});
    IntMatrix q10(1, 2);
    q10 << 0, 1;
    GramBundle quot = pushforward_form(Etau, q10);
    CHECK(quot.G(0, 0) == doctest::Approx(y).epsilon(1e-12));
    CHECK(degree(quot) == doctest::Approx(1.0 / std::sqrt(y)).epsilon(1e-12));

    IntMatrix notonto(1, 2);
    notonto << 0, 2;
    CHECK_THROWS_AS(pushforward_form(Etau, notonto), NonSurjectiveError);
}

TEST_CASE("pushforward equals grid minimization on random instances") {
    std::mt19937_64 rng(101);
    std::uniform_int_distribution<int> entry(-3, 3);
    for (int trial = 0; trial < 50; ++trial) {
        Eigen::MatrixXd G = random_pd_gram(rng, 3);
        IntMatrix J(1, 3);
        do {
            for (int i = 0; i < 3; ++i) J(0, i) = entry(rng);
        } while (!zlattice::is_surjective_over_z(J));
        GramBundle pushed = pushforward_form(GramBundle(G), J);
        // independent route: minimize q over the real fiber {v : Jv = 1}
        // by a shrinking grid over the kernel plane
        auto snf = zlattice::smith_normal_form(J);
        Eigen::MatrixXd K = snf.V.rightCols(2).cast<double>();
        IntMatrix S = snf.V.leftCols(1) * snf.U;
        REQUIRE((J * S)(0, 0) == 1); // v0 really sits on the fiber over 1
        Eigen::VectorXd v0 = S.cast<double>().col(0);
        double c1 = 0.0, c2 = 0.0, span = 6.0;
        double best = 1e300;
        for (int round = 0; round < 5; ++round) {
            double step = span / 20.0;
            double b1 = c1, b2 = c2;
            for (double t1 = c1 - span; t1 <= c1 + span; t1 += step)
                for (double t2 = c2 - span; t2 <= c2 + span; t2 += step) {
                    Eigen::VectorXd v = v0 + K.col(0) * t1 + K.col(1) * t2;
                    double q = v.dot(G * v);
                    if (q < best) {
                        best = q;
                        b1 = t1;
                        b2 = t2;
                    }
                }
            c1 = b1;
            c2 = b2;
            span = 2.0 * step;
        }
        CHECK(std::abs(best - pushed.G(0, 0)) < 1e-6);
    }
}

TEST_CASE("base-change square: pushforward and restriction commute") {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> entry(-2, 2);
    for (int trial = 0; trial < 25; ++trial) {
        Eigen::MatrixXd G = random_pd_gram(rng, 3);
        GramBundle E(G);
        IntMatrix k(3, 1);
        do {
            for (int i = 0; i < 3; ++i) k(i, 0) = entry(rng);
        } while (!zlattice::is_primitive_sublattice(k));
        IntMatrix U = zlattice::complete_to_unimodular(k);
        IntMatrix B2(3, 2);
        B2.col(0) = k.col(0);
        B2.col(1) = U.col(1);
        // route A: restrict to B2, then quotient by its first column
        GramBundle sub = restrict_form(E, B2);
        IntMatrix J2(1, 2);
        J2 << 0, 1;
        GramBundle routeA = pushforward_form(sub, J2);
        // route B: quotient Z^3 by k, then restrict to the image of B2
        IntMatrix J = zlattice::unimodular_inverse(U).bottomRows(2);
        GramBundle quot = pushforward_form(E, J);
        IntMatrix img = J * B2.col(1);
        GramBundle routeB = restrict_form(quot, img);
        CHECK(std::abs(routeA.G(0, 0) - routeB.G(0, 0)) < 1e-12);
    }
}

TEST_CASE("rank-1 subbundle enumeration against the box oracle") {
    GramBundle Ei = bundle_from_tau({0.0, 1.0});
    auto one = enumerate_rank1_subbundles(Ei, 1.0);
    auto oracle1 = brute_short(Ei.G, 1.0, 2);
    REQUIRE(one.size() == 2);
    REQUIRE(oracle1.size() == 2);
    for (std::size_t i = 0; i < one.size(); ++i) CHECK(one[i].coords == oracle1[i]);

    auto four = enumerate_rank1_subbundles(Ei, 1.0 / std::sqrt(2.0));
    auto oracle2 = brute_short(Ei.G, 2.0, 2);
    REQUIRE(four.size() == 4);
    REQUIRE(oracle2.size() == 4);
    for (std::size_t i = 0; i < four.size(); ++i) CHECK(four[i].coords == oracle2[i]);

    // below the first minimum: empty
    CHECK(enumerate_rank1_subbundles(Ei, 1.5).empty());

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        Eigen::MatrixXd G = random_pd_gram(rng, 3);
        auto fast = enumerate_rank1_subbundles(GramBundle(G), 0.45);
        auto slow = brute_short(G, 1.0 / (0.45 * 0.45), 12);
        REQUIRE(fast.size() == slow.size());
        for (std::size_t i = 0; i < fast.size(); ++i) CHECK(fast[i].coords == slow[i]);
    }

    CHECK_THROWS_AS(enumerate_rank1_subbundles(Ei, 1e-4, 50), BudgetError);
}

TEST_CASE("hall product: empty window, two-subbundle window, twist recompute") {
    GramBundle Ei = bundle_from_tau({0.0, 1.0});
    mellin::LogGaussianTestFunction narrow{{0.0}, {0.05}, 1.0};
    ScalarFn f = [&](double d) { return Complex(narrow({d})); };
    // windows far below the first minimum degree never meet a subbundle
    mellin::LogGaussianTestFunction low{{std::log(0.01)}, {0.05}, 1.0};
    ScalarFn flow = [&](double d) { return Complex(low({d})); };
    CHECK(std::abs(hall_product_11(flow, flow, Ei, 0.002)) < 1e-12);

    // indicator-like weights at degree 1 pick out the two unit subbundles,
    // each with twist factor 1
    Complex v = hall_product_11(f, f, Ei, 0.5);
    CHECK(std::abs(v - 2.0) < 1e-9);

    // definition recompute with the roles swapped
    std::mt19937_64 rng(17);
    GramBundle E(random_pd_gram(rng, 2));
    mellin::LogGaussianTestFunction g1{{0.2}, {0.5}, 1.0}, g2{{-0.1}, {0.4}, 1.0};
    ScalarFn h1 = [&](double d) { return Complex(g1({d})); };
    ScalarFn h2 = [&](double d) { return Complex(g2({d})); };
    double D = degree(E);
    Complex swapped = hall_product_11(h2, h1, E, 0.02);
    quadrature::KahanSumC byhand;
    for (auto& pv : enumerate_rank1_subbundles(E, 0.02)) {
        double d = 1.0 / std::sqrt(E.q(pv.coords));
        byhand.add(std::sqrt(d / (D / d)) * h2(d) * h1(D / d));
    }
    CHECK(std::abs(swapped - byhand.value()) < 1e-12);
}

TEST_CASE("hall product is an isomorphism invariant (SL2(Z) slice)") {
    UpperHalfPoint tau{0.3, 1.1};
    double n2 = tau.x * tau.x + tau.y * tau.y;
    UpperHalfPoint inv{-tau.x / n2, tau.y / n2}; // -1/tau
    mellin::LogGaussianTestFunction g1{{0.1}, {0.4}, 1.0}, g2{{0.0}, {0.35}, 1.0};
    ScalarFn f1 = [&](double d) { return Complex(g1({d})); };
    ScalarFn f2 = [&](double d) { return Complex(g2({d})); };
    Complex a = hall_product_11(f1, f2, bundle_from_tau(tau), 0.01);
    Complex b = hall_product_11(f1, f2, bundle_from_tau(inv), 0.01);
    CHECK(std::abs(a - b) < 1e-10);
}

TEST_CASE("degree multiplicativity over enumerated subbundles") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 8; ++trial) {
        int n = 2 + (trial % 2);
        GramBundle E(random_pd_gram(rng, n));
        double D = degree(E);
        for (auto& pv : enumerate_rank1_subbundles(E, 0.3)) {
            IntMatrix basis(n, 1);
            basis.col(0) = pv.coords;
            double dsub = degree(restrict_form(E, basis));
            IntMatrix U = zlattice::complete_to_unimodular(basis);
            IntMatrix J = zlattice::unimodular_inverse(U).bottomRows(n - 1);
            double dquot = degree(pushforward_form(E, J));
            CHECK(std::abs(dsub * dquot - D) < 1e-10 * D);
        }
    }
}

TEST_CASE("Eisenstein-Maass at i against the Catalan factorization") {
    double G = catalan_series();
    CHECK(std::abs(G - 0.9159655941772190) < 1e-10);
    Complex e = eisenstein_maass({0.0, 1.0}, Complex(2.0), 2e-7);
    double want = 30.0 * G / (kPi * kPi);
    CHECK(std::abs(e - Complex(want)) < 1e-6);
    // full-lattice sum / zeta(2s) factorization as a second oracle
    double R = 400.0;
    quadrature::KahanSum full;
    for (int n = -400; n <= 400; ++n)
        for (int m = -400; m <= 400; ++m) {
            if (m == 0 && n == 0) continue;
            double q = static_cast<double>(m) * m + static_cast<double>(n) * n;
            if (q > R * R) continue;
            full.add(1.0 / (q * q));
        }
    double by_factorization = 0.5 * full.value() / specfun::zeta(Complex(4.0)).real();
    CHECK(std::abs(e.real() - by_factorization) < 2e-5);
    CHECK_THROWS_AS(eisenstein_maass({0.0, 1.0}, Complex(0.9), 1e-6), ConvergenceError);
}

TEST_CASE("Eisenstein-Maass periodicity in x") {
    UpperHalfPoint tau{0.23, 1.4};
    Complex a = eisenstein_maass(tau, Complex(2.1, 0.4), 1e-6);
    Complex b = eisenstein_maass({tau.x + 1.0, tau.y}, Complex(2.1, 0.4), 1e-6);
    CHECK(std::abs(a - b) < 2e-6);
}

TEST_CASE("Hall/Eisenstein bridge with matched cutoffs") {
    // (E(t1) * E(t2))(E_tau) = E(tau, (t1 - t2 + 1)/2): the lattice side
    // enumerates degrees >= sqrt(y)/R, the series side sums |m + n tau| <= R
    double t1 = 2.0, t2 = -1.0; // difference 3
    UpperHalfPoint tau{0.0, 2.0};
    double R = 600.0;
    GramBundle E = bundle_from_tau(tau);
    ScalarFn f1 = [&](double d) { return std::pow(Complex(d), t1); };
    ScalarFn f2 = [&](double d) { return std::pow(Complex(d), t2); };
    Complex lattice = hall_product_11(f1, f2, E, std::sqrt(tau.y) / R, 4'000'000);
    Complex series = eisenstein_maass(tau, Complex((t1 - t2 + 1.0) / 2.0), 1e-9, R);
    CHECK(std::abs(lattice - series) / std::abs(series) < 1e-10);
}

TEST_CASE("constant term: unit mass and the delta-twisted Hall identity") {
    SliceFn constant = [](const GramBundle&, double, double, double) { return Complex(3.25); };
    CHECK(std::abs(constant_term_rank2(constant, 1.2, 0.7, 16) - Complex(3.25)) < 1e-14);

    // E(t1) * E(t2) on the slice: delta^(1/2) CT = a1^t1 a2^t2 + Phi(t1-t2) a1^t2 a2^t1
    double t1 = 3.5, t2 = -0.5;
    double a1 = 1.3, a2 = 0.8;
    ScalarFn f1 = [&](double d) { return std::pow(Complex(d), t1); };
    ScalarFn f2 = [&](double d) { return std::pow(Complex(d), t2); };
    SliceFn hall = [&](const GramBundle& E, double, double, double) {
        return hall_product_11(f1, f2, E, 0.015, 4'000'000);
    };
    Complex ct = std::sqrt(a2 / a1) * constant_term_rank2(hall, a1, a2, 24);
    Complex want = std::pow(a1, t1) * std::pow(a2, t2) +
                   specfun::phi(Complex(t1 - t2)) * std::pow(a1, t2) * std::pow(a2, t1);
    CHECK(std::abs(ct - want) < 1e-5);
}

TEST_CASE("constant term of the Eisenstein-Maass y-slice") {
    double y = 1.3, s = 2.0;
    // integrand is symmetric about x = 1/2, so integrate half and double
    Complex half = quadrature::gauss01(
        [&](double u) { return eisenstein_maass({0.5 * u, y}, Complex(s), 5e-7); }, 10);
    Complex lhs = 2.0 * 0.5 * half;
    Complex rhs = std::pow(y, s) + specfun::zeta_star(Complex(2.0 * s - 1.0)) /
                                       specfun::zeta_star(Complex(2.0 * s)) * std::pow(y, 1.0 - s);
    CHECK(std::abs(lhs - rhs) < 1e-6);
}

TEST_CASE("iwasawa slice conventions") {
    double a1 = 1.4, a2 = 0.6, x = 0.3;
    GramBundle E = bundle_from_iwasawa(a1, a2, x);
    CHECK(degree(E) == doctest::Approx(a1 * a2).epsilon(1e-12));
    // canonical rank-1 subbundle span(e2) has degree a1
    IntVector e2(2);
    e2 << 0, 1;
    CHECK(1.0 / std::sqrt(E.q(e2)) == doctest::Approx(a1).epsilon(1e-12));
    CHECK_THROWS_AS(bundle_from_iwasawa(-1.0, 1.0, 0.0), DomainError);
    CHECK_THROWS_AS(bundle_from_tau({0.0, -2.0}), DomainError);
}
