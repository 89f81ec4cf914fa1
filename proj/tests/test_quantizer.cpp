#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "obsec/quantizer.hpp"
#include "obsec/random.hpp"

using namespace obsec;
using std::complex;

namespace {
constexpr double kPi = std::numbers::pi;

CMatrix scalar(complex<double> v) {
    CMatrix m(1, 1);
    m(0, 0) = v;
    return m;
}
}  // namespace

TEST_CASE("sign definition and tie rule") {
    CHECK(one_bit_quantize(scalar({3.0, -0.2}))(0, 0) == complex<double>(1.0, -1.0));
    CHECK(one_bit_quantize(scalar({-0.001, 5.0}))(0, 0) == complex<double>(-1.0, 1.0));
    CHECK(one_bit_quantize(scalar({0.0, -0.0}))(0, 0) == complex<double>(1.0, 1.0));
    const complex<double> a = one_bit_quantize(scalar({-2.0, 0.5}), true)(0, 0);
    CHECK(std::abs(std::abs(a) - 1.0) < 1e-15);
}

TEST_CASE("quantizer is idempotent") {
    const CMatrix x = gen_complex_gaussian(64, 64, 2.0, {1, 0, "idem"});
    const CMatrix q1 = one_bit_quantize(x);
    CHECK((one_bit_quantize(q1) - q1).cwiseAbs().maxCoeff() == 0.0);
    const CMatrix qa = one_bit_quantize(x, true);
    CHECK((one_bit_quantize(qa, true) - qa).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("uplink Bussgang factors") {
    SUBCASE("noise only input") {
        const BussgangFactors f = uplink_bussgang({}, 0.0);
        CHECK(f.input_variance == 1.0);
        CHECK(f.gamma == doctest::Approx(std::sqrt(2.0 / kPi)).epsilon(1e-12));
    }
    SUBCASE("ten users at 10 dB, eavesdropper at 7 dB") {
        const std::vector<double> p(10, 10.0);
        const double pe = std::pow(10.0, 0.7);
        const BussgangFactors f = uplink_bussgang(p, pe);
        CHECK(f.input_variance == doctest::Approx(106.0119).epsilon(1e-5));
        CHECK(f.gamma == doctest::Approx(0.0774930).epsilon(1e-4));
        CHECK(f.sigma_q_sq == doctest::Approx(1.0 - 2.0 / kPi).epsilon(1e-12));
    }
    SUBCASE("sigma_q^2 is 0.3634 regardless of load") {
        for (double pe : {0.0, 1.0, 50.0}) {
            CHECK(uplink_bussgang(std::vector<double>{3.0, 5.0}, pe).sigma_q_sq ==
                  doctest::Approx(0.3634).epsilon(2e-4));
        }
    }
}

TEST_CASE("downlink Bussgang factors") {
    CHECK(downlink_bussgang(1).gamma == doctest::Approx(0.7979).epsilon(1e-4));
    CHECK(downlink_bussgang(128).gamma == doctest::Approx(std::sqrt(256.0 / kPi)).epsilon(1e-12));
    CHECK(downlink_bussgang(128).gamma == doctest::Approx(9.027).epsilon(1e-4));
    CHECK(downlink_bussgang(128).sigma_q_sq == doctest::Approx(0.3634).epsilon(2e-4));
    CHECK(downlink_bussgang(64).input_variance == doctest::Approx(1.0 / 64).epsilon(1e-12));
    CHECK_THROWS(downlink_bussgang(0));
}

TEST_CASE("extracted quantization noise is uncorrelated with the input") {
    const double sigma_y_sq = 3.7;
    const BussgangFactors f = uplink_bussgang(std::vector<double>{2.7}, 0.0);
    REQUIRE(f.input_variance == doctest::Approx(sigma_y_sq));
    const CMatrix y = gen_complex_gaussian(1000, 1000, sigma_y_sq, {11, 0, "bussgang"});
    const CMatrix q = extract_quantization_noise(y, f.gamma);

    const complex<double> corr = (y.conjugate().cwiseProduct(q)).mean();
    CHECK(std::abs(corr) / sigma_y_sq < 0.005);

    const double var_q = q.cwiseAbs2().mean();
    CHECK(var_q == doctest::Approx(1.0 - 2.0 / kPi).epsilon(0.01));
}

TEST_CASE("zero scaling degenerates to the quantizer output") {
    const CMatrix y = gen_complex_gaussian(8, 8, 1.0, {12, 0, "deg"});
    const CMatrix q = extract_quantization_noise(y, 0.0);
    CHECK((q - one_bit_quantize(y, true)).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("arcsine law for correlated inputs") {
    // E[Q(y1) Q(y2)*] = (2/pi)(asin(Re rho) + i asin(Im rho)) for jointly
    // Gaussian unit-variance inputs with correlation rho.
    SubStream stream({13, 0, "arcsine"});
    for (const complex<double> rho :
         {complex<double>(0.3, 0.0), complex<double>(0.0, -0.55), complex<double>(0.5, 0.4),
          complex<double>(-0.85, 0.1)}) {
        const int n = 400000;
        complex<double> acc = 0.0;
        const double resid = std::sqrt(1.0 - std::norm(rho));
        for (int i = 0; i < n; ++i) {
            const complex<double> y1 = stream.cnormal();
            const complex<double> y2 = std::conj(rho) * y1 + resid * stream.cnormal();
            const complex<double> q1 =
                complex<double>(y1.real() < 0 ? -1 : 1, y1.imag() < 0 ? -1 : 1) / std::numbers::sqrt2;
            const complex<double> q2 =
                complex<double>(y2.real() < 0 ? -1 : 1, y2.imag() < 0 ? -1 : 1) / std::numbers::sqrt2;
            acc += q1 * std::conj(q2);
        }
        acc /= static_cast<double>(n);
        const complex<double> predicted(2.0 / kPi * std::asin(rho.real()),
                                        2.0 / kPi * std::asin(rho.imag()));
        CAPTURE(rho.real());
        CAPTURE(rho.imag());
        CHECK(std::abs(acc - predicted) < 0.01);
    }
}

TEST_CASE("uplink quantization noise is near white under full pilot load") {
    // With tau = K = 10 orthogonal pilots the off-diagonal covariance of q
    // stays far below sigma_q^2, which is what justifies treating it as
    // white in the estimator.
    const int K = 10, tau = 10, N = 200, trials = 60;
    const PilotMatrix pilots = gen_pilot_matrix(tau, K);
    std::vector<double> p(K, 10.0);
    const double pe = std::pow(10.0, 0.5);
    const BussgangFactors f = uplink_bussgang(p, pe);

    Eigen::MatrixXcd cq = Eigen::MatrixXcd::Zero(tau, tau);
    int count = 0;
    for (int t = 0; t < trials; ++t) {
        const SeedSpec s{14, static_cast<std::uint64_t>(t), "whiteness"};
        const CMatrix h = gen_complex_gaussian(N, K, 1.0, s.with_label("h"));
        const CMatrix g = gen_complex_gaussian(N, 1, 1.0, s.with_label("g"));
        const CMatrix z = gen_complex_gaussian(N, tau, 1.0, s.with_label("z"));
        CMatrix amplified = h;
        for (int j = 0; j < K; ++j) amplified.col(j) *= std::sqrt(p[j]);
        CMatrix y = amplified * pilots.entries + std::sqrt(pe) * g * pilots.entries.row(0) + z;
        const CMatrix q = extract_quantization_noise(y, f.gamma);
        for (int n = 0; n < N; ++n) {
            cq += q.row(n).transpose() * q.row(n).conjugate();
            ++count;
        }
    }
    cq /= static_cast<double>(count);
    const double sq2 = f.sigma_q_sq;
    for (int a = 0; a < tau; ++a)
        for (int b = 0; b < tau; ++b)
            if (a != b) CHECK(std::abs(cq(a, b)) < 0.1 * sq2);
}
