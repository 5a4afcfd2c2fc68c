#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "catchannel/analytic.hpp"
#include "catchannel/fock_oracle.hpp"

using namespace catchannel;
using cd = std::complex<double>;

namespace {

constexpr double kPi = std::numbers::pi;

CatParams cat_of(cd alpha0, double theta = 0.0) {
  CatParams c;
  c.alpha0 = alpha0;
  c.theta = theta;
  return c;
}

ChannelParams auto_xi(const CatParams& cat, double r, double t, double g) {
  ChannelParams ch{r, 0.0, t, g};
  ch.xi = default_xi(cat);
  return ch;
}

PhasePoint point(cd a, cd b, cd c) {
  PhasePoint p;
  p << a.real(), a.imag(), b.real(), b.imag(), c.real(), c.imag();
  return p;
}

/// <alpha, beta, gamma | state>
cd coherent_projection(const FockState& st, cd a, cd b, cd c) {
  const FockCutoffs& k = st.cutoffs();
  const Eigen::VectorXcd va = build_coherent(a, k.signal).conjugate();
  const Eigen::VectorXcd vb = build_coherent(b, k.environment).conjugate();
  const Eigen::VectorXcd vc = build_coherent(c, k.idler).conjugate();
  cd sum = 0.0;
  for (int s = 0; s < k.signal; ++s) {
    for (int e = 0; e < k.environment; ++e) {
      for (int i = 0; i < k.idler; ++i) sum += va(s) * vb(e) * vc(i) * st.at(s, e, i);
    }
  }
  return sum;
}

double rel(cd a, cd b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_CASE("denominator is positive for valid parameters") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const ChannelParams ch{5 * u(rng), 0.0, 1e-3 + (1 - 1e-3) * u(rng), 1 + 3 * u(rng)};
    CHECK(ch.denominator() > 0.0);
  }
}

TEST_CASE("identity channel reduces to coherent overlaps") {
  const CatParams cat = cat_of(cd(0.8, 0.3), 0.7);
  const ChannelParams ch{0.0, kPi, 1.0, 1.0};
  for (Branch b : {Branch::plus, Branch::minus}) {
    const GaussianKerneld k = branch_kernel(cat, ch, b);
    const LogComplexd at = evaluate(k, point(cat.alpha0, 0.0, 0.0));
    CHECK(at.magnitude() == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(f_sigma_closed(cat, ch, b, point(cat.alpha0, 0.0, 0.0)).magnitude() ==
          doctest::Approx(0.25).epsilon(1e-12));
    // elsewhere: |<a|a0>| / 4 = e^{-|a - a0|^2 / 2} / 4
    const cd a(-0.4, 1.1);
    CHECK(evaluate(k, point(a, 0.0, 0.0)).magnitude() ==
          doctest::Approx(0.25 * std::exp(-0.5 * std::norm(a - cat.alpha0))).epsilon(1e-12));
  }
}

TEST_CASE("pure squeeze and anti-squeeze is the identity") {
  const CatParams cat = cat_of(1.3);
  const ChannelParams ch{0.9, 0.4, 1.0, 1.0};
  for (Branch b : {Branch::plus, Branch::minus}) {
    CHECK(evaluate(branch_kernel(cat, ch, b), point(cat.alpha0, 0.0, 0.0)).magnitude() ==
          doctest::Approx(0.25).epsilon(1e-12));
    CHECK(f_sigma_closed(cat, ch, b, point(cat.alpha0, 0.0, 0.0)).magnitude() ==
          doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("without loss the environment rows decouple as a vacuum overlap") {
  const CatParams cat = cat_of(cd(1.0, 0.4));
  const ChannelParams ch{0.6, 1.1, 1.0, 1.2};
  const GaussianKerneld k = branch_kernel(cat, ch, Branch::plus);
  const auto& a = k.quadratic();
  for (int i : {2, 3}) {
    for (int j = 0; j < 6; ++j) {
      const cd expect = (i == j) ? cd(-0.5) : cd(0.0);
      CHECK(std::abs(a(i, j) - expect) < 1e-12);
    }
    CHECK(std::abs(k.linear()(i)) < 1e-12);
  }
}

TEST_CASE("branch kernel matches the Fock oracle amplitude") {
  const CatParams cat = cat_of(1.0, 0.4);
  const ChannelParams ch{0.3, kPi, 0.98, 1.05};
  const FockCutoffs cut{60, 24, 24};
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (Branch b : {Branch::plus, Branch::minus}) {
    const FockState st = oracle_branch_state(cat, ch, b, cut);
    const GaussianKerneld k = branch_kernel(cat, ch, b);
    for (int trial = 0; trial < 5; ++trial) {
      const cd a(1.5 * u(rng), 1.5 * u(rng)), be(0.5 * u(rng), 0.5 * u(rng)), ga(0.5 * u(rng), 0.5 * u(rng));
      const cd expect = coherent_projection(st, a, be, ga);
      CHECK(rel(evaluate(k, point(a, be, ga)).to_complex(), expect) < 1e-8);
      CHECK(rel(f_sigma_closed(cat, ch, b, point(a, be, ga)).to_complex(), expect) < 1e-8);
    }
  }
}

TEST_CASE("closed form as typeset disagrees with the kernel") {
  const CatParams cat = cat_of(1.0);
  const ChannelParams ch{0.3, kPi, 0.98, 1.05};
  const PhasePoint p = point(cd(0.3, 0.8), cd(0.1, -0.2), cd(-0.3, 0.1));
  const cd kernel = evaluate(branch_kernel(cat, ch, Branch::plus), p).to_complex();
  const cd literal = f_sigma_closed(cat, ch, Branch::plus, p, ClosedFormReading::literal).to_complex();
  CHECK(rel(literal, kernel) > 1e-3);
}

TEST_CASE("q terms") {
  const CatParams cat = cat_of(0.7, 0.3);
  const ChannelParams ch = auto_xi(cat, 0.4, 0.95, 1.1);
  const PhasePoint p = point(cd(0.2, 0.5), cd(-0.1, 0.3), cd(0.4, 0.0));
  for (Branch s : {Branch::plus, Branch::minus}) {
    const LogComplexd d = evaluate(q_term(cat, ch, s, s), p);
    CHECK(std::abs(d.phase()) < 1e-12);
  }
  const cd pm = evaluate(q_term(cat, ch, Branch::plus, Branch::minus), p).to_complex();
  const cd mp = evaluate(q_term(cat, ch, Branch::minus, Branch::plus), p).to_complex();
  CHECK(rel(pm, std::conj(mp)) < 1e-12);
}

TEST_CASE("Q-term integrals match 6-dimensional quadrature") {
  const CatParams cat = cat_of(0.5);
  const ChannelParams ch = auto_xi(cat, 0.2, 0.95, 1.02);
  const GaussianKerneld fp = branch_kernel(cat, ch, Branch::plus);
  const GaussianKerneld fm = branch_kernel(cat, ch, Branch::minus);

  // sum_{sigma,tau} Q = |f_+ + f_-|^2 / pi^3, trapezoid rule on a uniform grid
  const int n = 17;
  const double h = 0.6, lo = -0.5 * h * (n - 1);
  using V6 = Eigen::Matrix<cd, 6, 1>;
  using M6 = Eigen::Matrix<cd, 6, 6>;
  const M6 ap = fp.quadratic(), am = fm.quadratic();
  const V6 bp = fp.linear(), bm = fm.linear();
  const cd cp = fp.constant().to_complex(), cm = fm.constant().to_complex();
  double sum = 0.0;
  V6 x;
  for (int i0 = 0; i0 < n; ++i0)
    for (int i1 = 0; i1 < n; ++i1)
      for (int i2 = 0; i2 < n; ++i2)
        for (int i3 = 0; i3 < n; ++i3)
          for (int i4 = 0; i4 < n; ++i4)
            for (int i5 = 0; i5 < n; ++i5) {
              x << lo + i0 * h, lo + i1 * h, lo + i2 * h, lo + i3 * h, lo + i4 * h, lo + i5 * h;
              const cd vp = cp * std::exp((x.transpose() * ap * x)(0) + (bp.transpose() * x)(0));
              const cd vm = cm * std::exp((x.transpose() * am * x)(0) + (bm.transpose() * x)(0));
              sum += std::norm(vp + vm);
            }
  sum *= std::pow(h, 6) / std::pow(kPi, 3);
  CHECK(sum == doctest::Approx(probability(cat, ch, cat.theta)).epsilon(1e-6));
}

TEST_CASE("probability for a unitary channel") {
  for (double a : {0.5, 1.0, 3.0, 30.0}) {
    for (double r : {0.0, 0.7, 2.0}) {
      const CatParams cat = cat_of(a);
      // both kept branches are rotated back onto |alpha0>
      CHECK(probability(cat, auto_xi(cat, r, 1.0, 1.0), 0.0) == doctest::Approx(0.25).epsilon(1e-10));
      CHECK(probability(cat, auto_xi(cat, r, 1.0, 1.0), 1.2) ==
            doctest::Approx(std::norm(1.0 + std::polar(1.0, 1.2)) / 16).epsilon(1e-10));
    }
  }
  const CatParams vac = cat_of(0.0);
  for (double theta : {0.0, 0.8, 2.0, kPi}) {
    CHECK(probability(vac, ChannelParams{0.5, 0.0, 1.0, 1.0}, theta) ==
          doctest::Approx(std::pow(std::cos(theta / 2), 2) / 4).epsilon(1e-10).scale(1e-12));
  }
}

TEST_CASE("probability minimum sits at pi - arg X0") {
  const CatParams cat = cat_of(1.2);
  const ChannelParams ch = auto_xi(cat, 0.5, 0.95, 1.1);
  const VisibilityReport rep = visibility(cat, ch);
  CHECK(rep.theta_min == doctest::Approx(wrap_phase(kPi - rep.branch_cross.phase())));
  const double p_min = probability(cat, ch, rep.theta_min);
  CHECK(p_min == doctest::Approx(rep.p_min.magnitude()).epsilon(1e-10));
  for (int k = 0; k < 64; ++k) CHECK(probability(cat, ch, 2 * kPi * k / 64) >= p_min * (1 - 1e-12));
  CHECK(rep.p_max.magnitude() >= rep.p_min.magnitude());
  CHECK(rep.visibility == doctest::Approx((rep.p_max.magnitude() - rep.p_min.magnitude()) /
                                          (rep.p_max.magnitude() + rep.p_min.magnitude())));
}

TEST_CASE("visibility examples") {
  for (double r : {0.0, 0.5, 1.0, 2.0, 3.0}) {
    const CatParams cat = cat_of(2.0);
    CHECK(std::abs(visibility(cat, auto_xi(cat, r, 1.0, 1.0)).visibility - 1.0) < 1e-9);
  }
  const CatParams big = cat_of(100.0);
  const double v = visibility(big, ChannelParams{0.0, kPi, 1.0, 1.001}).visibility;
  CHECK(v > 1e-19);
  CHECK(v < 1e-17);
  // reference from an independent dense-matrix simulation
  CHECK(visibility(cat_of(1.0), ChannelParams{0.5, kPi, 0.98, 1.05}).visibility ==
        doctest::Approx(0.71326430).epsilon(1e-7));
}

TEST_CASE("loss only without squeezing: V = exp(-2 (1 - t^2) |alpha0|^2)") {
  for (double a : {1.0, 10.0, 100.0}) {
    for (double t : {0.999, 0.99, 0.9}) {
      const VisibilityReport rep = visibility(cat_of(a), ChannelParams{0.0, kPi, t, 1.0});
      CHECK(rep.log_visibility == doctest::Approx(-2 * (1 - t * t) * a * a).epsilon(1e-9));
    }
  }
}

TEST_CASE("visibility underflow stays finite in log-domain") {
  const VisibilityReport rep = visibility(cat_of(1000.0), ChannelParams{0.0, kPi, 0.9, 1.1});
  CHECK(rep.visibility == 0.0);
  CHECK(std::isfinite(rep.log_visibility));
  CHECK(rep.log_visibility < -1e4);
}

TEST_CASE("theta scan agrees with the analytic extremes") {
  const CatParams cat = cat_of(1.0);
  const ChannelParams ch = auto_xi(cat, 0.5, 0.98, 1.05);
  const double v = visibility(cat, ch).visibility;
  // the scan grid misses the exact extremes by at most half a step
  CHECK(std::abs(visibility_theta_scan(cat, ch, 256) - v) < 1e-3);
  CatParams aligned = cat;
  aligned.theta = 0.0;
  const ChannelParams sym{0.5, kPi, 0.98, 1.05};
  // for real alpha0 and xi = pi the extremes fall on theta = 0 and pi
  CHECK(visibility_theta_scan(aligned, sym, 64) == doctest::Approx(visibility(aligned, sym).visibility).epsilon(1e-9));
}

TEST_CASE("visibility stays within [0, 1] on random draws") {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 500; ++i) {
    CatParams cat;
    cat.alpha0 = std::polar(std::pow(10.0, 2.5 * u(rng) - 0.5), 2 * kPi * u(rng));
    cat.phi = 2 * kPi * u(rng);
    cat.theta = 2 * kPi * u(rng);
    ChannelParams ch{3 * u(rng), 2 * kPi * u(rng), 0.5 + 0.5 * u(rng), 1 + 0.5 * u(rng)};
    if (u(rng) < 0.5) ch.xi = default_xi(cat);
    const double v = visibility(cat, ch).visibility;
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-9);
  }
}

TEST_CASE("visibility degrades monotonically with gain and with loss") {
  for (auto [a, r] : {std::pair{2.0, 0.5}, std::pair{10.0, 1.2}, std::pair{100.0, 2.3}}) {
    const CatParams cat = cat_of(a);
    double prev_g = 2.0, prev_t = 2.0;
    for (int k = 0; k < 20; ++k) {
      const double g = 1.0 + 0.3 * k / 19 / a;
      const double t = 1.0 - 0.3 * k / 19 / a;
      const double vg = visibility(cat, auto_xi(cat, r, 1.0, g)).visibility;
      const double vt = visibility(cat, auto_xi(cat, r, t, 1.0)).visibility;
      CHECK(vg <= prev_g * (1 + 1e-12));
      CHECK(vt <= prev_t * (1 + 1e-12));
      prev_g = vg;
      prev_t = vt;
    }
  }
  // same trend in the oracle
  const CatParams cat = cat_of(1.0);
  double prev = 2.0;
  for (double g : {1.0, 1.1, 1.2, 1.3}) {
    const double v = oracle_visibility(cat, auto_xi(cat, 0.4, 1.0, g)).visibility;
    CHECK(v <= prev);
    prev = v;
  }
}

TEST_CASE("signal Q-function") {
  // identity channel: both kept branches sit at alpha0
  const CatParams cat = cat_of(2.0);
  const SignalQFunction q(cat, ChannelParams{0.0, kPi, 1.0, 1.0});
  const double at_peak = q(2.0, 0.0);
  CHECK(at_peak == doctest::Approx(0.25 / kPi).epsilon(1e-12));
  CHECK(at_peak > q(1.7, 0.0));
  CHECK(at_peak > q(2.0, 0.3));
  CHECK(at_peak > q(2.3, 0.0));

  const SignalQFunction q0(cat_of(0.0), ChannelParams{0.5, 0.0, 1.0, 1.0});
  CHECK(q0(0.0, 0.0) > q0(0.2, 0.0));
  CHECK(q0(0.0, 0.0) > q0(0.0, 0.2));
}

TEST_CASE("signal Q-function integrates to the probability") {
  const CatParams cat = cat_of(1.0, 0.5);
  const ChannelParams ch = auto_xi(cat, 0.3, 0.95, 1.05);
  const SignalQFunction q(cat, ch);
  const int n = 81;
  const double lo = -6.0, h = 12.0 / (n - 1);
  double sum = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double v = q(lo + i * h, lo + j * h);
      CHECK(v >= -1e-12);
      sum += v;
    }
  }
  CHECK(sum * h * h == doctest::Approx(probability(cat, ch, cat.theta)).epsilon(1e-8));
}

TEST_CASE("degenerate diagonal") {
  CHECK_THROWS_AS(make_visibility_report(LogComplexd::zero(), LogComplexd::one(), 0.0, "analytic"),
                  DegenerateProbability);
}
