#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "qcs/cv.hpp"
#include "qcs/frames.hpp"
#include "qcs/states.hpp"

using qcs::cxd;
using qcs::Mat;
using qcs::Rng;
using qcs::RVec;

namespace {

// Oracle: associated Laguerre polynomial L_m^{(a)}(x) by the standard
// three-term recurrence.
long double laguerre(int m, int a, long double x) {
  if (m == 0) return 1.0L;
  long double lm1 = 1.0L, lm = 1.0L + a - x;
  for (int j = 1; j < m; ++j) {
    long double next = ((2.0L * j + 1.0L + a - x) * lm - (j + a) * lm1) / (j + 1.0L);
    lm1 = lm;
    lm = next;
  }
  return lm;
}

// Oracle: <k|D(alpha)|l> via the Laguerre closed form, factorial ratio in log
// space. Extended precision: the alternating structure leaves only ~1e-12
// absolute accuracy in double near k=l=20, |alpha|=8.
cxd displacement_oracle(int k, int l, cxd alpha) {
  const long double x = (long double)std::norm(alpha);
  const long double env = std::exp(-x / 2.0L);
  const std::complex<long double> al((long double)alpha.real(), (long double)alpha.imag());
  if (k >= l) {
    long double lr = 0.5L * (lgammal(l + 1.0L) - lgammal(k + 1.0L));
    std::complex<long double> v =
        std::exp(lr) * std::pow(al, k - l) * env * laguerre(l, k - l, x);
    return cxd((double)v.real(), (double)v.imag());
  }
  long double lr = 0.5L * (lgammal(k + 1.0L) - lgammal(l + 1.0L));
  std::complex<long double> v =
      std::exp(lr) * std::pow(-std::conj(al), l - k) * env * laguerre(k, l - k, x);
  return cxd((double)v.real(), (double)v.imag());
}

// Oracle: normalized oscillator eigenfunctions psi_0..psi_nmax at x by the
// stable recurrence, independent of the library routine.
std::vector<double> oracle_hermite(int n_max, double x) {
  std::vector<double> psi(n_max + 1);
  psi[0] = std::pow(M_PI, -0.25) * std::exp(-x * x / 2.0);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int n = 1; n < n_max; ++n)
    psi[n + 1] = std::sqrt(2.0 / (n + 1.0)) * x * psi[n] - std::sqrt(n / (n + 1.0)) * psi[n - 1];
  return psi;
}

// Oracle: Wigner matrix element by direct quadrature,
// (1/pi) int psi_l(x+y) psi_k(x-y) e^{2ipy} dy, trapezoid on [-9, 9].
cxd wigner_quadrature(int k, int l, double x, double p) {
  const double h = 1.0 / 512;
  const int n_max = std::max(k, l);
  cxd acc(0, 0);
  for (double y = -9.0; y <= 9.0 + h / 2; y += h) {
    auto a = oracle_hermite(n_max, x + y);
    auto b = oracle_hermite(n_max, x - y);
    acc += a[l] * b[k] * std::exp(cxd(0, 2.0 * p * y)) * h;
  }
  return acc / M_PI;
}

// Largest singular value; the displacement truncations are not Hermitian so
// the library's Hermitian operator norm does not apply.
double largest_sv(const Mat& m) {
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues().maxCoeff();
}

// Exact CDF of the |1> quadrature distribution 2 x^2 e^{-x^2}/sqrt(pi).
double fock1_cdf(double x) {
  return 0.5 * (1.0 + std::erf(x)) - x * std::exp(-x * x) / std::sqrt(M_PI);
}

RVec linspace(double lo, double hi, int n) {
  RVec v(n);
  for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
  return v;
}

}  // namespace

TEST_CASE("displacement matrix elements") {
  SUBCASE("vacuum element and identity at alpha=0") {
    for (cxd a : {cxd(0.3, 0.1), cxd(-1.2, 0.7), cxd(0, 2.0)})
      CHECK(std::abs(qcs::displacement_matrix_element(0, 0, a) -
                     std::exp(-std::norm(a) / 2.0)) < 1e-12);
    for (int k = 0; k <= 6; ++k)
      for (int l = 0; l <= 6; ++l)
        CHECK(std::abs(qcs::displacement_matrix_element(k, l, cxd(0, 0)) -
                       (k == l ? 1.0 : 0.0)) < 1e-12);
  }

  SUBCASE("negative indices rejected") {
    CHECK_THROWS_AS(qcs::displacement_matrix_element(-1, 0, cxd(1, 0)), std::invalid_argument);
    CHECK_THROWS_AS(qcs::displacement_matrix_element(0, -2, cxd(1, 0)), std::invalid_argument);
  }

  SUBCASE("agreement with the Laguerre closed form") {
    CHECK(std::abs(qcs::displacement_matrix_element(3, 1, cxd(0.7, 0.2)) -
                   displacement_oracle(3, 1, cxd(0.7, 0.2))) < 1e-10);
    for (int k = 0; k <= 20; ++k)
      for (int l = 0; l <= 20; ++l)
        for (int ir = 1; ir <= 8; ++ir)
          for (int ip = 0; ip < 4; ++ip) {
            cxd a = std::polar(double(ir), 0.9 * ip + 0.2);
            CHECK(std::abs(qcs::displacement_matrix_element(k, l, a) -
                           displacement_oracle(k, l, a)) < 1e-10);
          }
  }

  SUBCASE("appendix magnitude bound") {
    Rng rng(606);
    std::uniform_int_distribution<int> kd(0, 15);
    std::uniform_real_distribution<double> rd(0.0, 10.0), pd(0.0, 2 * M_PI);
    for (int t = 0; t < 10000; ++t) {
      int k = kd(rng), l = kd(rng);
      cxd a = std::polar(rd(rng), pd(rng));
      double bound = std::exp(-std::norm(a) / 2.0) *
                     std::pow(1.0 + std::norm(a), (k + l) / 2.0);
      CHECK(std::abs(qcs::displacement_matrix_element(k, l, a)) <= bound + 1e-12);
    }
  }
}

TEST_CASE("truncated displacement operators") {
  SUBCASE("alpha=0 gives the identity") {
    auto td = qcs::truncated_displacement(5, cxd(0, 0));
    CHECK((td.matrix - Mat::Identity(6, 6)).norm() < 1e-12);
    CHECK(!td.scaled);
  }

  SUBCASE("scaled form needs a positive width") {
    CHECK_THROWS_AS(qcs::truncated_displacement(3, cxd(1, 0), true, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(qcs::truncated_displacement(3, cxd(1, 0), true, -2.0), std::invalid_argument);
  }

  SUBCASE("scaled operator norm bound at N=10") {
    const int N = 10;
    const double sigma = std::sqrt(2.0 * N * std::log(1.0 + 4 * N));
    const double bound = 2.0 * std::exp(1.0) * std::sqrt(N * std::log(1.0 + 4 * N));
    for (double frac : {0.0, 0.1, 0.35, 0.7, 1.0, 1.6, 2.5, 4.0})
      for (int ip = 0; ip < 8; ++ip) {
        cxd a = std::polar(frac * sigma, M_PI * ip / 4.0 + 0.1);
        auto td = qcs::truncated_displacement(N, a, true, sigma);
        CHECK(largest_sv(td.matrix) <= bound + 1e-9);
      }
  }

  SUBCASE("scaled norm bound across cutoffs") {
    for (int N : {2, 5, 9, 12}) {
      const double sigma = std::sqrt(2.0 * N * std::log(1.0 + 4 * N));
      const double bound = 2.0 * std::exp(1.0) * std::sqrt(N * std::log(1.0 + 4 * N));
      for (int ir = 0; ir <= 10; ++ir)
        for (int ip = 0; ip < 6; ++ip) {
          cxd a = std::polar(0.4 * sigma * ir, M_PI * ip / 3.0 + 0.05);
          auto td = qcs::truncated_displacement(N, a, true, sigma);
          CHECK(largest_sv(td.matrix) <= bound + 1e-9);
        }
    }
  }

  SUBCASE("unscaled Frobenius bound via the entrywise chain") {
    auto td = qcs::truncated_displacement(6, cxd(1, 0));
    CHECK(td.matrix.norm() <= std::exp(-0.5) * std::pow(2.0, 7) * 2.0);
  }
}

TEST_CASE("displacement frames") {
  SUBCASE("reported width") {
    CHECK(qcs::displacement_frame_sigma(10) ==
          doctest::Approx(std::sqrt(20.0 * std::log(41.0))).epsilon(1e-12));
    CHECK(std::abs(qcs::displacement_frame_sigma(10) - 8.618) < 1e-3);
  }

  SUBCASE("monte carlo resolution at N=3") {
    auto chk = qcs::tight_frame_check_mc(qcs::displacement_frame(3), 200000, 1);
    CHECK(!chk.exact);
    CHECK(chk.deviation < 0.1);
  }

  SUBCASE("per-draw operator norm bound") {
    const int N = 3;
    auto f = qcs::displacement_frame(N);
    CHECK(!f.normalized);
    CHECK(f.claims_tight);
    const double bound =
        2.0 * std::exp(1.0) * std::sqrt(std::log(1.0 + 4 * N)) / std::sqrt(N + 1.0) + 1e-9;
    Rng rng(11);
    for (int t = 0; t < 10000; ++t) {
      auto w = qcs::sample_observable(f, rng);
      CHECK(qcs::hermiticity_error(w.matrix) < 1e-12);
      CHECK(qcs::operator_norm(w.matrix) <= bound);
    }
  }

  SUBCASE("uniform-radius ensemble makes no tightness claim") {
    auto f = qcs::displacement_uniform_frame(15, 5.0);
    CHECK(!f.claims_tight);
    CHECK(f.normalized);
    CHECK(f.alpha_max == doctest::Approx(5.0));
    Rng rng(4);
    for (int t = 0; t < 100; ++t) {
      auto w = qcs::sample_observable(f, rng);
      CHECK(qcs::hermiticity_error(w.matrix) < 1e-12);
      CHECK(w.matrix.norm() == doctest::Approx(1.0).epsilon(1e-10));
    }
  }
}

TEST_CASE("wigner matrix elements") {
  SUBCASE("vacuum point value") {
    CHECK(std::abs(qcs::wigner_matrix_element(0, 0, 0, 0) - 1.0 / M_PI) < 1e-10);
    CHECK(std::abs(wigner_quadrature(0, 0, 0, 0) - 1.0 / M_PI) < 1e-10);
  }

  SUBCASE("index swap conjugates") {
    for (int k = 0; k <= 5; ++k)
      for (int l = 0; l <= 5; ++l) {
        cxd a = qcs::wigner_matrix_element(k, l, 0.6, -1.1);
        cxd b = qcs::wigner_matrix_element(l, k, 0.6, -1.1);
        CHECK(std::abs(a - std::conj(b)) < 1e-10);
      }
  }

  SUBCASE("agreement with direct quadrature") {
    CHECK(std::abs(qcs::wigner_matrix_element(2, 1, 0.3, -0.4) -
                   wigner_quadrature(2, 1, 0.3, -0.4)) < 1e-8);
    const double pts[][2] = {{0.0, 0.0}, {0.3, -0.4}, {1.2, 0.8}};
    for (auto& pt : pts)
      for (int k = 0; k <= 6; ++k)
        for (int l = 0; l <= 6; ++l)
          CHECK(std::abs(qcs::wigner_matrix_element(k, l, pt[0], pt[1]) -
                         wigner_quadrature(k, l, pt[0], pt[1])) < 1e-8);
  }
}

TEST_CASE("pointwise wigner frame") {
  SUBCASE("parity observable at the origin") {
    Mat w0 = qcs::truncated_parity_observable(4, cxd(0, 0));
    const double c = std::sqrt(2.0 * M_PI) * 2.0 / M_PI;
    for (int j = 0; j <= 4; ++j) {
      for (int i = 0; i <= 4; ++i)
        if (i != j) CHECK(std::abs(w0(i, j)) < 1e-12);
      CHECK(w0(j, j).real() == doctest::Approx(c * (j % 2 == 0 ? 1.0 : -1.0)).epsilon(1e-10));
    }
  }

  SUBCASE("vacuum expectation reproduces the vacuum Wigner function") {
    const int N = 40;
    for (cxd a : {cxd(0.3, -0.4), cxd(1.0, 0.2), cxd(-0.7, 0.9)}) {
      Mat w = qcs::truncated_parity_observable(N, a);
      double got = w(0, 0).real() / std::sqrt(2.0 * M_PI);
      CHECK(std::abs(got - (2.0 / M_PI) * std::exp(-2.0 * std::norm(a))) < 1e-8);
      double wig = qcs::wigner_matrix_element(0, 0, std::sqrt(2.0) * a.real(),
                                              std::sqrt(2.0) * a.imag()).real();
      CHECK(std::abs(got - 2.0 * wig) < 1e-8);
    }
  }

  SUBCASE("sampled norm bound with a small fitted constant") {
    auto f = qcs::pointwise_wigner_frame(8);
    const int n = 9;
    Rng rng(3);
    double c_fit = 0.0;
    for (int t = 0; t < 10000; ++t) {
      auto w = qcs::sample_observable(f, rng);
      c_fit = std::max(c_fit, qcs::operator_norm(w.matrix) * std::sqrt(double(n)) /
                                  std::log(double(n)));
    }
    CHECK(c_fit <= 10.0);
  }

  SUBCASE("monte carlo resolution against the reported constant") {
    auto f = qcs::pointwise_wigner_frame(2);
    CHECK(f.resolution_scale == doctest::Approx(2.0));
    auto chk = qcs::tight_frame_check_mc(f, 200000, 1);
    CHECK(chk.deviation < 0.05);
    CHECK(chk.fitted_scale == doctest::Approx(2.0).epsilon(0.05));
  }

  SUBCASE("tail norms collapse beyond two widths") {
    // e^{|a|^2/2s^2} ||w_a|| stays below 1 for |a| > 2 sigma at every cutoff
    // tried; the empirical onset is N0 = 2 (the smallest cutoff the frame
    // admits), with orders of magnitude to spare.
    for (int N : {2, 4, 8}) {
      auto f = qcs::pointwise_wigner_frame(N);
      const double sigma = f.sigma;
      const int n = N + 1;
      Rng rng(99);
      int tail = 0;
      while (tail < 100) {
        cxd alpha(qcs::gaussian(rng) * sigma, qcs::gaussian(rng) * sigma);
        if (std::abs(alpha) <= 2.0 * sigma) continue;
        ++tail;
        const double r2 = std::norm(alpha);
        Mat w = qcs::truncated_parity_observable(N, alpha);
        const double pg = std::exp(-r2 / (2.0 * sigma * sigma)) / (2.0 * M_PI * sigma * sigma);
        const double frame_norm = qcs::operator_norm(w) / (n * std::sqrt(pg));
        CHECK(std::exp(r2 / (2.0 * sigma * sigma)) * frame_norm <= 1.0);
      }
    }
    std::printf("tail bound holds from the smallest admissible cutoff, N0 = 2\n");
  }
}

TEST_CASE("quadrature distributions") {
  SUBCASE("vacuum is the ground-state Gaussian at every angle") {
    Mat vac = Mat::Zero(3, 3);
    vac(0, 0) = 1.0;
    RVec grid = linspace(-4.0, 4.0, 81);
    for (double th : {0.0, 0.7, 2.1}) {
      RVec p = qcs::quadrature_distribution(vac, th, grid);
      for (int i = 0; i < grid.size(); ++i)
        CHECK(std::abs(p[i] - std::exp(-grid[i] * grid[i]) / std::sqrt(M_PI)) < 1e-10);
    }
  }

  SUBCASE("fock states are phase invariant") {
    Mat one = Mat::Zero(4, 4);
    one(1, 1) = 1.0;
    RVec grid = linspace(-5.0, 5.0, 101);
    RVec base = qcs::quadrature_distribution(one, 0.0, grid);
    for (double th = 0.3; th < M_PI; th += 0.3) {
      RVec p = qcs::quadrature_distribution(one, th, grid);
      CHECK((p - base).cwiseAbs().maxCoeff() < 1e-10);
    }
  }

  SUBCASE("normalization and positivity for random states") {
    RVec grid = linspace(-8.0, 8.0, 1025);
    const double h = grid[1] - grid[0];
    for (std::uint64_t s = 1; s <= 5; ++s) {
      auto rho = qcs::random_rank_r_state(6, 3, s);
      RVec p = qcs::quadrature_distribution(rho, 0.4 * s, grid);
      CHECK(p.minCoeff() > -1e-10);
      double integral = p.sum() * h - 0.5 * h * (p[0] + p[p.size() - 1]);
      CHECK(std::abs(integral - 1.0) < 1e-6);
    }
  }

  SUBCASE("non-square input rejected") {
    Mat bad = Mat::Zero(2, 3);
    CHECK_THROWS_AS(qcs::quadrature_distribution(bad, 0.0, linspace(-1, 1, 5)),
                    std::invalid_argument);
  }
}

TEST_CASE("homodyne sampling") {
  Mat vac = Mat::Zero(3, 3);
  vac(0, 0) = 1.0;

  SUBCASE("vacuum moments") {
    auto xs = qcs::homodyne_sample(vac, 0.0, 100000, 12);
    double mean = 0.0, sq = 0.0;
    for (double x : xs) mean += x, sq += x * x;
    mean /= xs.size();
    sq /= xs.size();
    CHECK(std::abs(mean) < 0.02);
    CHECK(std::abs(sq - mean * mean - 0.5) < 0.02);
  }

  SUBCASE("single-photon distribution passes a KS test") {
    Mat one = Mat::Zero(4, 4);
    one(1, 1) = 1.0;
    auto xs = qcs::homodyne_sample(one, 0.3, 100000, 42);
    std::sort(xs.begin(), xs.end());
    double ks = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      double f = fock1_cdf(xs[i]);
      ks = std::max({ks, std::abs(f - double(i) / xs.size()),
                     std::abs(f - double(i + 1) / xs.size())});
    }
    CHECK(ks < 1.628 / std::sqrt(100000.0));  // 1% critical value
  }

  SUBCASE("reproducible given seed and shots") {
    auto a = qcs::homodyne_sample(vac, 0.9, 500, 77);
    auto b = qcs::homodyne_sample(vac, 0.9, 500, 77);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  }
}

TEST_CASE("characteristic slices") {
  Mat vac = Mat::Zero(3, 3);
  vac(0, 0) = 1.0;

  SUBCASE("unit value at the origin") {
    qcs::HomodyneSetting st{0.8, linspace(-3, 3, 7)};
    for (std::uint64_t s = 1; s <= 3; ++s) {
      auto rho = qcs::random_rank_r_state(5, 2, s);
      auto slice = qcs::characteristic_slice_exact(rho.matrix(), st);
      CHECK(std::abs(slice.values[3] - cxd(1, 0)) < 1e-9);
      CHECK(slice.shots == 0);
    }
  }

  SUBCASE("vacuum slice matches the Fourier transform of the quadrature law") {
    qcs::HomodyneSetting st{0.4, linspace(-6, 6, 13)};
    auto slice = qcs::characteristic_slice_exact(vac, st);
    RVec grid = linspace(-12.0, 12.0, 6145);
    const double h = grid[1] - grid[0];
    RVec p = qcs::quadrature_distribution(vac, 0.4, grid);
    for (int i = 0; i < 13; ++i) {
      cxd ft(0, 0);
      for (int g = 0; g < grid.size(); ++g)
        ft += p[g] * std::exp(cxd(0, -st.zeta_grid[i] * grid[g])) * h;
      CHECK(std::abs(slice.values[i] - ft) < 1e-6);
    }
  }

  SUBCASE("conjugate symmetry in zeta") {
    qcs::HomodyneSetting st{1.1, linspace(-4, 4, 9)};
    auto rho = qcs::random_rank_r_state(6, 4, 9);
    auto slice = qcs::characteristic_slice_exact(rho.matrix(), st);
    for (int i = 0; i < 9; ++i)
      CHECK(std::abs(slice.values[i] - std::conj(slice.values[8 - i])) < 1e-10);
  }

  SUBCASE("empirical estimates") {
    qcs::HomodyneSetting st{0.4, linspace(-4, 4, 17)};
    auto one = qcs::characteristic_slice_estimate({0.0}, st);
    for (int i = 0; i < 17; ++i) CHECK(std::abs(one.values[i] - cxd(1, 0)) < 1e-15);
    CHECK(one.shots == 1);

    auto xs = qcs::homodyne_sample(vac, 0.4, 100000, 8);
    auto est = qcs::characteristic_slice_estimate(xs, st);
    auto exact = qcs::characteristic_slice_exact(vac, st);
    double worst = 0.0;
    for (int i = 0; i < 17; ++i) worst = std::max(worst, std::abs(est.values[i] - exact.values[i]));
    CHECK(worst <= 0.02);

    for (int i = 0; i < 17; ++i) {
      cxd diff = est.values[i] - std::conj(est.values[16 - i]);
      CHECK(diff.real() == 0.0);
      CHECK(diff.imag() == 0.0);
    }

    CHECK_THROWS_AS(qcs::characteristic_slice_estimate({}, st), std::invalid_argument);
  }
}

TEST_CASE("loss compensation") {
  Mat vac = Mat::Zero(3, 3);
  vac(0, 0) = 1.0;
  qcs::HomodyneSetting st{0.2, linspace(-5, 5, 11)};
  auto slice = qcs::characteristic_slice_exact(vac, st);

  SUBCASE("unit efficiency is the identity") {
    auto out = qcs::loss_compensation(slice, 1.0);
    for (int i = 0; i < 11; ++i) CHECK(std::abs(out.values[i] - slice.values[i]) < 1e-15);
  }

  SUBCASE("round trip against a synthetic loss envelope") {
    const double eta = 0.8;
    auto lossy = slice;
    for (int i = 0; i < 11; ++i) {
      double z = st.zeta_grid[i];
      lossy.values[i] *= std::exp(-(1.0 - eta) * z * z / (4.0 * eta));
    }
    auto back = qcs::loss_compensation(lossy, eta);
    for (int i = 0; i < 11; ++i) CHECK(std::abs(back.values[i] - slice.values[i]) < 1e-10);
  }

  SUBCASE("efficiency floor enforced") {
    CHECK_THROWS_AS(qcs::loss_compensation(slice, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(qcs::loss_compensation(slice, 0.2), std::invalid_argument);
  }
}

TEST_CASE("homodyne frames") {
  SUBCASE("zeta grid construction") {
    RVec g = qcs::default_zeta_grid(3, 6);
    CHECK(g.size() == 6);
    CHECK(g[0] == doctest::Approx(-2.0 * std::sqrt(6.0)).epsilon(1e-12));
    CHECK(g[5] == doctest::Approx(2.0 * std::sqrt(6.0)).epsilon(1e-12));
    for (int i = 1; i < 6; ++i) CHECK(g[i] > g[i - 1]);
    for (int i = 0; i < 6; ++i) CHECK(std::abs(g[i] + g[5 - i]) < 1e-12);
    CHECK_THROWS_AS(qcs::default_zeta_grid(3, 5), std::invalid_argument);
    CHECK_THROWS_AS(qcs::default_zeta_grid(1, 4), std::invalid_argument);
  }

  SUBCASE("angle-averaged superoperator resolves the identity") {
    auto hf = qcs::homodyne_frame(2, qcs::default_zeta_grid(3));
    const int n2 = 9;
    Mat acc = Mat::Zero(n2, n2);
    for (int j = 0; j < 64; ++j) acc += qcs::q_theta_superop(hf, M_PI * j / 64.0) / 64.0;
    qcs::RMat dev = acc.real() * n2 - qcs::RMat::Identity(n2, n2);
    CHECK(qcs::sym_operator_norm(dev) < 0.05);
  }

  SUBCASE("slices share the origin across settings") {
    Mat vac = Mat::Zero(3, 3);
    vac(0, 0) = 1.0;
    RVec g(4);
    g << -2.0, -0.5, 0.5, 2.0;
    RVec g0(2);
    g0 << -1e-14, 1e-14;
    auto a = qcs::characteristic_slice_exact(vac, {0.4, g0});
    auto b = qcs::characteristic_slice_exact(vac, {0.4 + M_PI / 2, g0});
    CHECK(std::abs(a.values[0] - b.values[0]) < 1e-9);
    CHECK(std::abs(a.values[0] - cxd(1, 0)) < 1e-9);
  }

  SUBCASE("real states pair conjugate slices at theta and pi - theta") {
    Rng rng(5);
    qcs::RMat g = qcs::RMat::Random(4, 4);
    Mat sym = (g * g.transpose()).cast<cxd>();
    sym /= sym.trace();
    RVec zg = linspace(-3, 3, 7);
    for (double th : {0.3, 0.7, 1.2}) {
      auto a = qcs::characteristic_slice_exact(sym, {th, zg});
      auto b = qcs::characteristic_slice_exact(sym, {M_PI - th, zg});
      for (int i = 0; i < 7; ++i)
        CHECK(std::abs(std::conj(a.values[i]) - b.values[i]) < 1e-10);
    }
  }

  SUBCASE("multimode dimensions") {
    auto hf = qcs::multimode_homodyne_frame({3, 3, 3}, qcs::default_zeta_grid(3, 6));
    CHECK(hf.dim() == 27);
    CHECK(hf.modes() == 3);
    auto single = qcs::homodyne_frame(2, qcs::default_zeta_grid(3));
    CHECK(single.dim() == 3);
    CHECK(single.modes() == 1);
  }
}

TEST_CASE("hermite functions match the independent recurrence") {
  for (double x : {-2.7, -0.4, 0.0, 1.3, 3.8}) {
    RVec lib = qcs::hermite_functions(12, x);
    auto ora = oracle_hermite(12, x);
    for (int j = 0; j <= 12; ++j) CHECK(std::abs(lib[j] - ora[j]) < 1e-12);
  }
}

TEST_CASE("characteristic-function completeness") {
  // Plancherel on a fine grid: sum |Tr(D(a) rho)|^2 dA / pi ~ Tr(rho^2).
  auto rho = qcs::random_rank_r_state(4, 3, 21);
  const double h = 0.1;
  double sum = 0.0;
  for (double re = -6.0; re <= 6.0; re += h)
    for (double im = -6.0; im <= 6.0; im += h) {
      auto td = qcs::truncated_displacement(3, cxd(re, im));
      sum += std::norm((td.matrix * rho.matrix()).trace()) * h * h;
    }
  sum /= M_PI;
  const double purity = (rho.matrix() * rho.matrix()).trace().real();
  CHECK(std::abs(sum - purity) <= 0.02 * purity);
}
