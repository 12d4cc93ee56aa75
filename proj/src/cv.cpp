#include "qcs/cv.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qcs {

namespace {

constexpr double kPi = std::numbers::pi;

double lg(int n) { return std::lgamma(double(n) + 1.0); }  // log n!

long double lgl(int n) { return lgammal((long double)n + 1.0L); }

}  // namespace

RVec hermite_functions(int n_max, double x) {
  RVec psi(n_max + 1);
  psi[0] = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  if (n_max >= 1) psi[1] = std::sqrt(2.0) * x * psi[0];
  for (int k = 1; k < n_max; ++k)
    psi[k + 1] = std::sqrt(2.0 / (k + 1)) * x * psi[k] - std::sqrt(double(k) / (k + 1)) * psi[k - 1];
  return psi;
}

cxd displacement_matrix_element(int k, int l, cxd alpha) {
  if (k < 0 || l < 0) throw std::invalid_argument("displacement_matrix_element: negative index");
  const double r = std::abs(alpha);
  if (r == 0.0) return (k == l) ? cxd(1, 0) : cxd(0, 0);
  const double phi = std::arg(alpha);
  const int jmax = std::min(k, l);
  // Terms share the phase e^{i(k-l)phi}. The alternating sum cancels down from
  // terms ~1e4 times the result near k=l=20, |alpha|=8, so per-term rounding
  // is what limits absolute accuracy. First pass locates the peak in log space
  // (the shift cancels exactly between the two exponentials, so double is
  // enough). Terms then come from a multiplicative recursion in extended
  // precision: the exp() appears only in factors shared by every term, which
  // scale the sum without disturbing the cancellation, and the stepwise
  // integer ratios cost about an ulp each.
  double gmax = -std::numeric_limits<double>::infinity();
  for (int j = 0; j <= jmax; ++j) {
    const double lm = 0.5 * (lg(k) - lg(j)) + 0.5 * (lg(l) - lg(j)) - lg(k - j) - lg(l - j) +
                      (k + l - 2 * j) * std::log(r);
    gmax = std::max(gmax, lm);
  }
  const long double r2 = (long double)r * (long double)r;
  const long double logt0 =
      -0.5L * (lgl(k) + lgl(l)) + 0.5L * (long double)(k + l) * std::log(r2);
  long double u = std::exp(logt0 - (long double)gmax);
  long double s = (l % 2 == 0) ? u : -u;
  for (int j = 0; j < jmax; ++j) {
    u *= (long double)(k - j) * (long double)(l - j) / ((long double)(j + 1) * r2);
    s = ((l - j - 1) % 2 == 0) ? s + u : s - u;
  }
  const double mag = (double)(s * std::exp((long double)gmax - 0.5L * r2));
  return mag * std::exp(cxd(0, (k - l) * phi));
}

TruncatedDisplacement truncated_displacement(int n_cut, cxd alpha, bool scaled, double sigma) {
  if (n_cut < 0) throw std::invalid_argument("truncated_displacement: negative cutoff");
  if (scaled && sigma <= 0) throw std::invalid_argument("truncated_displacement: sigma <= 0");
  TruncatedDisplacement td;
  td.cutoff = n_cut;
  td.alpha = alpha;
  td.scaled = scaled;
  td.sigma = sigma;
  const int n = n_cut + 1;
  td.matrix.resize(n, n);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) td.matrix(k, l) = displacement_matrix_element(k, l, alpha);
  if (scaled) {
    const double a2 = std::norm(alpha);
    td.matrix *= std::sqrt(2.0) * sigma * std::exp(a2 / (4.0 * sigma * sigma));
  }
  return td;
}

double displacement_frame_sigma(int n_cut) {
  return std::sqrt(2.0 * n_cut * std::log(1.0 + 4.0 * n_cut));
}

FrameDescriptor displacement_frame(int n_cut) {
  if (n_cut < 1) throw std::invalid_argument("displacement_frame: cutoff < 1");
  if (n_cut + 1 > kMaxDim) throw std::invalid_argument("displacement_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kDisplacementGaussian;
  f.dim = n_cut + 1;
  f.normalized = false;
  f.claims_tight = true;
  f.resolution_scale = 1.0;
  f.cutoff = n_cut;
  f.sigma = displacement_frame_sigma(n_cut);
  return f;
}

FrameDescriptor displacement_uniform_frame(int n_cut, double alpha_max) {
  if (n_cut < 1 || alpha_max <= 0)
    throw std::invalid_argument("displacement_uniform_frame: bad parameters");
  if (n_cut + 1 > kMaxDim) throw std::invalid_argument("displacement_uniform_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kDisplacementUniform;
  f.dim = n_cut + 1;
  f.normalized = true;
  f.claims_tight = false;  // measurement ensemble, not a tight frame
  f.cutoff = n_cut;
  f.alpha_max = alpha_max;
  return f;
}

namespace {

// Core of the generating-function closed form for W_{|l><k|}(x,p), times
// exp(extra_log). Max-term shift keeps it finite at any phase-space scale.
cxd wigner_element_core(int k, int l, double x, double p, double extra_log) {
  const cxd z(x, p);
  const double r = std::abs(z);
  const double gauss_log = -x * x - p * p - std::log(kPi) + extra_log;
  if (r == 0.0) {
    if (k != l) return cxd(0, 0);
    // only the m = k term survives at the origin
    const double g = 0.5 * (lg(k) + lg(k)) - lg(k) + k * std::log(2.0) - 0.5 * (2 * k) * std::log(2.0);
    const double sign = (k % 2 == 0) ? 1.0 : -1.0;
    return cxd(sign * std::exp(g + gauss_log), 0);
  }
  const double thz = std::arg(z);
  const int mmax = std::min(k, l);
  std::vector<double> logmag(mmax + 1);
  double gmax = -std::numeric_limits<double>::infinity();
  for (int m = 0; m <= mmax; ++m) {
    logmag[m] = 0.5 * (lg(k) + lg(l)) - lg(l - m) - lg(k - m) - lg(m) +
                (k + l - 2 * m) * (std::log(2.0) + std::log(r)) + m * std::log(2.0) -
                0.5 * (k + l) * std::log(2.0);
    gmax = std::max(gmax, logmag[m]);
  }
  double s = 0.0;
  for (int m = 0; m <= mmax; ++m) {
    const double sign = (m % 2 == 0) ? 1.0 : -1.0;
    s += sign * std::exp(logmag[m] - gmax);
  }
  return s * std::exp(gmax + gauss_log) * std::exp(cxd(0, (l - k) * thz));
}

}  // namespace

cxd wigner_matrix_element(int k, int l, double x, double p) {
  if (k < 0 || l < 0) throw std::invalid_argument("wigner_matrix_element: negative index");
  return wigner_element_core(k, l, x, p, 0.0);
}

Mat truncated_parity_observable(int n_cut, cxd alpha, double log_scale) {
  const int n = n_cut + 1;
  const double x = std::sqrt(2.0) * alpha.real();
  const double p = std::sqrt(2.0) * alpha.imag();
  const double pref = 2.0 * std::sqrt(2.0 * kPi);
  Mat w(n, n);
  // <a| w_alpha |b> = 2 sqrt(2 pi) W_{|b><a|}(x, p) = 2 sqrt(2 pi) * core(a, b).
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) w(a, b) = pref * wigner_element_core(a, b, x, p, log_scale);
  return hermitize(w);
}

FrameDescriptor pointwise_wigner_frame(int n_cut) {
  if (n_cut < 1) throw std::invalid_argument("pointwise_wigner_frame: cutoff < 1");
  if (n_cut + 1 > kMaxDim) throw std::invalid_argument("pointwise_wigner_frame: dim beyond cap");
  FrameDescriptor f;
  f.kind = FrameKind::kWignerPoint;
  f.dim = n_cut + 1;
  f.normalized = false;
  f.claims_tight = true;
  // With the sqrt(2 pi)(2/pi) prefactor the ensemble resolves to twice the
  // identity; the constant is surfaced by the resolution check.
  f.resolution_scale = 2.0;
  f.cutoff = n_cut;
  const double n = n_cut + 1;
  f.sigma = std::sqrt(n) * std::log(n);
  return f;
}

RVec quadrature_distribution(const Mat& rho, double theta, const RVec& x_grid) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("quadrature_distribution: not square");
  const int n = static_cast<int>(rho.rows());
  RVec out(x_grid.size());
  Vec v(n);
  for (int g = 0; g < x_grid.size(); ++g) {
    const RVec psi = hermite_functions(n - 1, x_grid[g]);
    for (int j = 0; j < n; ++j) v[j] = psi[j] * std::exp(cxd(0, j * theta));
    out[g] = (v.adjoint() * rho * v).value().real();
  }
  return out;
}

RVec quadrature_distribution(const DensityMatrix& rho, double theta, const RVec& x_grid) {
  return quadrature_distribution(rho.matrix(), theta, x_grid);
}

std::vector<double> homodyne_sample(const Mat& rho, double theta, int shots, std::uint64_t seed) {
  if (shots < 1) throw std::invalid_argument("homodyne_sample: shots < 1");
  const int n = static_cast<int>(rho.rows());
  const double span = 8.0 + std::sqrt(double(n - 1));
  const int grid_points = 1 << 13;
  RVec xs(grid_points);
  for (int i = 0; i < grid_points; ++i)
    xs[i] = -span + 2.0 * span * i / (grid_points - 1);
  const RVec pdf = quadrature_distribution(rho, theta, xs);
  const double dx = xs[1] - xs[0];
  RVec cdf(grid_points);
  cdf[0] = 0.0;
  for (int i = 1; i < grid_points; ++i)
    cdf[i] = cdf[i - 1] + 0.5 * (std::max(pdf[i - 1], 0.0) + std::max(pdf[i], 0.0)) * dx;
  const double total = cdf[grid_points - 1];
  if (total <= 0) throw std::runtime_error("homodyne_sample: degenerate distribution");

  Rng rng(seed);
  std::uniform_real_distribution<double> unif(0.0, total);
  std::vector<double> out(static_cast<size_t>(shots));
  for (auto& x : out) {
    const double u = unif(rng);
    const auto it = std::lower_bound(cdf.data(), cdf.data() + grid_points, u);
    int hi = std::clamp(int(it - cdf.data()), 1, grid_points - 1);
    const double c0 = cdf[hi - 1], c1 = cdf[hi];
    const double t = (c1 > c0) ? (u - c0) / (c1 - c0) : 0.5;
    x = xs[hi - 1] + t * dx;
  }
  return out;
}

cxd slice_alpha(double zeta, double theta) {
  return cxd(0, -1) * zeta * std::exp(cxd(0, theta)) / std::sqrt(2.0);
}

CharacteristicSlice characteristic_slice_exact(const Mat& rho, const HomodyneSetting& setting) {
  if (rho.rows() != rho.cols()) throw std::invalid_argument("characteristic_slice_exact: not square");
  const int n = static_cast<int>(rho.rows());
  CharacteristicSlice out;
  out.setting = setting;
  out.shots = 0;
  out.values.resize(setting.zeta_grid.size());
  for (int j = 0; j < setting.zeta_grid.size(); ++j) {
    const auto d = truncated_displacement(n - 1, slice_alpha(setting.zeta_grid[j], setting.theta));
    out.values[j] = (d.matrix * rho).trace();
  }
  return out;
}

CharacteristicSlice characteristic_slice_estimate(const std::vector<double>& xs,
                                                  const HomodyneSetting& setting) {
  if (xs.empty()) throw std::invalid_argument("characteristic_slice_estimate: no samples");
  CharacteristicSlice out;
  out.setting = setting;
  out.shots = static_cast<long>(xs.size());
  out.values = Vec::Zero(setting.zeta_grid.size());
  for (const double x : xs)
    for (int j = 0; j < setting.zeta_grid.size(); ++j)
      out.values[j] += std::exp(cxd(0, -setting.zeta_grid[j] * x));
  out.values /= double(xs.size());
  return out;
}

CharacteristicSlice loss_compensation(const CharacteristicSlice& slice, double eta, double eta_min) {
  if (eta <= eta_min || eta > 1.0)
    throw std::invalid_argument("loss_compensation: efficiency outside (eta_min, 1]");
  CharacteristicSlice out = slice;
  for (int j = 0; j < out.values.size(); ++j) {
    const double z = slice.setting.zeta_grid[j];
    out.values[j] /= std::exp(-(1.0 - eta) * z * z / (4.0 * eta));
  }
  return out;
}

RVec default_zeta_grid(int dim, int points) {
  if (dim < 2 || points < 2 || points % 2 != 0)
    throw std::invalid_argument("default_zeta_grid: need dim >= 2 and an even point count");
  const double zmax = 2.0 * std::sqrt(2.0 * dim);
  RVec grid(points);
  for (int i = 0; i < points; ++i) grid[i] = -zmax + 2.0 * zmax * i / (points - 1);
  return grid;
}

namespace {

void validate_grid(const RVec& grid) {
  const int n = static_cast<int>(grid.size());
  if (n < 2 || n % 2 != 0)
    throw std::invalid_argument("homodyne grid: need an even number of points");
  for (int i = 1; i < n; ++i)
    if (grid[i] <= grid[i - 1]) throw std::invalid_argument("homodyne grid: not increasing");
  for (int i = 0; i < n; ++i) {
    if (std::abs(grid[i] + grid[n - 1 - i]) > 1e-12)
      throw std::invalid_argument("homodyne grid: not symmetric about 0");
    if (grid[i] == 0.0) throw std::invalid_argument("homodyne grid: contains 0");
  }
}

}  // namespace

HomodyneFrame homodyne_frame(int n_cut, RVec zeta_grid) {
  if (n_cut < 1) throw std::invalid_argument("homodyne_frame: cutoff < 1");
  validate_grid(zeta_grid);
  return HomodyneFrame{{n_cut + 1}, std::move(zeta_grid)};
}

HomodyneFrame multimode_homodyne_frame(std::vector<int> mode_dims, RVec zeta_grid) {
  if (mode_dims.empty()) throw std::invalid_argument("multimode_homodyne_frame: no modes");
  long dim = 1;
  for (int d : mode_dims) {
    if (d < 2) throw std::invalid_argument("multimode_homodyne_frame: mode dim < 2");
    dim *= d;
    if (dim > kMaxDim) throw std::invalid_argument("multimode_homodyne_frame: dim beyond cap");
  }
  validate_grid(zeta_grid);
  return HomodyneFrame{std::move(mode_dims), std::move(zeta_grid)};
}

std::vector<HermitianObservable> homodyne_setting_observables(const HomodyneFrame& frame,
                                                              const std::vector<double>& thetas) {
  const int modes = frame.modes();
  if (static_cast<int>(thetas.size()) != modes)
    throw std::invalid_argument("homodyne_setting_observables: one angle per mode required");
  const int g = static_cast<int>(frame.zeta_grid.size());

  // Per-mode displacement matrices over the grid.
  std::vector<std::vector<Mat>> dms(modes);
  for (int m = 0; m < modes; ++m) {
    dms[m].reserve(g);
    for (int j = 0; j < g; ++j)
      dms[m].push_back(
          truncated_displacement(frame.mode_dims[m] - 1, slice_alpha(frame.zeta_grid[j], thetas[m]))
              .matrix);
  }

  auto fmt = [&](const std::vector<int>& tuple, const char* part) {
    std::string s = "theta=(";
    for (int m = 0; m < modes; ++m) s += (m ? "," : "") + std::to_string(thetas[m]);
    s += ");zeta=(";
    for (int m = 0; m < modes; ++m) s += (m ? "," : "") + std::to_string(frame.zeta_grid[tuple[m]]);
    s += ");";
    return s + part;
  };

  // One Re/Im pair per {t, -t} orbit of the joint grid; representative has
  // positive leading zeta. Negating every zeta maps M to M^dag, so the pair
  // carries exactly the complex slice information of the whole orbit.
  std::vector<HermitianObservable> out;
  out.reserve(static_cast<size_t>(std::pow(double(g), modes)));
  std::vector<int> tuple(modes, 0);
  while (true) {
    if (frame.zeta_grid[tuple[0]] > 0.0) {
      Mat m = dms[0][tuple[0]];
      for (int k = 1; k < modes; ++k) m = kron(m, dms[k][tuple[k]]);
      out.push_back({hermitize(m), fmt(tuple, "re")});
      Mat im = (m - m.adjoint()) / cxd(0, 2);
      out.push_back({std::move(im), fmt(tuple, "im")});
    }
    int pos = modes - 1;
    while (pos >= 0 && ++tuple[pos] == g) tuple[pos--] = 0;
    if (pos < 0) break;
  }
  return out;
}

Mat q_theta_superop(const HomodyneFrame& frame, double theta) {
  if (frame.modes() != 1) throw std::invalid_argument("q_theta_superop: single-mode only");
  const int n = frame.dim();
  const int g = static_cast<int>(frame.zeta_grid.size());
  Mat s = Mat::Zero(n * n, n * n);
  for (int j = 0; j < g; ++j) {
    const double z = frame.zeta_grid[j];
    double w;  // trapezoid weight
    if (j == 0)
      w = 0.5 * (frame.zeta_grid[1] - frame.zeta_grid[0]);
    else if (j == g - 1)
      w = 0.5 * (frame.zeta_grid[g - 1] - frame.zeta_grid[g - 2]);
    else
      w = 0.5 * (frame.zeta_grid[j + 1] - frame.zeta_grid[j - 1]);
    const Mat d = truncated_displacement(n - 1, slice_alpha(z, theta)).matrix;
    Eigen::Map<const Vec> v(d.data(), n * n);
    // polar Jacobian |zeta|/2 makes the theta-average resolve the identity
    s.selfadjointView<Eigen::Lower>().rankUpdate(v, w * std::abs(z) / 2.0);
  }
  s = Mat(s.selfadjointView<Eigen::Lower>());
  return s / double(n * n);
}

}  // namespace qcs
