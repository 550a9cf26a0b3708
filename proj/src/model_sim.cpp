#include "ecfvol/model_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <string>

#include "ecfvol/error.hpp"
#include "ecfvol/numeric.hpp"

namespace ecfvol {
namespace {

double open_unit(Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  double x = 0.0;
  while (x == 0.0) x = unif(rng);
  return x;
}

void fill_truths(SimulatedPath& out, const ModelParams& p) {
  KahanSum acc;
  for (int i = 0; i < out.n; ++i) acc.add(out.sigma2[static_cast<std::size_t>(i)]);
  out.integrated_variance = out.delta_n * acc.value();
  out.true_leverage = p.eta * p.rho * out.integrated_variance;
  out.true_vov = p.eta * p.eta * out.integrated_variance;
  out.s_tilde = p.eta * p.rho / 2.0;
  out.s_tilde_prime = p.eta * std::sqrt(1.0 - p.rho * p.rho) / 2.0;
}

void append_number(std::string& line, double x) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  line.append(buf, ptr);
}

}  // namespace

void ModelParams::validate() const {
  auto finite = [](double x) { return std::isfinite(x); };
  if (!(finite(x0) && finite(sigma2_0) && finite(v) && finite(zeta) && finite(theta) &&
        finite(eta) && finite(rho) && finite(gamma) && finite(beta) && finite(lambda_cp) &&
        finite(jump_sd)))
    throw ParameterError("model parameters must be finite");
  if (!(sigma2_0 > 0.0)) throw ParameterError("sigma2_0 must be positive");
  if (theta < 0.0 || zeta < 0.0 || eta < 0.0 || gamma < 0.0 || lambda_cp < 0.0 || jump_sd < 0.0)
    throw ParameterError("theta, zeta, eta, gamma, lambda_cp and jump_sd must be >= 0");
  if (std::abs(rho) > 1.0) throw ParameterError("rho must lie in [-1, 1]");
  if (!(beta > 0.0 && beta < 2.0)) throw ParameterError("beta must lie in (0, 2)");
  if (eta > 0.0 && !(2.0 * zeta * theta > eta * eta))
    throw ParameterError("Feller condition 2 zeta theta > eta^2 violated");
}

ModelParams ModelParams::baseline(double rho, double eta, double gamma, double beta) {
  ModelParams p;
  p.rho = rho;
  p.eta = eta;
  p.gamma = gamma;
  p.beta = beta;
  return p;
}

double LatentVolPath::sigma2_at(int i) const {
  return std::max(state[static_cast<std::size_t>(i) * static_cast<std::size_t>(substeps)], 0.0);
}

std::vector<double> LatentVolPath::grid_sigma2() const {
  std::vector<double> s(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) s[static_cast<std::size_t>(i)] = sigma2_at(i);
  return s;
}

double sample_symmetric_stable(double beta, Rng& rng) {
  if (!(beta > 0.0 && beta < 2.0)) throw ParameterError("stable index must lie in (0, 2)");
  const double angle = std::numbers::pi * (open_unit(rng) - 0.5);
  const double expo = -std::log(open_unit(rng));
  if (beta == 1.0) return std::tan(angle);
  return std::sin(beta * angle) / std::pow(std::cos(angle), 1.0 / beta) *
         std::pow(std::cos((1.0 - beta) * angle) / expo, (1.0 - beta) / beta);
}

std::vector<double> sample_symmetric_stable(double beta, std::size_t count, Rng& rng) {
  if (!(beta > 0.0 && beta < 2.0)) throw ParameterError("stable index must lie in (0, 2)");
  std::vector<double> out(count);
  for (auto& x : out) x = sample_symmetric_stable(beta, rng);
  return out;
}

LatentVolPath simulate_variance(const ModelParams& params, int n, double horizon,
                                std::uint64_t seed) {
  params.validate();
  if (n < 2) throw ParameterError("n must be at least 2");
  if (!(horizon > 0.0)) throw ParameterError("horizon must be positive");

  LatentVolPath vol;
  vol.n = n;
  vol.delta_n = horizon / n;
  vol.substeps = kVarianceSubsteps;
  const std::size_t steps = static_cast<std::size_t>(n) * static_cast<std::size_t>(vol.substeps);
  vol.state.resize(steps + 1);
  vol.dw.resize(steps);

  const double h = vol.delta_n / vol.substeps;
  const double sqrt_h = std::sqrt(h);
  Rng rng = make_rng(seed, Stream::Variance);
  std::normal_distribution<double> normal;

  double s = params.sigma2_0;
  vol.state[0] = s;
  for (std::size_t k = 0; k < steps; ++k) {
    const double dw = sqrt_h * normal(rng);
    const double sp = std::max(s, 0.0);
    s = s + params.zeta * (params.theta - sp) * h + params.eta * std::sqrt(sp) * dw;
    vol.dw[k] = dw;
    vol.state[k + 1] = s;
  }
  return vol;
}

SimulatedPath resample_price(const LatentVolPath& vol, const ModelParams& params,
                             std::uint64_t seed) {
  params.validate();
  SimulatedPath out;
  out.n = vol.n;
  out.delta_n = vol.delta_n;
  out.seed = seed;
  out.sigma2 = vol.grid_sigma2();
  out.log_prices.resize(static_cast<std::size_t>(vol.n) + 1);

  const int m = vol.substeps;
  const double h = vol.delta_n / m;
  const double sqrt_h = std::sqrt(h);
  const double rho_perp = std::sqrt(1.0 - params.rho * params.rho);
  const bool jumps = params.gamma > 0.0;
  const double stable_scale = std::pow(vol.delta_n, 1.0 / params.beta);

  Rng price_rng = make_rng(seed, Stream::Price);
  Rng jump_rng = make_rng(seed, Stream::Jumps);
  Rng stable_rng = make_rng(seed, Stream::Stable);
  std::normal_distribution<double> normal;
  std::poisson_distribution<int> arrivals(params.lambda_cp * vol.delta_n);

  double x = params.x0;
  out.log_prices[0] = x;
  for (int i = 0; i < vol.n; ++i) {
    double incr = 0.0;
    for (int k = 0; k < m; ++k) {
      const std::size_t idx = static_cast<std::size_t>(i) * m + k;
      const double sp = std::max(vol.state[idx], 0.0);
      const double dv = sqrt_h * normal(price_rng);
      incr += (params.v - sp / 2.0) * h + std::sqrt(sp) * (params.rho * vol.dw[idx] + rho_perp * dv);
    }
    if (jumps) {
      double jump = stable_scale * sample_symmetric_stable(params.beta, stable_rng);
      if (params.lambda_cp > 0.0) {
        const int count = arrivals(jump_rng);
        for (int c = 0; c < count; ++c) jump += params.jump_sd * normal(jump_rng);
      }
      incr += params.gamma * jump;
    }
    x += incr;
    out.log_prices[static_cast<std::size_t>(i) + 1] = x;
  }
  fill_truths(out, params);
  return out;
}

SimulatedPath simulate(const ModelParams& params, int n, double horizon, std::uint64_t seed) {
  return resample_price(simulate_variance(params, n, horizon, seed), params, seed);
}

SimulatedPath resample_price(std::span<const double> sigma2, double delta_n,
                             const ModelParams& params, std::uint64_t seed) {
  params.validate();
  if (sigma2.size() < 3) throw DataError("variance path needs at least 3 points");
  if (!(delta_n > 0.0)) throw ParameterError("delta_n must be positive");
  for (double s : sigma2)
    if (!(s > 0.0) || !std::isfinite(s)) throw DataError("variance path must be strictly positive");

  LatentVolPath vol;
  vol.n = static_cast<int>(sigma2.size()) - 1;
  vol.delta_n = delta_n;
  vol.substeps = 1;
  vol.state.assign(sigma2.begin(), sigma2.end());
  vol.dw.resize(static_cast<std::size_t>(vol.n));
  if (params.eta > 0.0) {
    for (int i = 0; i < vol.n; ++i) {
      const double s = sigma2[static_cast<std::size_t>(i)];
      const double ds = sigma2[static_cast<std::size_t>(i) + 1] - s;
      vol.dw[static_cast<std::size_t>(i)] =
          (ds - params.zeta * (params.theta - s) * delta_n) / (params.eta * std::sqrt(s));
    }
  } else {
    Rng rng = make_rng(seed, Stream::Variance);
    std::normal_distribution<double> normal;
    const double sqrt_dn = std::sqrt(delta_n);
    for (auto& w : vol.dw) w = sqrt_dn * normal(rng);
  }
  return resample_price(vol, params, seed);
}

void write_path_csv(std::ostream& out, const SimulatedPath& path) {
  out << "t,logprice,sigma2\n";
  std::string line;
  for (int i = 0; i <= path.n; ++i) {
    line.clear();
    append_number(line, i * path.delta_n);
    line += ',';
    append_number(line, path.log_prices[static_cast<std::size_t>(i)]);
    line += ',';
    append_number(line, path.sigma2[static_cast<std::size_t>(i)]);
    line += '\n';
    out << line;
  }
}

void write_path_csv(std::ostream& out, const PricePath& path) {
  out << "t,logprice,sigma2\n";
  std::string line;
  const auto lp = path.log_prices();
  for (std::size_t i = 0; i < lp.size(); ++i) {
    line.clear();
    append_number(line, static_cast<double>(i) * path.delta_n());
    line += ',';
    append_number(line, lp[i]);
    line += ",\n";
    out << line;
  }
}

PricePath read_path_csv(std::istream& in) {
  std::string line;
  std::vector<double> t;
  std::vector<double> x;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (lineno == 1 && (line[0] == 't' || line[0] == 'T')) continue;
    const char* p = line.data();
    const char* end = p + line.size();
    double tv = 0.0;
    double xv = 0.0;
    auto r1 = std::from_chars(p, end, tv);
    if (r1.ec != std::errc{} || r1.ptr == end || *r1.ptr != ',')
      throw DataError("path CSV line " + std::to_string(lineno) + ": bad time field");
    auto r2 = std::from_chars(r1.ptr + 1, end, xv);
    if (r2.ec != std::errc{} || (r2.ptr != end && *r2.ptr != ','))
      throw DataError("path CSV line " + std::to_string(lineno) + ": bad logprice field");
    t.push_back(tv);
    x.push_back(xv);
  }
  if (x.size() < 2) throw DataError("path CSV needs at least two rows");
  const double dn = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  if (!(dn > 0.0)) throw DataError("path CSV times must increase");
  for (std::size_t i = 1; i < t.size(); ++i) {
    const double step = t[i] - t[i - 1];
    if (std::abs(step - dn) > 1e-9 * std::max(1.0, std::abs(t[i])) + 1e-6 * dn)
      throw DataError("path CSV grid is not equispaced at row " + std::to_string(i + 1));
  }
  return PricePath(std::move(x), dn);
}

}  // namespace ecfvol
