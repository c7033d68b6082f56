#include "jscc/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include <json.hpp>

#include "jscc/errors.hpp"
#include "jscc/special.hpp"

namespace jscc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_pmf(const std::vector<double>& pmf) {
  if (pmf.empty()) throw std::domain_error("pmf is empty");
  double s = 0.0;
  for (double p : pmf) {
    if (p < 0.0) throw std::domain_error("pmf has a negative entry");
    s += p;
  }
  if (std::fabs(s - 1.0) > 1e-9) throw std::domain_error("pmf does not sum to 1");
}

void check_stochastic(const Matrix& m) {
  if (m.empty()) throw std::domain_error("transition matrix is empty");
  for (const auto& row : m) {
    if (row.size() != m[0].size()) throw std::domain_error("transition matrix is ragged");
    double s = 0.0;
    for (double p : row) {
      if (p < 0.0) throw std::domain_error("transition matrix has a negative entry");
      s += p;
    }
    if (std::fabs(s - 1.0) > 1e-9) throw std::domain_error("transition row does not sum to 1");
  }
}

double entropy_bits_of(const std::vector<double>& pmf) {
  double h = 0.0;
  for (double p : pmf)
    if (p > 0.0) h -= p * std::log2(p);
  return h;
}

// lambda* = -R'(d) for a generic finite source, central difference in nats.
double generic_lambda_star_nats(const std::vector<double>& pmf, const Matrix& dist, double d);

}  // namespace

// ---- constructors / validation ----

SourceModel SourceModel::bms(double p) {
  if (!(p >= 0.0 && p <= 0.5)) throw std::domain_error("bms: bias must be in [0, 1/2]");
  SourceModel s;
  s.kind = SourceKind::Bms;
  s.bias = p;
  return s;
}

SourceModel SourceModel::gms(double sigma2) {
  if (!(sigma2 > 0.0)) throw std::domain_error("gms: variance must be positive");
  SourceModel s;
  s.kind = SourceKind::Gms;
  s.variance = sigma2;
  return s;
}

SourceModel SourceModel::erasure_dms(int m) {
  if (m < 2) throw std::domain_error("erasure_dms: alphabet size must be >= 2");
  SourceModel s;
  s.kind = SourceKind::ErasureDms;
  s.alphabet_size = m;
  return s;
}

SourceModel SourceModel::log_loss_dms(std::vector<double> pmf) {
  check_pmf(pmf);
  SourceModel s;
  s.kind = SourceKind::LogLossDms;
  s.alphabet_size = int(pmf.size());
  s.pmf = std::move(pmf);
  return s;
}

SourceModel SourceModel::generic(std::vector<double> pmf, Matrix distortion) {
  check_pmf(pmf);
  if (distortion.size() != pmf.size()) throw std::domain_error("generic source: |S| mismatch");
  for (const auto& row : distortion) {
    if (row.size() != distortion[0].size() || row.empty())
      throw std::domain_error("generic source: bad distortion matrix");
    for (double v : row)
      if (v < 0.0) throw std::domain_error("generic source: negative distortion");
  }
  SourceModel s;
  s.kind = SourceKind::GenericFinite;
  s.pmf = std::move(pmf);
  s.distortion = std::move(distortion);
  return s;
}

ChannelModel ChannelModel::bsc(double delta) {
  if (!(delta >= 0.0 && delta <= 0.5)) throw std::domain_error("bsc: delta must be in [0, 1/2]");
  ChannelModel c;
  c.kind = ChannelKind::Bsc;
  c.crossover = delta;
  return c;
}

ChannelModel ChannelModel::awgn(double snr, PowerConstraint pc) {
  if (!(snr >= 0.0)) throw std::domain_error("awgn: snr must be >= 0");
  ChannelModel c;
  c.kind = ChannelKind::Awgn;
  c.snr = snr;
  c.constraint = pc;
  return c;
}

ChannelModel ChannelModel::dec(double delta, int m) {
  if (!(delta >= 0.0 && delta <= 1.0)) throw std::domain_error("dec: delta must be in [0,1]");
  if (m < 2) throw std::domain_error("dec: alphabet size must be >= 2");
  ChannelModel c;
  c.kind = ChannelKind::Dec;
  c.crossover = delta;
  c.alphabet_size = m;
  return c;
}

ChannelModel ChannelModel::generic(Matrix transition) {
  check_stochastic(transition);
  ChannelModel c;
  c.kind = ChannelKind::GenericFinite;
  c.transition = std::move(transition);
  return c;
}

double SourceModel::d_min() const {
  switch (kind) {
    case SourceKind::Bms:
    case SourceKind::Gms:
    case SourceKind::ErasureDms:
    case SourceKind::LogLossDms:
      return 0.0;
    case SourceKind::GenericFinite: {
      double s = 0.0;
      for (std::size_t i = 0; i < pmf.size(); ++i)
        s += pmf[i] * *std::min_element(distortion[i].begin(), distortion[i].end());
      return s;
    }
  }
  return 0.0;
}

double SourceModel::d_max() const {
  switch (kind) {
    case SourceKind::Bms:
      return bias;
    case SourceKind::Gms:
      return variance;
    case SourceKind::ErasureDms:
      return std::log2(double(alphabet_size));
    case SourceKind::LogLossDms:
      return entropy_bits_of(pmf);
    case SourceKind::GenericFinite: {
      double best = kInf;
      for (std::size_t z = 0; z < distortion[0].size(); ++z) {
        double s = 0.0;
        for (std::size_t i = 0; i < pmf.size(); ++i) s += pmf[i] * distortion[i][z];
        best = std::min(best, s);
      }
      return best;
    }
  }
  return 0.0;
}

double SourceModel::entropy_bits() const {
  switch (kind) {
    case SourceKind::Bms:
      return binary_entropy(bias);
    case SourceKind::Gms:
      throw std::domain_error("entropy_bits: Gms is continuous");
    case SourceKind::ErasureDms:
      return std::log2(double(alphabet_size));
    case SourceKind::LogLossDms:
    case SourceKind::GenericFinite:
      return entropy_bits_of(pmf);
  }
  return 0.0;
}

// ---- Blahut-Arimoto ----

CapacitySolution blahut_arimoto_capacity(const Matrix& w, double tol, int max_iterations) {
  check_stochastic(w);
  const std::size_t nx = w.size(), ny = w[0].size();
  std::vector<double> r(nx, 1.0 / double(nx)), q(ny, 0.0), dx(nx, 0.0);
  int it = 0;
  double c_nats = 0.0;
  for (; it < max_iterations; ++it) {
    std::fill(q.begin(), q.end(), 0.0);
    for (std::size_t x = 0; x < nx; ++x)
      for (std::size_t y = 0; y < ny; ++y) q[y] += r[x] * w[x][y];
    double lower = 0.0, upper = -kInf;
    for (std::size_t x = 0; x < nx; ++x) {
      double d = 0.0;
      for (std::size_t y = 0; y < ny; ++y)
        if (w[x][y] > 0.0) d += w[x][y] * std::log(w[x][y] / q[y]);
      dx[x] = d;
      lower += r[x] * d;
      upper = std::max(upper, d);
    }
    c_nats = lower;
    if (upper - lower < tol * kLn2) break;
    double z = 0.0;
    for (std::size_t x = 0; x < nx; ++x) {
      r[x] *= std::exp(dx[x] - lower);
      z += r[x];
    }
    for (double& v : r) v /= z;
  }
  if (it >= max_iterations)
    throw numeric_error("blahut_arimoto_capacity did not converge after " +
                            std::to_string(max_iterations) + " iterations",
                        tol);
  std::fill(q.begin(), q.end(), 0.0);
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y) q[y] += r[x] * w[x][y];
  double v2 = 0.0;
  const double c_bits = c_nats / kLn2;
  for (std::size_t x = 0; x < nx; ++x)
    for (std::size_t y = 0; y < ny; ++y)
      if (w[x][y] > 0.0 && r[x] > 0.0) {
        double i_bits = std::log2(w[x][y] / q[y]);
        v2 += r[x] * w[x][y] * (i_bits - c_bits) * (i_bits - c_bits);
      }
  return {c_bits, r, q, v2, it + 1};
}

namespace {

// One parametric Blahut-Arimoto solve at slope s (nats per distortion unit);
// returns (R_nats, D, q).
struct RdPoint {
  double rate_nats;
  double distortion;
  std::vector<double> q;
  int iterations;
};

RdPoint rd_at_slope(const std::vector<double>& p, const Matrix& dmat, double s, double tol,
                    int max_iterations) {
  const std::size_t ns = p.size(), nz = dmat[0].size();
  std::vector<double> q(nz, 1.0 / double(nz)), qn(nz), c(ns);
  int it = 0;
  for (; it < max_iterations; ++it) {
    for (std::size_t x = 0; x < ns; ++x) {
      double cx = 0.0;
      for (std::size_t z = 0; z < nz; ++z) cx += q[z] * std::exp(s * dmat[x][z]);
      c[x] = cx;
    }
    std::fill(qn.begin(), qn.end(), 0.0);
    for (std::size_t z = 0; z < nz; ++z) {
      double acc = 0.0;
      for (std::size_t x = 0; x < ns; ++x) acc += p[x] * std::exp(s * dmat[x][z]) / c[x];
      qn[z] = q[z] * acc;
    }
    double delta = 0.0;
    for (std::size_t z = 0; z < nz; ++z) {
      delta = std::max(delta, std::fabs(qn[z] - q[z]));
      q[z] = qn[z];
    }
    if (delta < tol * 1e-2) break;
  }
  double dist = 0.0, rate = 0.0;
  for (std::size_t x = 0; x < ns; ++x) {
    double cx = 0.0;
    for (std::size_t z = 0; z < nz; ++z) cx += q[z] * std::exp(s * dmat[x][z]);
    for (std::size_t z = 0; z < nz; ++z)
      dist += p[x] * q[z] * std::exp(s * dmat[x][z]) / cx * dmat[x][z];
    rate -= p[x] * std::log(cx);
  }
  rate += s * dist;
  return {std::max(rate, 0.0), dist, q, it + 1};
}

}  // namespace

RateDistortionSolution blahut_arimoto_rate_distortion(const std::vector<double>& pmf,
                                                      const Matrix& dmat, double d, double tol,
                                                      int max_iterations) {
  check_pmf(pmf);
  SourceModel probe = SourceModel::generic(pmf, dmat);
  const double dmin = probe.d_min(), dmax = probe.d_max();
  if (d >= dmax) {
    // zero rate; reproduction collapses to the best constant letter
    std::size_t best = 0;
    double bestv = kInf;
    for (std::size_t z = 0; z < dmat[0].size(); ++z) {
      double s = 0.0;
      for (std::size_t x = 0; x < pmf.size(); ++x) s += pmf[x] * dmat[x][z];
      if (s < bestv) {
        bestv = s;
        best = z;
      }
    }
    std::vector<double> q(dmat[0].size(), 0.0);
    q[best] = 1.0;
    return {0.0, 0.0, q, 0};
  }
  if (d <= dmin) throw std::domain_error("rate_distortion: d <= d_min");
  // D(s) is increasing in s on (-inf, 0); bisect the slope.
  double slo = -1.0;
  while (rd_at_slope(pmf, dmat, slo, tol, max_iterations).distortion > d) {
    slo *= 2.0;
    if (slo < -1e8) throw numeric_error("rate_distortion: slope bracket failed", d);
  }
  double shi = -1e-12;
  RdPoint pt{};
  int total_it = 0;
  for (int i = 0; i < 120; ++i) {
    double mid = 0.5 * (slo + shi);
    pt = rd_at_slope(pmf, dmat, mid, tol, max_iterations);
    total_it += pt.iterations;
    (pt.distortion < d ? slo : shi) = mid;
  }
  double s = 0.5 * (slo + shi);
  pt = rd_at_slope(pmf, dmat, s, tol, max_iterations);
  return {pt.rate_nats / kLn2, s, pt.q, total_it + pt.iterations};
}

// ---- descriptors ----

namespace {

double generic_lambda_star_nats(const std::vector<double>& pmf, const Matrix& dist, double d) {
  const double h = 1e-6;
  auto rate_nats = [&](double dd) {
    return blahut_arimoto_rate_distortion(pmf, dist, dd).rate_bits * kLn2;
  };
  return -(rate_nats(d + h) - rate_nats(d - h)) / (2.0 * h);
}

struct SourceSide {
  std::function<double(double)> rate, vdisp, lambda, drate, drate_deriv;
  double dmin, dmax, entropy;
};

SourceSide source_side(const SourceModel& s) {
  SourceSide out;
  out.dmin = s.d_min();
  out.dmax = s.d_max();
  switch (s.kind) {
    case SourceKind::Bms: {
      double p = s.bias;
      out.entropy = binary_entropy(p);
      out.rate = [p](double d) {
        if (d < 0.0) throw std::domain_error("rate: d < 0");
        return d >= p ? 0.0 : binary_entropy(p) - binary_entropy(d);
      };
      double lr = p > 0.0 && p < 0.5 ? std::log2((1.0 - p) / p) : 0.0;
      double v = p * (1.0 - p) * lr * lr;
      out.vdisp = [v](double) { return v; };
      out.lambda = [p](double d) {
        if (d <= 0.0 || d >= p) return d <= 0.0 ? kInf : 0.0;
        return std::log((1.0 - d) / d);
      };
      out.drate = [p](double r) {
        double h = binary_entropy(p) - r;
        if (h <= 0.0) return 0.0;
        return inv_binary_entropy(h);
      };
      out.drate_deriv = [p](double r) {
        double dd = inv_binary_entropy(std::max(binary_entropy(p) - r, 1e-300));
        return -1.0 / std::log2((1.0 - dd) / dd);
      };
      break;
    }
    case SourceKind::Gms: {
      double s2 = s.variance;
      out.entropy = kInf;
      out.rate = [s2](double d) {
        if (d <= 0.0) throw std::domain_error("rate: Gms needs d > 0");
        return d >= s2 ? 0.0 : 0.5 * std::log2(s2 / d);
      };
      double v = 0.5 / (kLn2 * kLn2);  // (1/2) log2^2(e)
      out.vdisp = [v](double) { return v; };
      out.lambda = [s2](double d) { return d >= s2 ? 0.0 : 0.5 / d; };
      out.drate = [s2](double r) { return s2 * std::pow(2.0, -2.0 * r); };
      out.drate_deriv = [s2](double r) { return -2.0 * kLn2 * s2 * std::pow(2.0, -2.0 * r); };
      break;
    }
    case SourceKind::ErasureDms:
    case SourceKind::LogLossDms: {
      double h = s.entropy_bits();
      out.entropy = h;
      out.rate = [h](double d) { return std::max(h - d, 0.0); };
      double vi = 0.0;  // Var[i_S(S)] in bits^2 (0 for the equiprobable erasure source)
      if (s.kind == SourceKind::LogLossDms) {
        double m1 = 0.0, m2 = 0.0;
        for (double p : s.pmf)
          if (p > 0.0) {
            double i = -std::log2(p);
            m1 += p * i;
            m2 += p * i * i;
          }
        vi = m2 - m1 * m1;
      }
      out.vdisp = [vi](double) { return vi; };
      out.lambda = [h](double d) { return d >= h ? 0.0 : kLn2; };  // -dR/dd with R,d in bits
      out.drate = [h](double r) { return std::max(h - r, 0.0); };
      out.drate_deriv = [](double) { return -1.0; };
      break;
    }
    case SourceKind::GenericFinite: {
      SourceModel copy = s;
      out.entropy = s.entropy_bits();
      auto rate = [copy](double d) {
        if (d >= copy.d_max()) return 0.0;
        return blahut_arimoto_rate_distortion(copy.pmf, copy.distortion, d).rate_bits;
      };
      out.rate = rate;
      out.lambda = [copy](double d) {
        return generic_lambda_star_nats(copy.pmf, copy.distortion, d);
      };
      out.vdisp = [copy](double d) {
        // Var[j_S(S,d)] by exact summation
        auto sol = blahut_arimoto_rate_distortion(copy.pmf, copy.distortion, d);
        double lam = generic_lambda_star_nats(copy.pmf, copy.distortion, d);
        double m1 = 0.0, m2 = 0.0;
        for (std::size_t x = 0; x < copy.pmf.size(); ++x) {
          double e = 0.0;
          for (std::size_t z = 0; z < sol.z_marginal.size(); ++z)
            e += sol.z_marginal[z] * std::exp(lam * (d - copy.distortion[x][z]));
          double j = -std::log2(e);
          m1 += copy.pmf[x] * j;
          m2 += copy.pmf[x] * j * j;
        }
        return std::max(m2 - m1 * m1, 0.0);
      };
      auto drate = [copy, rate](double r) {
        if (r <= 0.0) return copy.d_max();
        double lo = copy.d_min(), hi = copy.d_max();
        for (int i = 0; i < 100; ++i) {
          double mid = 0.5 * (lo + hi);
          (rate(mid) > r ? lo : hi) = mid;
        }
        return 0.5 * (lo + hi);
      };
      out.drate = drate;
      out.drate_deriv = [drate](double r) {
        double h = 1e-6;
        return (drate(r + h) - drate(r - h)) / (2.0 * h);
      };
      break;
    }
  }
  return out;
}

void channel_side(const ChannelModel& c, double& cap, double& disp) {
  switch (c.kind) {
    case ChannelKind::Bsc: {
      double d = c.crossover;
      cap = 1.0 - binary_entropy(d);
      double lr = d > 0.0 && d < 0.5 ? std::log2((1.0 - d) / d) : 0.0;
      disp = d * (1.0 - d) * lr * lr;
      break;
    }
    case ChannelKind::Awgn: {
      double P = c.snr;
      cap = 0.5 * std::log2(1.0 + P);
      disp = 0.5 * (1.0 - 1.0 / ((1.0 + P) * (1.0 + P))) / (kLn2 * kLn2);
      break;
    }
    case ChannelKind::Dec: {
      double del = c.crossover;
      double lm = std::log2(double(c.alphabet_size));
      cap = (1.0 - del) * lm;
      disp = del * (1.0 - del) * lm * lm;
      break;
    }
    case ChannelKind::GenericFinite: {
      auto sol = blahut_arimoto_capacity(c.transition);
      cap = sol.capacity_bits;
      disp = sol.dispersion_bits2;
      break;
    }
  }
}

}  // namespace

Descriptors make_descriptors(const SourceModel& source, const ChannelModel& channel) {
  Descriptors d;
  SourceSide ss = source_side(source);
  channel_side(channel, d.capacity, d.channel_dispersion);
  d.rate = ss.rate;
  d.source_dispersion = ss.vdisp;
  d.lambda_star = ss.lambda;
  d.distortion_rate = ss.drate;
  d.distortion_rate_deriv = ss.drate_deriv;
  d.d_min = ss.dmin;
  d.d_max = ss.dmax;
  d.source_entropy = ss.entropy;
  return d;
}

// ---- tilted information ----

double tilted_information(const SourceModel& source, double d, const BlockSummary& block) {
  if (d < 0.0) throw std::domain_error("tilted_information: d < 0");
  switch (source.kind) {
    case SourceKind::Bms: {
      double p = source.bias;
      if (d >= p) return 0.0;
      double lr = p > 0.0 ? std::log2((1.0 - p) / p) : 0.0;
      return double(block.k) * binary_entropy(p) + (block.stat - double(block.k) * p) * lr -
             double(block.k) * binary_entropy(d);
    }
    case SourceKind::Gms: {
      if (d <= 0.0) throw std::domain_error("tilted_information: Gms needs d > 0");
      if (d >= source.variance) return 0.0;
      double k = double(block.k);
      return 0.5 * k * std::log2(source.variance / d) +
             (block.stat - k) * 0.5 / kLn2;
    }
    default:
      throw std::domain_error("tilted_information: block form only for Bms/Gms");
  }
}

double tilted_information_symbol(const SourceModel& source, double d, int symbol) {
  if (d < 0.0) throw std::domain_error("tilted_information_symbol: d < 0");
  switch (source.kind) {
    case SourceKind::Bms: {
      BlockSummary b{1, double(symbol)};
      return tilted_information(source, d, b);
    }
    case SourceKind::ErasureDms:
      return std::log2(double(source.alphabet_size)) - d;
    case SourceKind::LogLossDms: {
      if (symbol < 0 || symbol >= int(source.pmf.size()))
        throw std::domain_error("tilted_information_symbol: symbol out of range");
      return -std::log2(source.pmf[symbol]) - d;
    }
    case SourceKind::GenericFinite: {
      if (symbol < 0 || symbol >= int(source.pmf.size()))
        throw std::domain_error("tilted_information_symbol: symbol out of range");
      if (d == 0.0) return -std::log2(source.pmf[symbol]);
      if (d >= source.d_max()) return 0.0;
      auto sol = blahut_arimoto_rate_distortion(source.pmf, source.distortion, d);
      double lam = generic_lambda_star_nats(source.pmf, source.distortion, d);
      double e = 0.0;
      for (std::size_t z = 0; z < sol.z_marginal.size(); ++z)
        e += sol.z_marginal[z] * std::exp(lam * (d - source.distortion[symbol][z]));
      return -std::log2(e);
    }
    default:
      throw std::domain_error("tilted_information_symbol: unsupported source kind");
  }
}

double csiszar_check(const SourceModel& source, double d) {
  switch (source.kind) {
    case SourceKind::Bms: {
      double p = source.bias;
      if (!(d >= 0.0 && d < p)) throw std::domain_error("csiszar_check: need 0 <= d < p");
      double lam = d > 0.0 ? std::log((1.0 - d) / d) : kInf;
      double best = 0.0;
      for (int z = 0; z <= 1; ++z) {
        double acc = 0.0;
        for (int s = 0; s <= 1; ++s) {
          double ps = s == 1 ? p : 1.0 - p;
          double j_nats = tilted_information_symbol(source, d, s) * kLn2;
          double dist = s == z ? 0.0 : 1.0;
          double expo = d > 0.0 ? lam * (d - dist) : (dist > 0.0 ? -kInf : 0.0);
          acc += ps * std::exp(expo + j_nats);
        }
        best = std::max(best, acc);
      }
      return best;
    }
    case SourceKind::GenericFinite: {
      if (!(d > source.d_min() && d < source.d_max()))
        throw std::domain_error("csiszar_check: d outside (d_min, d_max)");
      auto sol = blahut_arimoto_rate_distortion(source.pmf, source.distortion, d);
      double lam = generic_lambda_star_nats(source.pmf, source.distortion, d);
      std::vector<double> j_nats(source.pmf.size());
      for (std::size_t s = 0; s < source.pmf.size(); ++s) {
        double e = 0.0;
        for (std::size_t z = 0; z < sol.z_marginal.size(); ++z)
          e += sol.z_marginal[z] * std::exp(lam * (d - source.distortion[s][z]));
        j_nats[s] = -std::log(e);
      }
      double best = 0.0;
      for (std::size_t z = 0; z < source.distortion[0].size(); ++z) {
        double acc = 0.0;
        for (std::size_t s = 0; s < source.pmf.size(); ++s)
          acc += source.pmf[s] * std::exp(lam * (d - source.distortion[s][z]) + j_nats[s]);
        best = std::max(best, acc);
      }
      return best;
    }
    default:
      throw std::domain_error("csiszar_check: finite-alphabet sources only");
  }
}

std::pair<SourceModel, ChannelModel> load_generic_models(const std::string& json_text) {
  nlohmann::json doc = nlohmann::json::parse(json_text);
  if (!doc.contains("source_pmf") || !doc.contains("distortion") || !doc.contains("channel"))
    throw std::domain_error("generic model JSON needs source_pmf, distortion, channel");
  std::vector<double> pmf = doc["source_pmf"].get<std::vector<double>>();
  Matrix dist = doc["distortion"].get<Matrix>();
  Matrix chan = doc["channel"].get<Matrix>();
  return {SourceModel::generic(std::move(pmf), std::move(dist)),
          ChannelModel::generic(std::move(chan))};
}

}  // namespace jscc
