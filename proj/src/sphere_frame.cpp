#include "fracmap/sphere_frame.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>

#include "fracmap/error.hpp"
#include "fracmap/random.hpp"

namespace fracmap {

Frame::Frame(int N) : N_(N) {
  if (N < 2) throw InvalidArgument("frame dimension must be >= 2");
}

int Frame::entry(std::size_t m, int i, int j) const {
  if (i == j) return 0;
  const int a = std::min(i, j), b = std::max(i, j);
  const std::size_t offset = static_cast<std::size_t>(a * N_ - a * (a + 1) / 2 + (b - a - 1));
  const int value = upper_[m * pairs() + offset];
  return i < j ? value : -value;
}

void Frame::add(const std::vector<int>& upper) {
  if (upper.size() != pairs()) throw InvalidArgument("frame member needs N(N-1)/2 upper entries");
  complete_ = false;
  for (int e : upper) {
    if (e < -1 || e > 1) throw InvalidArgument("frame entries must lie in {-1, 0, 1}");
    upper_.push_back(static_cast<signed char>(e));
  }
}

namespace {

// x_e = q_i p_j - q_j p_i over the upper pairs, so <p_w, q> = sum_e w_e x_e.
std::vector<double> pair_terms(int N, const double* p, const double* q) {
  std::vector<double> x;
  x.reserve(N * (N - 1) / 2);
  for (int i = 0; i < N; ++i)
    for (int j = i + 1; j < N; ++j) x.push_back(q[i] * p[j] - q[j] * p[i]);
  return x;
}

}  // namespace

double Frame::pairing(std::size_t m, const double* p, const double* q) const {
  const auto x = pair_terms(N_, p, q);
  double acc = 0.0;
  for (std::size_t e = 0; e < x.size(); ++e) acc += upper_[m * pairs() + e] * x[e];
  return acc;
}

namespace {

// Sum of |sum_e w_e x_e| over all sign patterns w in {-1, 0, 1}^P.
double complete_sum(const std::vector<double>& x, std::size_t e, double acc) {
  if (e == x.size()) return std::abs(acc);
  return complete_sum(x, e + 1, acc - x[e]) + complete_sum(x, e + 1, acc) + complete_sum(x, e + 1, acc + x[e]);
}

}  // namespace

double Frame::frame_sum(const double* p, const double* q) const {
  const auto x = pair_terms(N_, p, q);
  if (complete_) return complete_sum(x, 0, 0.0);
  const std::size_t P = pairs();
  double total = 0.0;
  for (std::size_t m = 0; m < size(); ++m) {
    double acc = 0.0;
    for (std::size_t e = 0; e < P; ++e) acc += upper_[m * P + e] * x[e];
    total += std::abs(acc);
  }
  return total;
}

double Frame::frame_max(const double* p, const double* q) const {
  if (complete_) {
    double best = 0.0;
    for (double x : pair_terms(N_, p, q)) best += std::abs(x);
    return best;
  }
  double best = 0.0;
  for (std::size_t m = 0; m < size(); ++m) best = std::max(best, std::abs(pairing(m, p, q)));
  return best;
}

Frame enumerate_frame(int N) {
  if (N < 2 || N > 5) throw InvalidArgument("enumerate_frame needs 2 <= N <= 5");
  Frame frame(N);
  const std::size_t P = frame.pairs();
  std::vector<int> digits(P, -1);
  std::size_t count = 1;
  for (std::size_t e = 0; e < P; ++e) count *= 3;
  for (std::size_t m = 0; m < count; ++m) {
    std::size_t rest = m;
    for (std::size_t e = P; e-- > 0;) {
      digits[e] = static_cast<int>(rest % 3) - 1;
      rest /= 3;
    }
    frame.add(digits);
  }
  frame.complete_ = true;
  return frame;
}

Frame elementary_frame(int N) {
  Frame frame(N);
  const std::size_t P = frame.pairs();
  for (std::size_t e = 0; e < P; ++e) {
    std::vector<int> digits(P, 0);
    digits[e] = 1;
    frame.add(digits);
  }
  return frame;
}

double c_proof(int N) {
  if (N < 2) throw InvalidArgument("c_proof needs N >= 2");
  const double c0 = 1.0 / (2.0 * std::sqrt(N - 1.0));
  return 0.9 * std::pow(c0, 4) / N;
}

double FrameConstants::lower() const { return std::min(1.0, c_perp_mesh.value_or(c_perp_emp)); }

double FrameConstants::upper() const {
  const double G = std::max(G_perp_emp, G_perp_mesh.value_or(0.0));
  return std::sqrt(1.0 + G * G);
}

bool FrameConstants::meets_proof_floor() const { return c_perp_mesh.value_or(c_perp_emp) >= c_proof; }

namespace {

std::vector<double> random_unit(SplitMix64& rng, int N) {
  std::normal_distribution<double> normal;
  for (;;) {
    std::vector<double> v(N);
    double sq = 0.0;
    for (double& c : v) {
      c = normal(rng);
      sq += c * c;
    }
    if (sq > 1e-20) {
      for (double& c : v) c /= std::sqrt(sq);
      return v;
    }
  }
}

double dotn(const std::vector<double>& a, const std::vector<double>& b) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
  return acc;
}

// Unit vector of p^perp obtained from q; false if q is (nearly) parallel to p.
bool orthogonal_part(const std::vector<double>& p, std::vector<double> q, std::vector<double>& e) {
  const double d = dotn(p, q);
  for (std::size_t i = 0; i < q.size(); ++i) q[i] -= d * p[i];
  const double n = std::sqrt(dotn(q, q));
  if (n < 1e-8) return false;
  for (double& c : q) c /= n;
  e = std::move(q);
  return true;
}

void check_frame_args(int N, std::size_t samples) {
  if (N < 2 || N > 5) throw InvalidArgument("frame constants need 2 <= N <= 5");
  if (samples < 10000) throw InvalidArgument("frame constants need at least 10^4 samples");
}

std::string witness(const std::vector<double>& p, const std::vector<double>& q) {
  std::ostringstream out;
  out.precision(17);
  out << "{\"p\":[";
  for (std::size_t i = 0; i < p.size(); ++i) out << (i ? "," : "") << p[i];
  out << "],\"q\":[";
  for (std::size_t i = 0; i < q.size(); ++i) out << (i ? "," : "") << q[i];
  out << "]}";
  return out.str();
}

// min / max of g(p, e) = sum_w |<p_w, e>| over a mesh of p and e in p^perp.
std::pair<double, double> perp_mesh(const Frame& frame) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  auto visit = [&](const std::vector<double>& p, const std::vector<double>& e) {
    const double g = frame.frame_sum(p.data(), e.data());
    lo = std::min(lo, g);
    hi = std::max(hi, g);
  };
  const double pi = std::numbers::pi;
  if (frame.dim() == 2) {
    for (int i = 0; i < 7200; ++i) {
      const double t = 2.0 * pi * i / 7200;
      visit({std::cos(t), std::sin(t)}, {-std::sin(t), std::cos(t)});
    }
  } else {
    // Fibonacci points for p, a circle of directions in p^perp for e.
    const int np = 1500, ne = 240;
    const double golden = pi * (3.0 - std::sqrt(5.0));
    for (int i = 0; i < np; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / np;
      const double rho = std::sqrt(1.0 - z * z);
      const std::vector<double> p{rho * std::cos(golden * i), rho * std::sin(golden * i), z};
      std::vector<double> e1, e2;
      orthogonal_part(p, std::abs(p[0]) < 0.9 ? std::vector<double>{1, 0, 0} : std::vector<double>{0, 1, 0}, e1);
      e2 = {p[1] * e1[2] - p[2] * e1[1], p[2] * e1[0] - p[0] * e1[2], p[0] * e1[1] - p[1] * e1[0]};
      for (int j = 0; j < ne; ++j) {
        const double t = 2.0 * pi * j / ne;
        visit(p, {std::cos(t) * e1[0] + std::sin(t) * e2[0], std::cos(t) * e1[1] + std::sin(t) * e2[1],
                  std::cos(t) * e1[2] + std::sin(t) * e2[2]});
      }
    }
  }
  return {lo, hi};
}

}  // namespace

FrameConstants frame_bound_constants(int N, std::size_t samples, std::uint64_t seed) {
  check_frame_args(N, samples);
  const Frame frame = enumerate_frame(N);
  FrameConstants out;
  out.N = N;
  out.omega_count = frame.size();
  out.samples = samples;
  out.c_proof = c_proof(N);
  out.c_emp = out.c_perp_emp = std::numeric_limits<double>::infinity();

  for (std::size_t i = 0; i < samples; ++i) {
    SplitMix64 rng = SplitMix64::stream(seed, i);
    const auto p = random_unit(rng, N);
    const auto q = random_unit(rng, N);
    const double total = frame.frame_sum(p.data(), q.data()) + std::abs(dotn(p, q));
    if (total == 0.0) throw Falsification("frame lower bound vanishes", witness(p, q));
    out.c_emp = std::min(out.c_emp, total);
    out.C_emp = std::max(out.C_emp, total);
    std::vector<double> e;
    if (orthogonal_part(p, q, e)) {
      const double g = frame.frame_sum(p.data(), e.data());
      if (g == 0.0) throw Falsification("frame bound vanishes on p^perp", witness(p, e));
      out.c_perp_emp = std::min(out.c_perp_emp, g);
      out.G_perp_emp = std::max(out.G_perp_emp, g);
    }
  }
  if (N <= 3) {
    const auto [lo, hi] = perp_mesh(frame);
    out.c_perp_mesh = lo;
    out.G_perp_mesh = hi;
  }
  return out;
}

ThetaReport theta_dichotomy(int N, std::size_t samples, std::uint64_t seed) {
  check_frame_args(N, samples);
  const Frame frame = enumerate_frame(N);
  ThetaReport out;
  out.N = N;
  out.paper_theta = 1.0 / (static_cast<double>(frame.size()) + 1.0);
  out.theta_emp = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < samples; ++i) {
    SplitMix64 rng = SplitMix64::stream(seed, i);
    const auto p = random_unit(rng, N);
    const auto q = random_unit(rng, N);
    out.theta_emp = std::min(out.theta_emp, std::max(frame.frame_max(p.data(), q.data()), std::abs(dotn(p, q))));
  }
  return out;
}

SplitReport pointwise_split(const Field& u, const Field& g, const Frame& frame, double lower, double upper) {
  const int N = frame.dim();
  if (!(u.grid() == g.grid()) || u.components() != N || g.components() != N)
    throw InvalidArgument("pointwise split needs u and g with N components on one grid");

  std::size_t worst_site = 0;
  double worst_dev = 0.0;
  for (std::size_t s = 0; s < u.sites(); ++s) {
    double sq = 0.0;
    for (int c = 0; c < N; ++c) sq += u(s, c) * u(s, c);
    const double dev = std::abs(std::sqrt(sq) - 1.0);
    if (dev > worst_dev) {
      worst_dev = dev;
      worst_site = s;
    }
  }
  if (worst_dev > 1e-9)
    throw InvalidArgument("u is not sphere-valued; worst site " + std::to_string(worst_site) +
                          " deviates by " + std::to_string(worst_dev));

  SplitReport rep{Field(u.grid(), 1), Field(u.grid(), 1), std::numeric_limits<double>::infinity(), 0.0, 0};
  std::vector<double> us(N), gs(N);
  for (std::size_t s = 0; s < u.sites(); ++s) {
    double gn = 0.0, normal = 0.0;
    for (int c = 0; c < N; ++c) {
      us[c] = u(s, c);
      gs[c] = g(s, c);
      gn += gs[c] * gs[c];
      normal += us[c] * gs[c];
    }
    gn = std::sqrt(gn);
    rep.normal(s) = normal;
    rep.tangential(s) = frame.frame_sum(us.data(), gs.data());
    if (gn == 0.0) continue;
    const double ratio = (std::abs(normal) + rep.tangential(s)) / gn;
    ++rep.checked_sites;
    rep.worst_lower = std::min(rep.worst_lower, ratio);
    rep.worst_upper = std::max(rep.worst_upper, ratio);
    if (ratio < lower * (1.0 - 1e-9) || ratio > upper * (1.0 + 1e-9)) {
      std::ostringstream w;
      w.precision(17);
      w << "{\"site\":" << s << ",\"ratio\":" << ratio << ",\"lower\":" << lower << ",\"upper\":" << upper << "}";
      throw Falsification("pointwise frame split violates its bounds", w.str());
    }
  }
  if (rep.checked_sites == 0) rep.worst_lower = 0.0;
  return rep;
}

}  // namespace fracmap
