#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "arisopt/errors.hpp"
#include "arisopt/rng.hpp"

namespace arisopt {

using Eigen::Index;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;

struct SystemDims {
  int K = 1;  // users
  int N = 1;  // A-RIS elements
  int M = 1;  // jammer antennas

  void validate() const {
    require(K >= 1 && N >= 1 && M >= 1, ErrorCode::InvalidArgument,
            "K, N and M must all be >= 1");
  }
};

/// Expected channel magnitudes per link. `h` and `g` are per user.
struct FixedGains {
  std::vector<double> h;
  double f = 0.0;
  std::vector<double> g;
  double h_j = 0.0;
  double G_j = 0.0;
};

struct Point2 {
  double x = 0.0;
  double y = 0.0;
};

inline double distance(const Point2& a, const Point2& b) { return std::hypot(a.x - b.x, a.y - b.y); }

/// Two-dimensional deployment with the path-loss model P_r/P_t = K0/d^alpha.
/// `alpha_direct` applies to UE->BS links, `alpha_other` to every other link.
struct Geometry {
  double K0 = 0.0;
  double alpha_direct = 3.0;
  double alpha_other = 2.0;
  Point2 bs;
  Point2 aris;
  Point2 jammer;
  std::vector<Point2> users;
};

enum class JammerMode { Intelligent, WhiteNoise };

inline std::string to_string(JammerMode mode) {
  return mode == JammerMode::Intelligent ? "intelligent" : "white";
}

struct ScenarioConfig {
  SystemDims dims;
  std::variant<FixedGains, Geometry> gains;
  double jammer_power = 10.0;  // W
  double noise_power = 1.0;    // W
  std::vector<double> targets;  // linear SINR
  double beta_max = 1.0;
  std::uint64_t seed = 0;
  JammerMode jammer_mode = JammerMode::Intelligent;

  void validate() const {
    dims.validate();
    require(std::ssize(targets) == dims.K, ErrorCode::DimensionMismatch,
            "expected " + std::to_string(dims.K) + " SINR targets, got " + std::to_string(targets.size()));
    for (double t : targets) require(t > 0.0 && std::isfinite(t), ErrorCode::InvalidArgument, "SINR targets must be > 0");
    require(jammer_power >= 0.0 && std::isfinite(jammer_power), ErrorCode::InvalidArgument, "jammer power must be >= 0");
    require(noise_power > 0.0 && std::isfinite(noise_power), ErrorCode::InvalidArgument, "noise power must be > 0");
    require(beta_max > 0.0 && beta_max <= 1.0, ErrorCode::InvalidArgument, "beta_max must lie in (0, 1]");
    if (const auto* fg = std::get_if<FixedGains>(&gains)) {
      require(std::ssize(fg->h) == dims.K && std::ssize(fg->g) == dims.K, ErrorCode::DimensionMismatch,
              "fixed gains need one h and one g entry per user");
      auto ok = [](double v) { return v >= 0.0 && std::isfinite(v); };
      for (double v : fg->h) require(ok(v), ErrorCode::InvalidArgument, "gains must be finite and >= 0");
      for (double v : fg->g) require(ok(v), ErrorCode::InvalidArgument, "gains must be finite and >= 0");
      require(ok(fg->f) && ok(fg->h_j) && ok(fg->G_j), ErrorCode::InvalidArgument, "gains must be finite and >= 0");
    } else {
      const auto& geo = std::get<Geometry>(gains);
      require(std::ssize(geo.users) == dims.K, ErrorCode::DimensionMismatch, "geometry needs one position per user");
      require(geo.K0 >= 0.0 && std::isfinite(geo.K0), ErrorCode::InvalidArgument, "K0 must be finite and >= 0");
      auto finite = [](const Point2& p) { return std::isfinite(p.x) && std::isfinite(p.y); };
      require(finite(geo.bs) && finite(geo.aris) && finite(geo.jammer), ErrorCode::InvalidArgument,
              "node positions must be finite");
      for (const auto& u : geo.users) require(finite(u), ErrorCode::InvalidArgument, "node positions must be finite");
    }
  }
};

/// One draw of every channel in the uplink model.
///   h   : K   user -> BS
///   f   : N   A-RIS -> BS
///   g   : NxK user -> A-RIS (column per user)
///   h_j : M   jammer -> BS
///   G_j : NxM jammer -> A-RIS
struct ScenarioRealization {
  VectorXcd h;
  VectorXcd f;
  MatrixXcd g;
  VectorXcd h_j;
  MatrixXcd G_j;
  double jammer_power = 0.0;
  double noise_power = 1.0;
  VectorXd targets;
  double beta_max = 1.0;
  JammerMode jammer_mode = JammerMode::Intelligent;

  SystemDims dims() const {
    return {static_cast<int>(h.size()), static_cast<int>(f.size()), static_cast<int>(h_j.size())};
  }

  /// Jammer power scaling seen at the BS: P_j for the matched-filter jammer,
  /// P_j/M for a spatially white one.
  double effective_jammer_power() const {
    return jammer_mode == JammerMode::Intelligent ? jammer_power : jammer_power / static_cast<double>(h_j.size());
  }

  void validate() const {
    const Index K = h.size(), N = f.size(), M = h_j.size();
    require(K >= 1 && N >= 1 && M >= 1, ErrorCode::DimensionMismatch, "empty channel dimensions");
    require(g.rows() == N && g.cols() == K, ErrorCode::DimensionMismatch, "g must be N x K");
    require(G_j.rows() == N && G_j.cols() == M, ErrorCode::DimensionMismatch, "G_j must be N x M");
    require(targets.size() == K, ErrorCode::DimensionMismatch, "targets must have K entries");
    require(h.allFinite() && f.allFinite() && g.allFinite() && h_j.allFinite() && G_j.allFinite(),
            ErrorCode::InvalidArgument, "channel entries must be finite");
    require(noise_power > 0.0, ErrorCode::InvalidArgument, "noise power must be > 0");
  }
};

namespace detail {

// E|x| of CN(0,1) is sqrt(pi)/2.
inline constexpr double kRayleighMeanMagnitude = 0.88622692545275801365;

inline std::complex<double> faded(RandomSource& rng, double expected_magnitude) {
  return rng.complex_normal() * (expected_magnitude / kRayleighMeanMagnitude);
}

inline ScenarioRealization draw_with_scales(const ScenarioConfig& config, RandomSource& rng,
                                            const std::vector<double>& h_scale, double f_scale,
                                            const std::vector<double>& g_scale, double hj_scale, double Gj_scale) {
  const auto [K, N, M] = config.dims;
  ScenarioRealization s;
  s.h.resize(K);
  s.f.resize(N);
  s.g.resize(N, K);
  s.h_j.resize(M);
  s.G_j.resize(N, M);
  for (int k = 0; k < K; ++k) s.h(k) = faded(rng, h_scale[k]);
  for (int n = 0; n < N; ++n) s.f(n) = faded(rng, f_scale);
  for (int k = 0; k < K; ++k)
    for (int n = 0; n < N; ++n) s.g(n, k) = faded(rng, g_scale[k]);
  for (int m = 0; m < M; ++m) s.h_j(m) = faded(rng, hj_scale);
  for (int m = 0; m < M; ++m)
    for (int n = 0; n < N; ++n) s.G_j(n, m) = faded(rng, Gj_scale);
  s.jammer_power = config.jammer_power;
  s.noise_power = config.noise_power;
  s.targets = Eigen::Map<const VectorXd>(config.targets.data(), K);
  s.beta_max = config.beta_max;
  s.jammer_mode = config.jammer_mode;
  return s;
}

}  // namespace detail

/// Rayleigh-faded channels whose expected magnitudes equal the configured gains.
inline ScenarioRealization draw_fixed_gain(const ScenarioConfig& config, RandomSource& rng) {
  config.validate();
  const auto* gains = std::get_if<FixedGains>(&config.gains);
  require(gains != nullptr, ErrorCode::InvalidArgument, "draw_fixed_gain needs a FixedGains config");
  return detail::draw_with_scales(config, rng, gains->h, gains->f, gains->g, gains->h_j, gains->G_j);
}

/// Amplitude of the deterministic path loss sqrt(K0 / d^alpha).
inline double path_amplitude(double K0, double d, double alpha) {
  require(d > 0.0, ErrorCode::InvalidArgument, "coincident node positions (d = 0)");
  return std::sqrt(K0 / std::pow(d, alpha));
}

inline ScenarioRealization draw_geometric(const ScenarioConfig& config, RandomSource& rng) {
  config.validate();
  const auto* geo = std::get_if<Geometry>(&config.gains);
  require(geo != nullptr, ErrorCode::InvalidArgument, "draw_geometric needs a Geometry config");
  const int K = config.dims.K;
  std::vector<double> h_scale(K), g_scale(K);
  for (int k = 0; k < K; ++k) {
    h_scale[k] = path_amplitude(geo->K0, distance(geo->users[k], geo->bs), geo->alpha_direct);
    g_scale[k] = path_amplitude(geo->K0, distance(geo->users[k], geo->aris), geo->alpha_other);
  }
  const double f_scale = path_amplitude(geo->K0, distance(geo->aris, geo->bs), geo->alpha_other);
  const double hj_scale = path_amplitude(geo->K0, distance(geo->jammer, geo->bs), geo->alpha_other);
  const double Gj_scale = path_amplitude(geo->K0, distance(geo->jammer, geo->aris), geo->alpha_other);
  return detail::draw_with_scales(config, rng, h_scale, f_scale, g_scale, hj_scale, Gj_scale);
}

inline ScenarioRealization draw(const ScenarioConfig& config, RandomSource& rng) {
  return std::holds_alternative<FixedGains>(config.gains) ? draw_fixed_gain(config, rng) : draw_geometric(config, rng);
}

/// Simulation parameters of the fixed-gain experiment family (K <= 3).
inline ScenarioConfig table1_config(int K, int N, int M, std::uint64_t seed = 0) {
  require(K >= 1 && K <= 3, ErrorCode::InvalidArgument, "the fixed-gain table defines at most 3 users");
  const std::vector<double> h_all{5.0, 2.0, 1.0};
  const std::vector<double> g_all{1.0, 1.0, 0.2};
  ScenarioConfig c;
  c.dims = {K, N, M};
  c.gains = FixedGains{{h_all.begin(), h_all.begin() + K}, 2.0, {g_all.begin(), g_all.begin() + K}, 1.0, 0.2};
  c.jammer_power = 10.0;
  c.noise_power = 1.0;
  c.targets.assign(K, 5.0);
  c.beta_max = 1.0;
  c.seed = seed;
  return c;
}

/// Deployment of the moving A-RIS experiment family (K <= 3), A-RIS at (aris_x, 65).
inline ScenarioConfig table2_config(int K, int N, int M, double aris_x, std::uint64_t seed = 0) {
  require(K >= 1 && K <= 3, ErrorCode::InvalidArgument, "the deployment table defines at most 3 users");
  const std::vector<Point2> users{{30.0, -15.0}, {50.0, -30.0}, {80.0, -45.0}};
  Geometry geo;
  geo.K0 = 3e5;
  geo.alpha_direct = 3.0;
  geo.alpha_other = 2.0;
  geo.bs = {0.0, 0.0};
  geo.aris = {aris_x, 65.0};
  geo.jammer = {50.0, -80.0};
  geo.users.assign(users.begin(), users.begin() + K);
  ScenarioConfig c = table1_config(K, N, M, seed);
  c.gains = geo;
  return c;
}

/// Per-user received power terms p_k |h_k + f^T diag(phi) g_k|^2.
inline VectorXd received_signal_power_terms(const ScenarioRealization& s, const VectorXcd& phi, const VectorXd& p) {
  require(phi.size() == s.f.size(), ErrorCode::DimensionMismatch, "phi must have N entries");
  require(p.size() == s.h.size(), ErrorCode::DimensionMismatch, "power vector must have K entries");
  const VectorXcd weighted = s.f.cwiseProduct(phi);
  VectorXd terms(s.h.size());
  for (Index k = 0; k < s.h.size(); ++k) terms(k) = p(k) * std::norm(s.h(k) + weighted.cwiseProduct(s.g.col(k)).sum());
  return terms;
}

}  // namespace arisopt
