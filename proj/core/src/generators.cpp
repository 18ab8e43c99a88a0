#include "slowvary/generators.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

namespace slowvary {

namespace {

constexpr std::pair<Family, const char*> kFamilyNames[] = {
    {Family::stationary, "stationary"},
    {Family::piecewise_linear, "piecewise_linear"},
    {Family::well_separated, "well_separated"},
    {Family::oscillating, "oscillating"},
    {Family::multi_delta_common_periods, "multi_delta_common_periods"},
    {Family::multi_delta_equal_cumulative, "multi_delta_equal_cumulative"},
    {Family::lower_bound_nu_prime, "lower_bound_nu_prime"},
};

// Typed access to a family's parameter object. Rejects unknown keys up front.
class Params {
 public:
  Params(const nlohmann::json& params, Family family, std::set<std::string> allowed)
      : params_(params), family_(to_string(family)) {
    if (!params_.is_object()) fail("params", "must be an object");
    for (const auto& [key, _] : params_.items()) {
      if (!allowed.contains(key)) fail(key, "unknown parameter");
    }
  }

  double number(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) fail(key, "required parameter missing");
    if (!it->is_number()) fail(key, "must be a number");
    return it->get<double>();
  }
  double number(const std::string& key, double fallback) const {
    return params_.contains(key) ? number(key) : fallback;
  }
  Timestep count(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) fail(key, "required parameter missing");
    if (!it->is_number_integer() || it->get<std::int64_t>() < 0) fail(key, "must be a nonnegative integer");
    return it->get<Timestep>();
  }
  Timestep count(const std::string& key, Timestep fallback) const {
    return params_.contains(key) ? count(key) : fallback;
  }
  const nlohmann::json& raw(const std::string& key) const {
    auto it = params_.find(key);
    if (it == params_.end()) fail(key, "required parameter missing");
    return *it;
  }

  [[noreturn]] void fail(const std::string& key, const std::string& what) const {
    throw std::invalid_argument(family_ + ": params." + key + ": " + what);
  }

 private:
  const nlohmann::json& params_;
  std::string family_;
};

// Ramp length whose per-step slope amplitude/len stays within delta.
Timestep ramp_length(double amplitude, double delta, const Params& p) {
  if (amplitude == 0.0) return 1;
  if (!(delta > 0.0)) p.fail("delta", "must be positive for a drifting family");
  return std::max<Timestep>(1, static_cast<Timestep>(std::ceil(amplitude / delta - 1e-9)));
}

std::vector<double> piecewise(const nlohmann::json& knots, Timestep T, const Params& p,
                              const std::string& key) {
  if (!knots.is_array() || knots.empty()) p.fail(key, "must be a non-empty array of [t, mean]");
  std::vector<std::pair<double, double>> pts;
  for (const auto& k : knots) {
    if (!k.is_array() || k.size() != 2 || !k[0].is_number() || !k[1].is_number()) {
      p.fail(key, "each knot must be [t, mean]");
    }
    pts.emplace_back(k[0].get<double>(), k[1].get<double>());
  }
  for (std::size_t i = 1; i < pts.size(); ++i) {
    if (!(pts[i].first > pts[i - 1].first)) p.fail(key, "knot times must be strictly increasing");
  }
  std::vector<double> out(static_cast<std::size_t>(T));
  std::size_t seg = 0;
  for (Timestep t = 1; t <= T; ++t) {
    const double x = static_cast<double>(t);
    double v;
    if (x <= pts.front().first) {
      v = pts.front().second;
    } else if (x >= pts.back().first) {
      v = pts.back().second;
    } else {
      while (pts[seg + 1].first < x) ++seg;
      const auto [x0, y0] = pts[seg];
      const auto [x1, y1] = pts[seg + 1];
      v = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
    }
    out[static_cast<std::size_t>(t - 1)] = v;
  }
  return out;
}

void check_unit_interval(const std::vector<double>& v, const char* what, const Params& p) {
  for (double x : v) {
    if (x < -1e-12 || x > 1.0 + 1e-12) p.fail(what, "generated means leave [0,1]");
  }
}

std::vector<double> clamp_unit(std::vector<double> v) {
  for (double& x : v) x = std::clamp(x, 0.0, 1.0);
  return v;
}

BanditInstance mirrored(double center1, double center2, const std::vector<double>& wave, double delta,
                        RewardModel noise, const Params& p, const char* key1 = "center",
                        const char* key2 = "center") {
  std::vector<double> a1(wave.size()), a2(wave.size());
  for (std::size_t i = 0; i < wave.size(); ++i) {
    a1[i] = center1 + wave[i];
    a2[i] = center2 - wave[i];
  }
  check_unit_interval(a1, key1, p);
  check_unit_interval(a2, key2, p);
  return BanditInstance(RewardProfile(clamp_unit(std::move(a1)), clamp_unit(std::move(a2))), delta,
                        noise);
}

}  // namespace

std::string to_string(Family family) {
  for (const auto& [f, name] : kFamilyNames) {
    if (f == family) return name;
  }
  return "unknown";
}

Family family_from_string(const std::string& name) {
  for (const auto& [f, n] : kFamilyNames) {
    if (name == n) return f;
  }
  throw std::invalid_argument("unknown generator family '" + name + "'");
}

double nu_prime_arm1_mean(Timestep t, Timestep m, double epsilon) {
  const Timestep half = (m + 1) / 2;  // ceil(m/2)
  const double md = static_cast<double>(m);
  if (t <= half) return 0.5 + static_cast<double>(t - 1) / md * epsilon;
  return 0.5 + static_cast<double>(m - t) / md * epsilon;
}

std::vector<double> alternating_wave(Timestep T, Timestep stationary_len, Timestep ramp_len,
                                     double amplitude) {
  if (ramp_len < 1) throw std::invalid_argument("alternating_wave: ramp length must be >= 1");
  std::vector<double> h(static_cast<std::size_t>(std::max<Timestep>(T, 0)));
  const Timestep period = stationary_len + ramp_len;
  const double lo = -amplitude / 2.0;
  for (Timestep k = 0; k < T; ++k) {
    const Timestep cycle = k / period;
    const Timestep phase = k % period;
    const bool rising = cycle % 2 == 0;
    double v;
    if (phase < stationary_len) {
      v = rising ? lo : -lo;
    } else {
      const double frac = static_cast<double>(phase - stationary_len + 1) / static_cast<double>(ramp_len);
      v = rising ? lo + amplitude * frac : -lo - amplitude * frac;
    }
    h[static_cast<std::size_t>(k)] = v;
  }
  return h;
}

BanditInstance generate(const GeneratorSpec& spec, Timestep T) {
  if (T < 1) throw std::invalid_argument("generate: T must be positive");
  const bool lower_bound = spec.family == Family::lower_bound_nu_prime;
  const RewardModel noise =
      spec.noise.value_or(lower_bound ? RewardModel::bernoulli() : RewardModel::gaussian());
  const auto Tz = static_cast<std::size_t>(T);

  switch (spec.family) {
    case Family::stationary: {
      Params p(spec.params, spec.family, {"mu1", "mu2", "delta"});
      const double mu1 = p.number("mu1");
      const double mu2 = p.number("mu2");
      if (mu1 < 0 || mu1 > 1) p.fail("mu1", "must lie in [0,1]");
      if (mu2 < 0 || mu2 > 1) p.fail("mu2", "must lie in [0,1]");
      return BanditInstance(RewardProfile(std::vector<double>(Tz, mu1), std::vector<double>(Tz, mu2)),
                            p.number("delta", 0.0), noise);
    }
    case Family::piecewise_linear: {
      Params p(spec.params, spec.family, {"delta", "knots1", "knots2"});
      const double delta = p.number("delta");
      auto a1 = piecewise(p.raw("knots1"), T, p, "knots1");
      auto a2 = piecewise(p.raw("knots2"), T, p, "knots2");
      check_unit_interval(a1, "knots1", p);
      check_unit_interval(a2, "knots2", p);
      const RewardProfile profile(clamp_unit(std::move(a1)), clamp_unit(std::move(a2)));
      if (!validate_drift(profile, delta).ok) p.fail("knots", "segment slope exceeds delta");
      return BanditInstance(profile, delta, noise);
    }
    case Family::well_separated: {
      Params p(spec.params, spec.family, {"delta", "high", "low", "swing", "stationary_len"});
      const double delta = p.number("delta");
      const double high = p.number("high", 0.75);
      const double low = p.number("low", 0.25);
      const double swing = p.number("swing", 0.1);
      if (!(high - low > swing)) p.fail("swing", "arms would cross: need high - low > swing");
      const Timestep stat = p.count("stationary_len", std::max<Timestep>(1, T / 8));
      const auto wave = alternating_wave(T, stat, ramp_length(swing, delta, p), swing);
      return mirrored(high, low, wave, delta, noise, p, "high", "low");
    }
    case Family::oscillating: {
      Params p(spec.params, spec.family, {"delta", "amplitude", "stationary_len", "center"});
      const double delta = p.number("delta");
      const double amplitude = p.number("amplitude", 0.4);
      if (!(amplitude >= 0)) p.fail("amplitude", "must be nonnegative");
      const Timestep stat = p.count("stationary_len", std::max<Timestep>(1, T / 16));
      const double center = p.number("center", 0.5);
      // Each arm sweeps `amplitude`; the signed gap swings between +amplitude and -amplitude.
      const auto wave = alternating_wave(T, stat, ramp_length(amplitude, delta, p), amplitude);
      return mirrored(center, center, wave, delta, noise, p);
    }
    case Family::multi_delta_common_periods: {
      Params p(spec.params, spec.family, {"delta", "stationary_len", "drift_len", "center"});
      const double delta = p.number("delta");
      const Timestep stat = p.count("stationary_len");
      const Timestep drift = p.count("drift_len");
      if (drift < 1) p.fail("drift_len", "must be >= 1");
      const double center = p.number("center", 0.5);
      const double per_arm = delta * static_cast<double>(drift);
      const auto wave = alternating_wave(T, stat, drift, per_arm);
      return mirrored(center, center, wave, delta, noise, p);
    }
    case Family::multi_delta_equal_cumulative: {
      Params p(spec.params, spec.family, {"delta", "amplitude", "n_drifts", "center"});
      const double delta = p.number("delta");
      const double amplitude = p.number("amplitude", 0.4);
      const Timestep n = p.count("n_drifts", 4);
      if (n < 1) p.fail("n_drifts", "must be >= 1");
      const double center = p.number("center", 0.5);
      const Timestep ramp = ramp_length(amplitude, delta, p);
      const Timestep stat = (T - n * ramp) / (n + 1);
      if (stat < 0) p.fail("delta", "ramps of slope delta do not fit n_drifts times into T");
      const auto wave = alternating_wave(T, stat, ramp, amplitude);
      return mirrored(center, center, wave, delta, noise, p);
    }
    case Family::lower_bound_nu_prime: {
      Params p(spec.params, spec.family, {"m", "epsilon", "delta"});
      const Timestep m = p.count("m");
      if (m < 1) p.fail("m", "must be >= 1");
      const double epsilon = p.number("epsilon", std::sqrt(1.0 / (4.0 * static_cast<double>(m))));
      if (!(epsilon >= 0.0 && epsilon <= 1.0)) p.fail("epsilon", "must lie in [0,1]");
      const double slope = epsilon / static_cast<double>(m);
      const double delta = p.number("delta", slope);
      if (slope > delta + kDriftTolerance) {
        std::ostringstream msg;
        msg << "epsilon/m = " << slope << " exceeds delta = " << delta << " (need delta >= epsilon/m)";
        p.fail("delta", msg.str());
      }
      std::vector<double> a1(Tz);
      for (Timestep t = 1; t <= T; ++t) {
        a1[static_cast<std::size_t>(t - 1)] = nu_prime_arm1_mean((t - 1) % m + 1, m, epsilon);
      }
      return BanditInstance(RewardProfile(std::move(a1), std::vector<double>(Tz, 0.5)), delta, noise);
    }
  }
  throw std::invalid_argument("generate: unhandled family");
}

}  // namespace slowvary
