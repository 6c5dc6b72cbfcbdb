#include "tabml/synth.hpp"

#include <cmath>

#include "tabml/rng.hpp"

namespace tabml {

std::optional<Coupling> coupling_from_name(std::string_view name) {
  if (name == "independent") return Coupling::Independent;
  if (name == "weather_coupled") return Coupling::WeatherCoupled;
  return std::nullopt;
}

std::string coupling_name(Coupling c) {
  return c == Coupling::Independent ? "independent" : "weather_coupled";
}

std::optional<CityParams> city_params(std::string_view name) {
  CityParams p;
  if (name == "generic") {
    // defaults
  } else if (name == "brisbane") {
    p.base_temp = 21.0;
    p.temp_amplitude = 5.5;
    p.dry_base = 0.52;
    p.rain_scale = 6.5;
    p.wind_base = 15.0;
  } else if (name == "adelaide") {
    p.base_temp = 17.5;
    p.temp_amplitude = 7.0;
    p.dry_base = 0.60;
    p.rain_scale = 3.5;
    p.wind_base = 16.0;
  } else if (name == "perth") {
    p.base_temp = 19.0;
    p.temp_amplitude = 6.5;
    p.dry_base = 0.62;
    p.dry_seasonal = 0.45;
    p.rain_scale = 4.5;
    p.wind_base = 17.0;
  } else if (name == "hobart") {
    p.base_temp = 13.0;
    p.temp_amplitude = 5.5;
    p.dry_base = 0.48;
    p.rain_scale = 3.0;
    p.wind_base = 19.0;
    p.wind_seasonal = 8.0;
  } else {
    return std::nullopt;
  }
  p.name = std::string(name);
  return p;
}

namespace {

constexpr double kTwoPi = 6.283185307179586476925287;

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

Dataset generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.missing_rate < 0.0 || cfg.missing_rate >= 1.0)
    throw Error("missing_rate must be in [0, 1)");

  Dataset d;
  d.relation = "synthetic_weather_" + cfg.city.name;
  for (int i = 1; i <= 20; ++i)
    d.attributes.push_back({"F" + std::to_string(i), AttrKind::Numeric, {}});
  d.attributes.push_back(
      {"F21", AttrKind::Nominal, {"Mon", "Tue", "Wed", "Thu", "Fri", "Sat", "Sun"}});

  Rng features(derive_seed(cfg.seed, 0xF347u));
  Rng weekdays(derive_seed(cfg.seed, 0xC1A55u));
  const CityParams& city = cfg.city;
  const bool coupled = cfg.coupling == Coupling::WeatherCoupled;

  d.instances.reserve(cfg.n_rows);
  for (std::size_t r = 0; r < cfg.n_rows; ++r) {
    Row row(21);

    const double year = 2000.0 + static_cast<double>(features.below(10));
    const double month = 1.0 + static_cast<double>(features.below(12));
    const double week =
        clamp(std::round((month - 1.0) * 4.345 + 1.0 + features.normal(0.0, 1.2)), 1.0, 52.0);

    // Southern-hemisphere winterness: 0 in January, 1 in July.
    const double month_winter = (1.0 - std::cos(kTwoPi * (month - 1.0) / 12.0)) / 2.0;
    auto season = [&]() {
      return coupled ? month_winter : (1.0 - std::cos(kTwoPi * features.uniform01())) / 2.0;
    };

    const double w_rain = season();
    double rain = 0.0;
    const double p_dry = clamp(city.dry_base - city.dry_seasonal * (w_rain - 0.5), 0.05, 0.95);
    if (features.uniform01() >= p_dry)
      rain = city.rain_scale * (0.6 + 0.8 * w_rain) * features.lognormal(0.0, 0.8);

    const double w_temp = season();
    const double temp =
        city.base_temp - city.temp_amplitude * (2.0 * w_temp - 1.0) + features.normal(0.0, city.temp_noise);

    const double w_wind = season();
    const double wind =
        (city.wind_base + city.wind_seasonal * w_wind) * features.lognormal(0.0, city.wind_sigma);

    row[0] = Value::numeric(year);
    row[1] = Value::numeric(month);
    row[2] = Value::numeric(week);
    row[3] = Value::numeric(rain);
    row[6] = Value::numeric(temp);
    row[7] = Value::numeric(wind);
    for (std::size_t a = 0; a < 20; ++a) {
      if (!row[a].is_missing()) continue;  // already filled above
      const double j = static_cast<double>(a + 1);
      row[a] = Value::numeric(features.normal(10.0 * j, 1.0 + 0.2 * j));
    }
    if (cfg.missing_rate > 0.0)
      for (std::size_t a = 0; a < 20; ++a)
        if (features.uniform01() < cfg.missing_rate) row[a] = Value::missing();

    row[20] = Value::nominal(weekdays.below(7));
    d.instances.push_back(std::move(row));
  }
  return d;
}

}  // namespace tabml
