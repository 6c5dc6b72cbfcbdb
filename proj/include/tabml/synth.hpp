#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "tabml/arff.hpp"

namespace tabml {

enum class Coupling { Independent, WeatherCoupled };

std::optional<Coupling> coupling_from_name(std::string_view name);
std::string coupling_name(Coupling c);

// Per-city weather parameterization. The four presets differ only in these
// knobs; they stand in for the unavailable station data.
struct CityParams {
  std::string name = "generic";
  double base_temp = 18.0;      // annual mean temperature (deg C)
  double temp_amplitude = 6.5;  // seasonal swing
  double temp_noise = 2.2;
  double dry_base = 0.55;       // chance of a rain-free day at mid-season
  double dry_seasonal = 0.35;   // winter increase in rain chance
  double rain_scale = 5.0;      // wet-day rainfall scale (mm)
  double wind_base = 14.0;      // typical max wind (km/h)
  double wind_seasonal = 6.0;
  double wind_sigma = 0.3;      // lognormal shape
};

// "brisbane", "adelaide", "perth", "hobart", or "generic".
std::optional<CityParams> city_params(std::string_view name);

// Columns: F1 year, F2 month, F3 week-of-year, F4 rainfall, F7 mean
// temperature, F8 max wind, F21 weekday; F5/F6/F9..F20 are noise features.
// F21 is drawn from a private stream and is independent of every feature in
// both coupling modes. WeatherCoupled ties F4/F7/F8 to the month; Independent
// gives them the same marginal shapes without the month link.
struct SyntheticConfig {
  std::size_t n_rows = 1000;
  std::uint64_t seed = 1;
  double missing_rate = 0.0;  // chance per feature cell (F1..F20); never F21
  Coupling coupling = Coupling::Independent;
  CityParams city;
};

Dataset generate_synthetic(const SyntheticConfig& cfg);

}  // namespace tabml
