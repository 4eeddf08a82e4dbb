#include "dcs/errors.hpp"
#include "dcs/scan.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <sstream>
#include <string>

using namespace dcs;

namespace {

constexpr double pi = std::numbers::pi;

ScanConfig small_scan(int n)
{
  ConfigMap values{{"omega1_count", std::to_string(n)},
                   {"omega2_count", std::to_string(n)},
                   {"channels", "off,on"},
                   {"workers", "1"}};
  return resolve_config(values);
}

std::string csv(const std::vector<SpectralRow>& rows)
{
  std::ostringstream out;
  write_csv(out, rows);
  return out.str();
}

}  // namespace

TEST_CASE("angle expressions")
{
  const double g = 50.0;
  const double a0 = 0.75;
  CHECK(parse_angle("0.3").radians(g, a0) == doctest::Approx(0.3));
  CHECK(parse_angle("1.5pi").radians(g, a0) == doctest::Approx(1.5 * pi));
  CHECK(parse_angle("pi/2").radians(g, a0) == doctest::Approx(0.5 * pi));
  CHECK(parse_angle("pi").radians(g, a0) == doctest::Approx(pi));
  CHECK(parse_angle("1/gamma0").radians(g, a0) == doctest::Approx(0.02));
  CHECK(parse_angle("2/gamma0").radians(g, a0) == doctest::Approx(0.04));
  CHECK(parse_angle("dressed").radians(g, a0) == doctest::Approx(1.25 / g));
  CHECK(parse_angle("0.5dressed").radians(g, a0) == doctest::Approx(0.625 / g));
  CHECK(parse_angle(" 0.5PI ").radians(g, a0) == doctest::Approx(0.5 * pi));
  CHECK(parse_angle("1.5pi").to_string() == "1.5pi");
  CHECK(parse_angle("1/gamma0").to_string() == "1/gamma0");
  for (const char* bad : {"", "abc", "pi/", "pi*2", "1/gamma", "1.2.3pi"}) {
    CHECK_THROWS_AS(parse_angle(bad), ConfigError);
  }
}

TEST_CASE("grid axes are left-open")
{
  const GridAxis axis{0.0, 1.1, 96};
  CHECK(axis.at(0) == doctest::Approx(1.1 / 96));
  CHECK(axis.at(95) == doctest::Approx(1.1));
}

TEST_CASE("config text parsing and resolution")
{
  std::istringstream text("# comment\n a0 = 0.2 \nbeta0=0.9999  # trailing\n\ntheta1 = 2/gamma0\nchannels = off, total\n");
  const ConfigMap values = parse_config_text(text);
  CHECK(values.at("a0") == "0.2");
  const ScanConfig c = resolve_config(values);
  CHECK(c.a0 == doctest::Approx(0.2));
  CHECK(c.gamma0 == doctest::Approx(70.71244595191452).epsilon(1e-12));
  CHECK(c.theta1.radians(c.gamma0, c.a0) == doctest::Approx(2.0 / c.gamma0));
  REQUIRE(c.channels.size() == 2);
  CHECK(c.channels[1] == Channel::total);
  CHECK(c.omega_scale() == doctest::Approx(4.0 * c.gamma0 * c.gamma0 * c.omega0));

  const ScanConfig ev = resolve_config({{"omega0_ev", "1.6"}});
  CHECK(ev.omega0 == doctest::Approx(1.6 / electron_mass_ev));

  const ConfigMap described = describe(c);
  CHECK(described.count("workers") == 0);
  CHECK(described.at("theta1") == "2/gamma0");
}

TEST_CASE("invalid configurations are rejected")
{
  std::istringstream unknown("gamma = 3\n");
  CHECK_THROWS_AS(parse_config_text(unknown), ConfigError);
  std::istringstream no_equals("a0 0.1\n");
  CHECK_THROWS_AS(parse_config_text(no_equals), ConfigError);
  CHECK_THROWS_AS(read_config_file("/nonexistent/dcs.cfg"), ConfigError);

  const ConfigMap bad[] = {
      {{"gamma0", "0.5"}},
      {{"gamma0", "10"}, {"beta0", "0.9"}},
      {{"omega0", "1e-5"}, {"omega0_ev", "1.6"}},
      {{"beta0", "1.0"}},
      {{"a0", "-1"}},
      {{"delta_phi", "0"}},
      {{"omega1_count", "0"}},
      {{"omega1_min", "1.2"}},
      {{"omega1_count", "2.5"}},
      {{"theta1", "0.5pi"}},
      {{"channels", "sideways"}},
      {{"channels", ""}},
      {{"stokes_basis", "xyz"}},
      {{"laser", "elliptic"}},
      {{"a0", "lots"}},
      {{"nonsense", "1"}},
  };
  for (const ConfigMap& values : bad) CHECK_THROWS_AS(resolve_config(values), ConfigError);
}

TEST_CASE("worker count from the environment")
{
  ::setenv("DCS_WORKERS", "3", 1);
  CHECK(workers_from_environment() == 3);
  ::setenv("DCS_WORKERS", "many", 1);
  CHECK_THROWS_AS(workers_from_environment(), ConfigError);
  ::unsetenv("DCS_WORKERS");
  CHECK(workers_from_environment() == 1);
}

TEST_CASE("parallel_for visits every index and propagates exceptions")
{
  std::vector<int> hits(50, 0);
  parallel_for(50, 4, [&](int i) { hits[i] += 1; });
  for (int h : hits) CHECK(h == 1);
  CHECK_THROWS_AS(parallel_for(10, 3, [](int i) { if (i == 7) throw std::runtime_error("boom"); }), std::runtime_error);
}

TEST_CASE("a 1x1 grid reproduces the single-point evaluation")
{
  ScanConfig c = small_scan(1);
  c.omega1 = {0.0, 0.4, 1};
  c.omega2 = {0.0, 0.7, 1};
  const auto rows = run_scan(c);
  REQUIRE(rows.size() == 2);
  const auto point = evaluate_point(c, c.make_pulse(), 0.4 * c.omega_scale(), 0.7 * c.omega_scale());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    CHECK(rows[k].channel == point[k].channel);
    CHECK(rows[k].d2w_normalized == point[k].d2w_normalized);
    CHECK(*rows[k].concurrence == *point[k].concurrence);
  }
  CHECK(rows[0].omega1_scaled == doctest::Approx(0.4));
}

TEST_CASE("scan output does not depend on the worker count")
{
  ScanConfig c = small_scan(4);
  const std::string one = csv(run_scan(c));
  c.workers = 3;
  CHECK(csv(run_scan(c)) == one);
  CHECK(one.rfind("omega1_scaled,omega2_scaled,channel,d2W_normalized,concurrence,s11,s22,s33,masked\n", 0) == 0);
  CHECK(std::count(one.begin(), one.end(), '\n') == 1 + 4 * 4 * 2);
}

TEST_CASE("kinematically forbidden points are masked, not fatal")
{
  ScanConfig c = resolve_config({{"gamma0", "2"}, {"omega0", "0.1"}, {"theta1", "0.1"}, {"theta2", "0.1"},
                                 {"omega1_count", "4"}, {"omega2_count", "4"}, {"workers", "1"}});
  const auto rows = run_scan(c);
  const double fraction = masked_fraction(rows);
  CHECK(fraction > 0.0);
  CHECK(fraction < 1.0);
  for (const auto& r : rows) {
    if (!r.masked) continue;
    CHECK_FALSE(r.mask_reason.empty());
  }
  const std::string text = csv(rows);
  CHECK(text.find(",,,,,true\n") != std::string::npos);
}

TEST_CASE("resonance lines and single-photon scan")
{
  ScanConfig c = small_scan(3);
  const auto lines = resonance_lines(c);
  REQUIRE(lines.size() == 3u * c.resonance_orders);
  for (int i = 0; i < 3; ++i) {
    for (int s = 1; s < c.resonance_orders; ++s) {
      CHECK(*lines[i * c.resonance_orders + s].omega2_scaled > *lines[i * c.resonance_orders + s - 1].omega2_scaled);
    }
  }

  c.omega = {0.0, 1.0, 3};
  c.theta = {0.0, 2.0, 2};
  const auto single = run_single_photon_scan(c);
  REQUIRE(single.size() == 6);
  CHECK(single[0].theta_gamma == doctest::Approx(1.0));
  CHECK(single[3].theta_gamma == doctest::Approx(2.0));
  for (const auto& r : single) {
    CHECK_FALSE(r.masked);
    CHECK(r.stokes);
    CHECK((*r.stokes).tail<3>().norm() <= 1.0 + 1e-12);
  }
}

TEST_CASE("ratio table row structure")
{
  ScanConfig c = small_scan(6);
  c.gamma_list = {10.0};
  c.phi1_list = {parse_angle("pi/2")};
  const auto table = run_ratio_table(c);
  REQUIRE(table.size() == 1);
  CHECK_FALSE(table[0].masked);
  CHECK(table[0].ratio == doctest::Approx(table[0].max_off / table[0].max_on));
  CHECK(table[0].order == std::lround(table[0].log10_ratio));
  std::ostringstream out;
  write_csv(out, table);
  CHECK(out.str().rfind("gamma0,phi1,max_off_normalized,max_on_normalized,ratio,log10_ratio,order,masked\n", 0) == 0);
}
