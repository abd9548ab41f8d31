#include <doctest.h>

#include <cmath>

#include "detcon/analysis.hpp"
#include "detcon/rng.hpp"
#include "detcon/simulator.hpp"
#include "test_util.hpp"

using namespace detcon;

TEST_CASE("lyapunov traces on the benchmark run") {
  const SimConfig cfg = testutil::paper_config();
  const Trajectory traj = run(cfg);
  Metrics m;
  lyapunov_traces(traj, m);

  // independent oracle for the initial value: sum (x0 - 0.8)^2
  double vp0 = 0.0;
  for (double xi : cfg.x0) vp0 += (xi - 0.8) * (xi - 0.8);
  CHECK(vp0 == doctest::Approx(6.8));
  CHECK(m.vp[0] == doctest::Approx(6.8));
  CHECK(m.vc[0] == 0.0);
  CHECK(m.v[0] == doctest::Approx(6.8));

  // initial decay rate: -sum (1 - sigma_i) phihat_i with phihat computed
  // by brute-force sums; the flow rate is constant between events, so the
  // first sample pair gives it exactly
  const auto sigma = testutil::paper_sigma();
  const std::vector<double> xhat = cfg.x0;
  double expected = 0.0;
  for (int i = 0; i < 5; ++i) {
    double phi = 0.0;
    for (const auto& [j, w] : cfg.graph.out_neighbors(i)) {
      phi += w * (xhat[i] - xhat[j]) * (xhat[i] - xhat[j]);
    }
    expected += -(1.0 - sigma[i]) * phi;
  }
  CHECK(expected == doctest::Approx(-19.9));
  const double slope = (m.v[1] - m.v[0]) / (m.t[1] - m.t[0]);
  CHECK(slope == doctest::Approx(-19.9).epsilon(1e-9));

  for (std::size_t k = 0; k < m.v.size(); ++k) {
    CHECK(m.v[k] == doctest::Approx(m.vp[k] + m.vc[k]).epsilon(1e-15));
    CHECK(m.vc[k] >= 0.0);
  }
}

TEST_CASE("h2_cost") {
  // flat consensus trajectory costs nothing
  Trajectory flat;
  flat.horizon = 2.0;
  for (int k = 0; k <= 20; ++k) {
    Sample s;
    s.t = 0.1 * k;
    s.x = {1.0, 1.0};
    s.xhat = s.x;
    s.chi = {0.0, 0.0};
    flat.samples.push_back(s);
  }
  CHECK(h2_cost(flat) == 0.0);

  // one agent offset by c from the average of a frozen pair: the
  // disagreement is 2 (c/2)^2 = c^2 / 2 per unit time
  Trajectory offset;
  offset.horizon = 3.0;
  for (int k = 0; k <= 30; ++k) {
    Sample s;
    s.t = 0.1 * k;
    s.x = {1.0, 0.0};
    s.xhat = s.x;
    s.chi = {0.0, 0.0};
    offset.samples.push_back(s);
  }
  CHECK(h2_cost(offset) == doctest::Approx(0.5 * 3.0));

  const SimConfig cfg = testutil::paper_config();
  const double cost = h2_cost(run(cfg));
  CHECK(cost > 0.0);
  CHECK(cost < 50.0);
}

TEST_CASE("miet_report flags inapplicable agents") {
  Trajectory traj;
  traj.horizon = 1.0;
  Sample s;
  s.t = 0.0;
  s.x = {0.0, 1.0};
  s.xhat = s.x;
  s.chi = {0.0, 0.0};
  traj.samples.push_back(s);
  traj.events.push_back({0.5, 0, EventKind::ClockZero, {}, {}, 0.0});

  const auto params = testutil::two_agent_params(0.5);
  const auto rows = miet_report(traj, params, SimMode::Nominal);
  CHECK_FALSE(rows[0].applicable);  // one event, no gap yet
  CHECK_FALSE(rows[1].applicable);
  CHECK(std::isnan(rows[0].min_gap));
  CHECK(rows[0].bound == doctest::Approx(0.5));
}

TEST_CASE("adversarial drive realizes the guaranteed gap exactly") {
  AgentParams ring;
  ring.sigma = 0.5;
  ring.d = 1.0;
  ring.t_max = 10.0 * ring.miet();
  CHECK(adversarial_miet_run(ring, -1.0) == doctest::Approx(0.5).epsilon(1e-12));

  AgentParams bench;
  bench.sigma = 0.9;
  bench.d = 2.0;
  bench.t_max = 10.0 * bench.miet();
  CHECK(adversarial_miet_run(bench, 1.0) == doctest::Approx(0.45).epsilon(1e-9));

  // scale invariance of the drive target
  const double t1 = adversarial_miet_run(bench, 0.37);
  const double t2 = adversarial_miet_run(bench, -0.37 * 1375.0);
  CHECK(std::abs(t1 - t2) <= 1e-9);

  CHECK_THROWS_AS(adversarial_miet_run(bench, 0.0), std::invalid_argument);

  CounterRng rng(31, 0);
  for (int k = 0; k < 40; ++k) {
    AgentParams p;
    p.sigma = 0.05 + 0.9 * rng.uniform();
    p.d = 0.3 + 3.7 * rng.uniform();
    p.t_max = 10.0 * p.miet();
    const double e_target = (rng.uniform() < 0.5 ? -1.0 : 1.0) *
                            std::pow(10.0, 3.0 * (rng.uniform() - 0.5));
    CHECK(std::abs(adversarial_miet_run(p, e_target) - p.miet()) <= 1e-6);
  }
}

TEST_CASE("adversarial drive cross-checked by brute-force integration") {
  AgentParams p;
  p.sigma = 0.62;
  p.d = 1.7;
  p.t_max = 10.0 * p.miet();
  const double e_target = -0.8;
  const double k = -e_target / (p.d * p.miet());

  // explicit Euler on chi' = sigma phi + 2 e z, e' = -z with z = d k
  const double z = p.d * k;
  const double phi = p.d * k * k;
  double chi = 0.0, e = 0.0, t = 0.0;
  const double dt = 1e-7;
  while (t < 2.0) {
    const double rate = p.sigma * phi + 2.0 * e * z;
    chi += rate * dt;
    e += -z * dt;
    t += dt;
    if (chi <= 0.0 && std::abs(e) > 1e-9) break;
  }
  CHECK(std::abs(t - adversarial_miet_run(p, e_target)) <= 1e-5);
}

TEST_CASE("sigma sweep is deterministic and ordered by communication") {
  SimConfig base = testutil::paper_config();
  base.sample_dt = 0.01;
  const std::vector<double> grid{0.3, 0.6};
  const auto rows = sigma_sweep(base, grid);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].sigma == 0.3);
  CHECK(rows[1].sigma == 0.6);
  CHECK(rows[0].r_com >= rows[1].r_com);  // smaller sigma communicates more

  const auto again = sigma_sweep(base, grid);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    CHECK(rows[i].r_com == again[i].r_com);
    CHECK(rows[i].cost == again[i].cost);
  }
}

TEST_CASE("trend helper tolerates a single adjacent inversion") {
  const std::vector<double> clean{5, 4, 3, 2, 1};
  const std::vector<double> one_bump{5, 4, 4.5, 2, 1};
  const std::vector<double> two_bumps{5, 6, 3, 4, 1};
  CHECK(trend_holds(clean, true));
  CHECK(trend_holds(one_bump, true));
  CHECK_FALSE(trend_holds(two_bumps, true, 1));
  CHECK(trend_holds(clean, false, 0) == false);
}

TEST_CASE("wiener band check guards its inputs") {
  SimConfig cfg = testutil::paper_config();
  cfg.mode = SimMode::NoisySelfTriggered;
  cfg.sample_dt = 0.01;
  cfg.noise = NoiseModel{0.1, 1e-3};
  CHECK_THROWS_AS(wiener_band_check(cfg, 10), std::invalid_argument);

  SimConfig nominal = testutil::paper_config();
  CHECK_THROWS_AS(wiener_band_check(nominal, 50), std::invalid_argument);

  // zero variance degenerates to exact conservation
  SimConfig quiet = cfg;
  quiet.noise = NoiseModel{0.0, 1e-3};
  quiet.horizon = 2.0;
  const WienerCheck wc = wiener_band_check(quiet, 30);
  CHECK(wc.target_variance == 0.0);
  CHECK(wc.pass());
}
