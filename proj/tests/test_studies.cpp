#include <doctest.h>

#include <sstream>
#include <string>

#include "cutdg/studies.hpp"

using namespace cutdg;

namespace {

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

int count_lines(const std::string& s) {
  int n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST_SUITE("studies") {
  TEST_CASE("convergence output") {
    ConvergenceOptions o;
    o.levels = 3;
    o.n0 = 4;
    const auto a = run_convergence(o), b = run_convergence(o);
    std::ostringstream sa, sb;
    write_convergence_csv(sa, a.convergenceRows);
    write_convergence_csv(sb, b.convergenceRows);
    CHECK(sa.str() == sb.str());
    CHECK(first_line(sa.str()) ==
          "level,h,err_h1_bulk,eoc_h1_bulk,err_l2_bulk,eoc_l2_bulk,err_h1_surf,eoc_h1_surf,err_l2_surf,eoc_l2_surf");
    CHECK(count_lines(sa.str()) == 4);
    REQUIRE(a.convergenceRows.size() == 3);
    CHECK_FALSE(a.convergenceRows[0].eoc);
    CHECK(a.convergenceRows[2].eoc);
    CHECK(a.convergenceRows[1].h == doctest::Approx(0.5 * a.convergenceRows[0].h));
    CHECK(final_eoc_means(a.convergenceRows)[1] > 1.0);

    o.levels = 1;
    CHECK_THROWS_AS(run_convergence(o), ConfigurationError);
    CHECK_THROWS_AS(final_eoc_means({}), ConfigurationError);
  }

  TEST_CASE("stabilization configs") {
    for (const char* name : {"full", "no-surface", "no-bulk", "none"}) {
      CHECK(to_string(parse_stab_config(name)) == name);
    }
    CHECK_THROWS_AS(parse_stab_config("half"), ConfigurationError);
    const auto p = apply_config({}, StabConfig::None);
    CHECK(p.muBulk == 0.0);
    CHECK(p.tauSurf == 0.0);
    CHECK(p.gammaBulk == 50.0);
  }

  TEST_CASE("condition sweep is periodic in the shift") {
    SweepOptions o;
    o.level = 0;
    o.positions = 3;
    o.configs = {StabConfig::Full, StabConfig::None};
    const auto r = run_condition_sweep(o);
    REQUIRE(r.conditionRows.size() == 6);
    std::ostringstream out;
    write_condition_csv(out, r.conditionRows);
    CHECK(first_line(out.str()) == "delta,kappa,lambda_min,lambda_max,config");
    CHECK(count_lines(out.str()) == 7);
    for (const std::string cfg : {"full", "none"}) {
      std::vector<double> k;
      for (const auto& row : r.conditionRows) {
        if (row.config == cfg) k.push_back(row.kappa);
      }
      REQUIRE(k.size() == 3);
      CHECK(k.front() == doctest::Approx(k.back()).epsilon(1e-8));
    }
    CHECK(kappa_spread(r.conditionRows, "full") >= 1.0);
    o.positions = 1;
    CHECK_THROWS_AS(run_condition_sweep(o), ConfigurationError);
  }

  TEST_CASE("scaling and geometry output") {
    ScalingOptions s;
    s.levels = 2;
    s.n0 = 4;
    const auto r = run_condition_scaling(s);
    REQUIRE(r.scalingRows.size() == 2);
    CHECK(r.scalingRows[1].kappa > r.scalingRows[0].kappa);
    std::ostringstream out;
    write_scaling_csv(out, r.scalingRows);
    CHECK(first_line(out.str()) == "level,h,kappa,lambda_min,lambda_max,dofs");

    const auto g = run_geometry_check(3);
    REQUIRE(g.geometryRows.size() == 3);
    CHECK(g.geometryRows[2].supDist < g.geometryRows[1].supDist);
    std::ostringstream gout;
    write_geometry_csv(gout, g.geometryRows);
    CHECK(first_line(gout.str()) == "level,sup_dist,sup_normal_dev");
  }

  TEST_CASE("property suite rows") {
    PropertyOptions o;
    o.level = 0;
    o.positions = 3;
    const auto r = run_property_suite(o);
    int perDelta = 0;
    bool contrast = false;
    for (const auto& row : r.propertyRows) {
      perDelta += row.delta.has_value();
      if (row.name == "ablation_contrast") contrast = true;
      if (row.name == "coercivity") CHECK(row.constant > 0.0);
    }
    CHECK(perDelta == 15);
    CHECK(contrast);
    std::ostringstream out;
    write_properties_csv(out, r.propertyRows);
    CHECK(first_line(out.str()) == "name,constant,delta,pass");
  }
}
