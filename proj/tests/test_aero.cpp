#include "fepsim/aero/aero_model.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <numeric>

namespace fepsim::aero {
namespace {

using test::Gen;

std::vector<double> sorted_breakpoints(Gen& gen, int n, double lo, double hi) {
  std::vector<double> bp(static_cast<std::size_t>(n));
  bp[0] = lo;
  for (int i = 1; i < n; ++i) bp[static_cast<std::size_t>(i)] = bp[static_cast<std::size_t>(i - 1)] + gen.uniform(0.5, (hi - lo) / n * 2);
  return bp;
}

// Product of per-axis affine factors plus a linear part: multilinear, so
// multilinear interpolation reproduces it everywhere inside the hull.
struct Multilinear {
  std::vector<double> a, b, c;
  double operator()(const std::vector<double>& x) const {
    double prod = 1.0, lin = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      prod *= a[d] + b[d] * x[d];
      lin += c[d] * x[d];
    }
    return prod + lin;
  }
};

GridTable tabulate(const std::vector<Axis>& axes, const std::vector<std::vector<double>>& bp,
                   const Multilinear& f) {
  std::vector<double> values;
  std::vector<std::size_t> idx(axes.size(), 0);
  while (true) {
    std::vector<double> x(axes.size());
    for (std::size_t d = 0; d < axes.size(); ++d) x[d] = bp[d][idx[d]];
    values.push_back(f(x));
    // last axis fastest
    std::size_t d = axes.size();
    while (d > 0) {
      --d;
      if (++idx[d] < bp[d].size()) break;
      idx[d] = 0;
      if (d == 0) return GridTable(axes, bp, values);
    }
  }
}

TEST(GridTable, ReproducesMultilinearFunctions) {
  Gen gen(42);
  const std::vector<Axis> all = {Axis::Alpha, Axis::Beta, Axis::Tail, Axis::Aileron};
  for (int trial = 0; trial < 200; ++trial) {
    const int dims = gen.integer(1, 4);
    std::vector<Axis> axes(all.begin(), all.begin() + dims);
    std::vector<std::vector<double>> bp;
    Multilinear f;
    for (int d = 0; d < dims; ++d) {
      bp.push_back(sorted_breakpoints(gen, gen.integer(2, 6), gen.uniform(-20, 0), 20));
      f.a.push_back(gen.uniform(-1, 1));
      f.b.push_back(gen.uniform(-0.1, 0.1));
      f.c.push_back(gen.uniform(-0.1, 0.1));
    }
    const GridTable table = tabulate(axes, bp, f);
    for (int k = 0; k < 20; ++k) {
      AxisPoint p{};
      std::vector<double> x(static_cast<std::size_t>(dims));
      for (int d = 0; d < dims; ++d) {
        const auto& b = bp[static_cast<std::size_t>(d)];
        x[static_cast<std::size_t>(d)] = gen.uniform(b.front(), b.back());
        p[static_cast<std::size_t>(axes[static_cast<std::size_t>(d)])] = x[static_cast<std::size_t>(d)];
      }
      bool clamped = false;
      EXPECT_NEAR(table.interpolate(p, &clamped), f(x), 1e-9);
      EXPECT_FALSE(clamped);
    }
  }
}

// independent interpolation: linear cell search, then all 2^d corners
double brute_force(const GridTable& t, const std::vector<double>& x) {
  const std::size_t dims = t.dimensions();
  std::vector<std::size_t> lo(dims);
  std::vector<double> w(dims);
  for (std::size_t d = 0; d < dims; ++d) {
    const auto& bp = t.breakpoints()[d];
    std::size_t i = 0;
    while (i + 2 < bp.size() && x[d] > bp[i + 1]) ++i;
    lo[d] = i;
    w[d] = (x[d] - bp[i]) / (bp[i + 1] - bp[i]);
  }
  double sum = 0;
  for (std::size_t corner = 0; corner < (std::size_t{1} << dims); ++corner) {
    std::vector<std::size_t> idx(dims);
    double weight = 1;
    for (std::size_t d = 0; d < dims; ++d) {
      const bool up = (corner >> d) & 1;
      idx[d] = lo[d] + (up ? 1 : 0);
      weight *= up ? w[d] : 1 - w[d];
    }
    sum += weight * t.node(idx);
  }
  return sum;
}

TEST(GridTable, MatchesBruteForceInterpolation) {
  Gen gen(77);
  const std::vector<Axis> all = {Axis::Alpha, Axis::Beta, Axis::Tail};
  for (int trial = 0; trial < 200; ++trial) {
    const auto dims = static_cast<std::size_t>(gen.integer(1, 3));
    std::vector<Axis> axes(all.begin(), all.begin() + static_cast<long>(dims));
    std::vector<std::vector<double>> bp;
    std::size_t count = 1;
    for (std::size_t d = 0; d < dims; ++d) {
      bp.push_back(sorted_breakpoints(gen, gen.integer(2, 7), -10, 30));
      count *= bp.back().size();
    }
    std::vector<double> values(count);
    for (auto& v : values) v = gen.uniform(-1, 1);
    const GridTable table(axes, bp, values);
    for (int q = 0; q < 50; ++q) {
      AxisPoint p{};
      std::vector<double> x(dims);
      for (std::size_t d = 0; d < dims; ++d) {
        x[d] = gen.uniform(bp[d].front(), bp[d].back());
        p[static_cast<std::size_t>(axes[d])] = x[d];
      }
      ASSERT_NEAR(table.interpolate(p), brute_force(table, x), 1e-12);
    }
  }
}

TEST(GridTable, NodesAreExact) {
  const GridTable t({Axis::Alpha, Axis::Tail}, {{0, 10, 20}, {-5, 5}}, {1, 2, 3, 4, 5, 6});
  const std::size_t i[] = {1, 1};
  EXPECT_EQ(t.node(i), 4.0);
  EXPECT_EQ(t.interpolate(AxisPoint{10, 0, 5, 0, 0}), 4.0);
  EXPECT_EQ(t.interpolate(AxisPoint{20, 0, 5, 0, 0}), 6.0);
  EXPECT_EQ(t.interpolate(AxisPoint{0, 0, -5, 0, 0}), 1.0);
  EXPECT_NEAR(t.interpolate(AxisPoint{5, 0, 0, 0, 0}), 2.5, 1e-15);
}

TEST(GridTable, ClampsOutsideHull) {
  const GridTable t({Axis::Alpha}, {{0, 10}}, {1, 3});
  bool clamped = false;
  EXPECT_EQ(t.interpolate(AxisPoint{-5, 0, 0, 0, 0}, &clamped), 1.0);
  EXPECT_TRUE(clamped);
  clamped = false;
  EXPECT_EQ(t.interpolate(AxisPoint{50, 0, 0, 0, 0}, &clamped), 3.0);
  EXPECT_TRUE(clamped);
}

TEST(GridTable, RejectsBadShapes) {
  EXPECT_THROW(GridTable({Axis::Alpha}, {{0, 10}}, {1, 2, 3}), ConfigError);
  EXPECT_THROW(GridTable({Axis::Alpha}, {{0, 0}}, {1, 2}), ConfigError);
  EXPECT_THROW(GridTable({Axis::Alpha}, {{10, 0}}, {1, 2}), ConfigError);
  EXPECT_THROW(GridTable({Axis::Alpha}, {{0, 10}}, {1, std::nan("")}), ConfigError);
  EXPECT_THROW(GridTable({Axis::Alpha, Axis::Alpha}, {{0, 1}, {0, 1}}, {1, 2, 3, 4}),
               ConfigError);
  EXPECT_THROW(GridTable({Axis::Alpha, Axis::Beta}, {{0, 1}}, {1, 2}), ConfigError);
}

TEST(GridTable, AxisNamesRoundTrip) {
  for (Axis a : {Axis::Alpha, Axis::Beta, Axis::Tail, Axis::Aileron, Axis::Rudder}) {
    EXPECT_EQ(axis_from_string(to_string(a)), a);
  }
  EXPECT_THROW(axis_from_string("mach"), ConfigError);
}

// Hand-built tables with known derivatives.
AeroTables linear_tables() {
  AeroTables t;
  t.name = "linear";
  // Cz = -0.08 alpha ; Cm = 0.01 - 0.002 alpha - 0.02 tail ; Cmq = -5
  t[Coefficient::Cz].push_back({GridTable({Axis::Alpha}, {{-10, 45}}, {0.8, -3.6}), {}});
  t[Coefficient::Cm].push_back(
      {GridTable({Axis::Alpha, Axis::Tail}, {{-10, 45}, {-25, 25}},
                 {0.01 + 0.02 + 0.5, 0.01 + 0.02 - 0.5, 0.01 - 0.09 + 0.5, 0.01 - 0.09 - 0.5}),
       {}});
  t[Coefficient::Cm].push_back({GridTable({Axis::Alpha}, {{-10, 45}}, {-5, -5}), RateFactor::Q});
  // Cl = -0.003 aileron ; Cn = 0.001 aileron - 0.0015 rudder
  t[Coefficient::Cl].push_back({GridTable({Axis::Aileron}, {{-21.5, 21.5}}, {0.0645, -0.0645}), {}});
  t[Coefficient::Cn].push_back({GridTable({Axis::Aileron, Axis::Rudder}, {{-21.5, 21.5}, {-30, 30}},
                                          {-0.0215 + 0.045, -0.0215 - 0.045,
                                           0.0215 + 0.045, 0.0215 - 0.045}),
                                {}});
  return t;
}

TEST(AeroModel, StaticAndRateTerms) {
  const auto tables = linear_tables();
  const Geometry g;
  dynamics::AtmosphereSample s;
  s.airspeed = 500.0;
  s.mach = 0.5;
  const AeroQuery q{5.0, 0.0, Vector3d(4.0, 2.0, -3.0)};
  const Vector3d omega(0.1, 0.2, 0.0);
  const auto c = lookup_coefficients(q, omega, s, tables, g);
  const double q_hat = 0.2 * g.chord / (2 * 500.0);
  EXPECT_NEAR(c.cz, -0.08 * 5.0, 1e-12);
  EXPECT_NEAR(c.cm, 0.01 - 0.002 * 5.0 - 0.02 * 4.0 - 5.0 * q_hat, 1e-12);
  EXPECT_NEAR(c.cl, -0.003 * 2.0, 1e-12);
  EXPECT_NEAR(c.cn, 0.001 * 2.0 - 0.0015 * -3.0, 1e-12);
  EXPECT_NEAR(c.cz_alpha, -0.08 * kRadToDeg, 1e-9);
  EXPECT_FALSE(c.out_of_envelope);
}

TEST(AeroModel, OutOfEnvelopeIsFlagged) {
  const auto tables = linear_tables();
  dynamics::AtmosphereSample s;
  s.airspeed = 500.0;
  s.mach = 0.5;
  EXPECT_TRUE(lookup_coefficients({50.0, 0.0, {}}, {}, s, tables, {}).out_of_envelope);
  s.mach = 0.7;
  EXPECT_TRUE(lookup_coefficients({5.0, 0.0, {}}, {}, s, tables, {}).out_of_envelope);
}

TEST(AeroModel, EffectivityOfLinearTables) {
  const auto tables = linear_tables();
  const auto e = effectivity({5.0, 0.0, Vector3d(0, 0, 0)}, tables);
  Matrix3d expected = Matrix3d::Zero();
  expected(0, 1) = -0.003;
  expected(1, 0) = -0.02;
  expected(2, 1) = 0.001;
  expected(2, 2) = -0.0015;
  expected *= kRadToDeg;
  EXPECT_TRUE(e.phi.isApprox(expected, 1e-9)) << e.phi;
  EXPECT_FALSE(e.one_sided);
  const auto edge = effectivity({5.0, 0.0, Vector3d(25, 0, 0)}, tables);
  EXPECT_TRUE(edge.one_sided);
  EXPECT_NEAR(edge.phi(1, 0), -0.02 * kRadToDeg, 1e-9);
}

TEST(AeroModel, DimensionalizeByHand) {
  AeroCoefficients c;
  c.cx = 0.1;
  c.cz = -0.5;
  c.cl = 0.01;
  c.cm = -0.02;
  c.cn = 0.03;
  const Geometry g{300, 30, 11.32};
  const auto w = dimensionalize(c, 200.0, g);
  EXPECT_NEAR(w.force.x(), 200 * 300 * 0.1, 1e-9);
  EXPECT_NEAR(w.force.z(), 200 * 300 * -0.5, 1e-9);
  EXPECT_NEAR(w.moment.x(), 200 * 300 * 30 * 0.01, 1e-9);
  EXPECT_NEAR(w.moment.y(), 200 * 300 * 11.32 * -0.02, 1e-9);
  EXPECT_NEAR(w.moment.z(), 200 * 300 * 30 * 0.03, 1e-9);
}

TEST(AeroModel, WorkedExamples) {
  AeroCoefficients c;
  c.cz = -0.5;
  c.cm = 0.01;
  const auto w = dimensionalize(c, 100.0, Geometry{300, 30, 11.32});
  EXPECT_NEAR(w.force.z(), -15000.0, 1e-9);
  EXPECT_NEAR(w.moment.y(), 3396.0, 1e-9);

  AeroTables t;
  t[Coefficient::Cm].push_back({GridTable({Axis::Tail}, {{-25, 25}}, {0.25, -0.25}), {}});
  t[Coefficient::Cz].push_back({GridTable({Axis::Alpha}, {{-10, 45}}, {0.7, -3.15}), {}});
  EXPECT_NEAR(effectivity({5.0, 0.0, Vector3d::Zero()}, t).phi(1, 0), -0.573, 5e-4);
  EXPECT_NEAR(cz_alpha(5.0, t).value, -4.011, 5e-4);
}

TEST(AeroModel, DifferenceStepConvergesQuadratically) {
  // Cm = 1e-4 tail^3 on a grid fine enough that the stencil points are nodes
  std::vector<double> bp, values;
  for (int i = 0; i <= 1000; ++i) {
    bp.push_back(-25 + 0.05 * i);
    values.push_back(1e-4 * std::pow(bp.back(), 3));
  }
  AeroTables t;
  t[Coefficient::Cm].push_back({GridTable({Axis::Tail}, {bp}, values), {}});
  const AeroQuery q{0.0, 0.0, Vector3d(5, 0, 0)};
  const double exact = 3e-4 * 25 * kRadToDeg;
  const double coarse = effectivity(q, t, {1.0, 1.0}).phi(1, 0) - exact;
  const double fine = effectivity(q, t, {0.5, 1.0}).phi(1, 0) - exact;
  EXPECT_NEAR(coarse / fine, 4.0, 0.05);
  EXPECT_NEAR(coarse, 1e-4 * kRadToDeg, 1e-9);
}

TEST(AeroModel, LiftSlopeIsTheCentralSecant) {
  const auto tables = load_aero_tables(test::data_dir() / "aero" / "standin_f16.json");
  for (double a = -8.0; a <= 43.0; a += 0.7) {
    const AeroQuery up{a + 1.0, 0.0, Vector3d::Zero()}, down{a - 1.0, 0.0, Vector3d::Zero()};
    const double secant = (static_coefficient(Coefficient::Cz, up, tables) -
                           static_coefficient(Coefficient::Cz, down, tables)) /
                          2.0 * kRadToDeg;
    EXPECT_NEAR(cz_alpha(a, tables).value, secant, 1e-10) << a;
  }
}

TEST(AeroModel, StandinDataHasStableLiftSlope) {
  const auto tables = load_aero_tables(test::data_dir() / "aero" / "standin_f16.json");
  for (double a = -5.0; a <= 25.0; a += 5.0) {
    EXPECT_LT(cz_alpha(a, tables).value, 0.0) << a;
  }
  // nose-down pitching moment from trailing-edge-down tail
  const auto e = effectivity({5.0, 0.0, Vector3d::Zero()}, tables);
  EXPECT_LT(e.phi(1, 0), 0.0);
}

TEST(AeroIo, SerializeParseRoundTrip) {
  const auto a = load_aero_tables(test::data_dir() / "aero" / "standin_f16.json");
  const auto b = parse_aero_tables(serialize_aero_tables(a));
  EXPECT_EQ(a.name, b.name);
  for (std::size_t k = 0; k < kCoefficientCount; ++k) {
    ASSERT_EQ(a.terms[k].size(), b.terms[k].size());
    for (std::size_t i = 0; i < a.terms[k].size(); ++i) {
      EXPECT_EQ(a.terms[k][i].table.values(), b.terms[k][i].table.values());
      EXPECT_EQ(a.terms[k][i].table.breakpoints(), b.terms[k][i].table.breakpoints());
      EXPECT_EQ(a.terms[k][i].table.axes(), b.terms[k][i].table.axes());
      EXPECT_EQ(a.terms[k][i].rate, b.terms[k][i].rate);
    }
  }
}

TEST(AeroIo, RejectsWrongFormatAndVersion) {
  EXPECT_THROW(parse_aero_tables(R"({"format":"other","version":1})"), ConfigError);
  EXPECT_THROW(parse_aero_tables(R"({"format":"fepsim-aero","version":7})"), ConfigError);
  EXPECT_THROW(parse_aero_tables("not json"), ConfigError);
  EXPECT_THROW(load_aero_tables("/nonexistent/tables.json"), std::runtime_error);
}

TEST(AeroIo, ImportManifestWithTransposedGrid) {
  test::TempDir dir("aero");
  // file lists alpha fastest: rows are tail values
  std::ofstream(dir / "cm.txt") << "1 2 3\n4 5 6\n";
  std::ofstream(dir / "cz.txt") << "0.5 0 -0.5 -1.0\n";
  std::ofstream(dir / "manifest.json") << R"({
    "format": "fepsim-aero-manifest", "version": 1, "name": "imported",
    "envelope": {"alpha_deg": [0, 30], "beta_deg": [-10, 10], "mach_max": 0.6},
    "terms": [
      {"coefficient": "Cm", "axes": ["alpha", "tail"], "breakpoints": [[0, 10, 20], [-10, 10]],
       "file": "cm.txt", "transpose": true, "scale": 0.1},
      {"coefficient": "Cz", "axes": ["alpha"], "breakpoints": [[0, 10, 20, 30]], "file": "cz.txt"}
    ]})";
  const auto t = import_aero_manifest(dir / "manifest.json");
  const auto& cm = t[Coefficient::Cm].front().table;
  const std::vector<double> expected = {0.1, 0.4, 0.2, 0.5, 0.3, 0.6};
  ASSERT_EQ(cm.values().size(), expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(cm.values()[i], expected[i], 1e-15);
  EXPECT_EQ(t[Coefficient::Cz].front().table.values().size(), 4u);

  std::ofstream(dir / "cz.txt") << "0.5 0 x -1.0\n";
  EXPECT_THROW(import_aero_manifest(dir / "manifest.json"), ConfigError);
}

}  // namespace
}  // namespace fepsim::aero
