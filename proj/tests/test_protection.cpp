#include "fepsim/protection/envelope.hpp"

#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

namespace fepsim::protection {
namespace {

using test::Gen;

TEST(RateProtect, OutputInsideLimitsAndIdentityInside) {
  Gen gen(3);
  const EnvelopeLimits lim;
  for (int i = 0; i < 10000; ++i) {
    const Vector3d w(gen.uniform(-4, 4), gen.uniform(-4, 4), gen.uniform(-4, 4));
    const Vector3d out = rate_protect(w, lim);
    for (int k = 0; k < 3; ++k) {
      ASSERT_GE(out[k], lim.rate_min[k]);
      ASSERT_LE(out[k], lim.rate_max[k]);
      if (w[k] >= lim.rate_min[k] && w[k] <= lim.rate_max[k]) {
        ASSERT_EQ(out[k], w[k]);
      } else {
        ASSERT_EQ(out[k], w[k] < 0 ? lim.rate_min[k] : lim.rate_max[k]);
      }
    }
  }
}

TEST(NzAlpha, MatchesLiftBalance) {
  // W nz = qbar S |Cz_alpha| alpha
  const auto r = nz_equivalent_alpha(20500, 9.0, 400, 300, -4.5, 0.4);
  EXPECT_FALSE(r.fallback);
  EXPECT_NEAR(r.alpha * 400 * 300 * 4.5, 20500 * 9.0, 1e-8);
}

TEST(NzAlpha, FallbackAtLowPressureOrZeroSlope) {
  EXPECT_TRUE(nz_equivalent_alpha(20500, 9, 5, 300, -4.5, 0.4).fallback);
  EXPECT_EQ(nz_equivalent_alpha(20500, 9, 5, 300, -4.5, 0.4).alpha, 0.4);
  EXPECT_TRUE(nz_equivalent_alpha(20500, 9, 400, 300, 0.0, 0.4).fallback);
}

TEST(EffectiveAlpha, MostRestrictive) {
  EXPECT_EQ(effective_alpha_max(0.4, 0.3), 0.3);
  EXPECT_EQ(effective_alpha_min(-0.1, -0.05), -0.05);
}

TEST(Longitudinal, PassThroughBelowFadeOnset) {
  const EnvelopeLimits lim;
  const ProtectionGains g;
  const double amax = 25 * kDegToRad;
  const auto out = longitudinal_protect(0.3, 0.8 * amax, 0.1, amax, lim, g);
  EXPECT_FALSE(out.active);
  EXPECT_EQ(out.command, 0.3);
  EXPECT_EQ(out.lambda, 1.0);
  EXPECT_NEAR(out.normalized, 0.8, 1e-15);
}

TEST(Longitudinal, BlendMatchesHandComputation) {
  const EnvelopeLimits lim;
  ProtectionGains g;
  g.k_alpha = 1.5;
  g.k_qdamp = 0.7;
  const double amax = 20 * kDegToRad;
  const double abar = 0.95, q = 0.2, qp = 0.4;
  const auto out = longitudinal_protect(qp, abar * amax, q, amax, lim, g);
  const double lambda = (1 - abar) / (1 - g.alpha_fade);
  const double restore = 1.5 * (1 - abar) * lim.rate_max.y() - 0.7 * q;
  EXPECT_TRUE(out.active);
  EXPECT_NEAR(out.lambda, lambda, 1e-12);
  EXPECT_NEAR(out.command, lambda * qp + (1 - lambda) * restore, 1e-12);
}

TEST(Longitudinal, AtLimitCommandIsPureRestore) {
  const EnvelopeLimits lim;
  const ProtectionGains g;
  const double amax = 25 * kDegToRad;
  for (double abar : {1.0, 1.05}) {
    const auto out = longitudinal_protect(0.5, abar * amax, 0.1, amax, lim, g);
    EXPECT_EQ(out.lambda, 0.0);
    EXPECT_LT(out.command, 0.0);  // damping plus beyond-limit term pull the nose down
  }
}

TEST(Longitudinal, NoseDownDemandIgnoredByUpperLayer) {
  const auto out = longitudinal_protect(-0.2, 0.5, 0.0, 0.4, EnvelopeLimits{}, ProtectionGains{});
  EXPECT_FALSE(out.active);
  EXPECT_EQ(out.command, -0.2);
}

TEST(Longitudinal, MirroredLowerLimit) {
  const EnvelopeLimits lim;
  const ProtectionGains g;
  const double amin = -5 * kDegToRad;
  const auto out = longitudinal_protect_min(-0.3, 0.95 * amin, -0.1, amin, lim, g);
  const double lambda = (1 - 0.95) / (1 - g.alpha_fade);
  const double restore = g.k_alpha * 0.05 * lim.rate_min.y() + g.k_qdamp * 0.1;
  EXPECT_TRUE(out.active);
  EXPECT_NEAR(out.command, lambda * -0.3 + (1 - lambda) * restore, 1e-12);
  EXPECT_FALSE(longitudinal_protect_min(0.1, 0.95 * amin, 0, amin, lim, g).active);
}

TEST(Longitudinal, CommandAlwaysInsideRateLimits) {
  Gen gen(11);
  const EnvelopeLimits lim;
  const ProtectionGains g;
  for (int i = 0; i < 20000; ++i) {
    const double amax = gen.uniform(0.1, 0.5);
    const auto out = longitudinal_protect(gen.uniform(-2, 2), gen.uniform(-0.5, 1.0),
                                          gen.uniform(-3, 3), amax, lim, g);
    ASSERT_GE(out.command, lim.rate_min.y());
    ASSERT_LE(out.command, lim.rate_max.y());
    ASSERT_GE(out.lambda, 0.0);
    ASSERT_LE(out.lambda, 1.0);
  }
}

TEST(Bank, BankReducingDemandPasses) {
  const EnvelopeLimits lim;
  const ProtectionGains g;
  const double phi = 66 * kDegToRad;
  const auto out = bank_protect(-1.0, phi, 0.0, 0.0, lim, g);
  EXPECT_FALSE(out.active);
  EXPECT_EQ(out.command, -1.0);
}

TEST(Bank, RestoreOpposesBankWithRateDamping) {
  const EnvelopeLimits lim;
  ProtectionGains g;
  const double phi = -67 * kDegToRad;
  const auto out = bank_protect(-1.0, phi, -0.2, -0.1, lim, g);
  const double expected = g.k_phi * 1.0 * lim.rate_max.x() + g.k_pdamp * 0.2 + g.k_rdamp * 0.1;
  EXPECT_TRUE(out.active);
  EXPECT_EQ(out.lambda, 0.0);
  EXPECT_NEAR(out.command, std::clamp(expected, lim.rate_min.x(), lim.rate_max.x()), 1e-12);
  EXPECT_GT(out.command, 0.0);
}

TEST(Bank, SymmetricInBankSign) {
  Gen gen(5);
  const EnvelopeLimits lim;
  const ProtectionGains g;
  for (int i = 0; i < 5000; ++i) {
    const double pp = gen.uniform(-2, 2), phi = gen.uniform(-1.4, 1.4);
    const double p = gen.uniform(-1, 1), r = gen.uniform(-0.5, 0.5);
    const auto a = bank_protect(pp, phi, p, r, lim, g);
    auto mirrored = lim;
    mirrored.rate_min = -lim.rate_max;
    mirrored.rate_max = -lim.rate_min;
    const auto b = bank_protect(-pp, -phi, -p, -r, mirrored, g);
    ASSERT_NEAR(a.command, -b.command, 1e-12);
  }
}

TEST(Protection, WorkedExamples) {
  EXPECT_NEAR(nz_equivalent_alpha(20000, 9.0, 300, 300, -4.0, 0.4).alpha, 0.5, 1e-15);

  const EnvelopeLimits lim;
  ProtectionGains g;
  g.alpha_fade = 0.85;
  g.k_qdamp = 0.5;
  const double amax = 20 * kDegToRad;
  const auto at_limit = longitudinal_protect(0.4, amax, 0.2, amax, lim, g);
  EXPECT_EQ(at_limit.lambda, 0.0);
  EXPECT_NEAR(at_limit.command, -0.1, 1e-15);
  EXPECT_NEAR(longitudinal_protect(0.4, 0.925 * amax, 0.2, amax, lim, g).lambda, 0.5, 1e-12);

  g.k_pdamp = 0.5;
  g.k_rdamp = 0.2;
  const double phi = -lim.phi_max * kDegToRad;
  const auto bank = bank_protect(0.0, phi, 0.3, 0.1, lim, g);
  EXPECT_EQ(bank.lambda, 0.0);
  EXPECT_NEAR(bank.command, g.k_phi * lim.rate_max.x() - 0.17, 1e-12);
}

TEST(Bank, YawBuildUpAloneIsOpposed) {
  const EnvelopeLimits lim;
  const ProtectionGains g;
  for (double phi_bar : {0.9, 0.95, 1.0, 1.1}) {
    const double phi = phi_bar * lim.phi_max * kDegToRad;
    EXPECT_LT(bank_protect(0.0, phi, 0.0, 0.2, lim, g).command, 0.0) << phi_bar;
    EXPECT_GT(bank_protect(0.0, -phi, 0.0, -0.2, lim, g).command, 0.0) << phi_bar;
  }
}

TEST(Protection, ContinuousAcrossFadeOnset) {
  Gen gen(17);
  const EnvelopeLimits lim;
  const ProtectionGains g;
  const double amax = 20 * kDegToRad;
  const double phimax = lim.phi_max * kDegToRad;
  const int n = 20000;
  for (int trial = 0; trial < 50; ++trial) {
    const double qp = gen.uniform(0, 0.5), q = gen.uniform(-0.3, 0.3);
    const double pp = gen.uniform(0, 1.5), p = gen.uniform(-1, 1), r = gen.uniform(-0.3, 0.3);
    double last_q = longitudinal_protect(qp, 0.5 * amax, q, amax, lim, g).command;
    double last_p = bank_protect(pp, 0.5 * phimax, p, r, lim, g).command;
    for (int i = 1; i <= n; ++i) {
      const double x = 0.5 + 0.7 * i / n;
      const double cq = longitudinal_protect(qp, x * amax, q, amax, lim, g).command;
      const double cp = bank_protect(pp, x * phimax, p, r, lim, g).command;
      ASSERT_LT(std::abs(cq - last_q), 1e-3) << x;
      ASSERT_LT(std::abs(cp - last_p), 1e-3) << x;
      last_q = cq;
      last_p = cp;
    }
  }
}

// ---------------------------------------------------------------- database

EnvelopeLimits with_alpha(double amax, double nzmax) {
  EnvelopeLimits l;
  l.alpha_max = amax;
  l.nz_max = nzmax;
  return l;
}

TEST(Database, BilinearInsideAndClampedOutside) {
  const EnvelopeDatabase db({0.2, 0.6}, {0, 30000},
                            {with_alpha(20, 9), with_alpha(24, 7), with_alpha(22, 8),
                             with_alpha(26, 6)});
  bool clamped = true;
  const auto mid = db.sample(0.4, 15000, &clamped);
  EXPECT_FALSE(clamped);
  EXPECT_NEAR(mid.alpha_max, (20 + 24 + 22 + 26) / 4.0, 1e-12);
  EXPECT_NEAR(mid.nz_max, 7.5, 1e-12);
  const auto q = db.sample(0.3, 7500);
  const double lo = 20 + 0.25 * 4, hi = 22 + 0.25 * 4;
  EXPECT_NEAR(q.alpha_max, lo + 0.25 * (hi - lo), 1e-12);
  const auto out = db.sample(0.9, -100, &clamped);
  EXPECT_TRUE(clamped);
  EXPECT_NEAR(out.alpha_max, 22, 1e-12);
}

TEST(Database, RejectsBadGridAndNodes) {
  EXPECT_THROW(EnvelopeDatabase({0.4, 0.2}, {0}, {EnvelopeLimits{}, EnvelopeLimits{}}),
               ConfigError);
  EXPECT_THROW(EnvelopeDatabase({0.2}, {0}, {}), ConfigError);
  EnvelopeLimits bad;
  bad.alpha_min = 2;
  EXPECT_THROW(EnvelopeDatabase({0.2}, {0}, {bad}), ConfigError);
}

TEST(Database, ParsesShippedFiles) {
  for (const char* f : {"envelope/default.json", "envelope/stores.json"}) {
    const auto db = load_envelope_database(test::data_dir() / f);
    EXPECT_GE(db.mach().size(), 1u);
    EXPECT_TRUE(db.sample(0.5, 10000).check().empty());
  }
}

TEST(Database, ParseErrorsAreConfigErrors) {
  EXPECT_THROW(parse_envelope_database("{"), ConfigError);
  EXPECT_THROW(parse_envelope_database(R"({"format":"other","version":1})"), ConfigError);
  EXPECT_THROW(parse_envelope_database(
                   R"({"format":"fepsim-envelope","version":1,"mach":[0.2],"altitude_ft":[0],)"
                   R"("nodes":[{"p":[-1,1]}]})"),
               ConfigError);
}

TEST(Limits, CheckNamesViolation) {
  EnvelopeLimits l;
  EXPECT_TRUE(l.check().empty());
  l.rate_max.y() = -0.1;
  EXPECT_NE(l.check().find("q rate"), std::string::npos);
  ProtectionGains g;
  g.alpha_fade = 1.0;
  EXPECT_NE(g.check().find("fade"), std::string::npos);
}

// ---------------------------------------------------------------- layered

FlightCondition cruise() {
  FlightCondition fc;
  fc.qbar = 300;
  fc.mach = 0.4;
  fc.altitude = 10000;
  fc.cz_alpha = -4.5;
  fc.weight = 20500;
  fc.wing_area = 300;
  return fc;
}

TEST(Protect, InactiveInsideEnvelopeKeepsPilotDemand) {
  const EnvelopeDatabase db;
  const Vector3d demand(0.3, 0.1, 0.05);
  const auto r = protect(demand, cruise(), db, ProtectionGains{});
  EXPECT_FALSE(r.state.any_active());
  EXPECT_EQ(r.command, demand);
}

TEST(Protect, LoadFactorLimitCanBeTheRestrictiveOne) {
  const EnvelopeDatabase db;
  auto fc = cruise();
  const auto r = protect(Vector3d::Zero(), fc, db, ProtectionGains{});
  const double nz_alpha = 20500 * 9.0 / (300 * 300 * 4.5);
  EXPECT_NEAR(r.state.alpha_max_eff, std::min(25 * kDegToRad, nz_alpha), 1e-12);
  fc.qbar = 1;
  const auto slow = protect(Vector3d::Zero(), fc, db, ProtectionGains{});
  EXPECT_TRUE(slow.state.nz_fallback);
  EXPECT_NEAR(slow.state.alpha_max_eff, 25 * kDegToRad, 1e-12);
}

TEST(Protect, RateLayerFlagsSaturation) {
  const auto r = protect(Vector3d(3, 0, 0), cruise(), EnvelopeDatabase{}, ProtectionGains{});
  EXPECT_TRUE(r.state.rate_active);
  EXPECT_EQ(r.command.x(), 1.5);
}

}  // namespace
}  // namespace fepsim::protection
