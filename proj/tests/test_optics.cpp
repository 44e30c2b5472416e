#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "uilab/optics.hpp"
#include "uilab/rng.hpp"

using namespace uilab;

namespace {

Amplitude rand_amp(RngStream& rng) {
  return {2.0 * rng.uniform01() - 1.0, 2.0 * rng.uniform01() - 1.0};
}

bool close(Amplitude a, Amplitude b, double tol = 1e-12) {
  return std::abs(a - b) <= tol;
}

}  // namespace

TEST_CASE("beam splitter transformation rule") {
  ModeRegister reg;
  reg.amps = {Amplitude{2.0, 0.0}, Amplitude{0.0, 3.0}};

  SUBCASE("t = 1 is the identity") {
    const ModeRegister out = apply_beamsplitter(reg, {1.0, 0, 1});
    CHECK(close(out.amps[0], {2.0, 0.0}));
    CHECK(close(out.amps[1], {0.0, 3.0}));
  }
  SUBCASE("balanced splitter concentrates equal inputs") {
    reg.amps = {Amplitude{0.7, -0.2}, Amplitude{0.7, -0.2}};
    const ModeRegister out = apply_beamsplitter(reg, {0.5, 0, 1});
    CHECK(close(out.amps[0], std::sqrt(2.0) * Amplitude{0.7, -0.2}));
    CHECK(close(out.amps[1], {0.0, 0.0}));
  }
  SUBCASE("vacuum port dilutes the unknown into two equal parts") {
    // (0, sqrt(n_a) a) on the ordered pair (D, A)
    const double n_a = 3.0;
    const Amplitude a{0.4, 1.1};
    ModeRegister in;
    in.amps = {Amplitude{0.0, 0.0}, std::sqrt(n_a) * a};
    const ModeRegister out = apply_beamsplitter(in, {0.5, 0, 1});
    CHECK(close(out.amps[0], std::sqrt(n_a / 2.0) * a));
    CHECK(close(out.amps[1], std::sqrt(n_a / 2.0) * a));
  }
  SUBCASE("invalid inputs are rejected") {
    CHECK_THROWS_AS(apply_beamsplitter(reg, {1.5, 0, 1}), InvalidTransmittivity);
    CHECK_THROWS_AS(apply_beamsplitter(reg, {-0.1, 0, 1}), InvalidTransmittivity);
    CHECK_THROWS_AS(apply_beamsplitter(reg, {0.5, 0, 2}), IndexOutOfRange);
    CHECK_THROWS_AS(apply_beamsplitter(reg, {0.5, 1, 1}), IndexOutOfRange);
  }
}

TEST_CASE("energy conservation under arbitrary splitters") {
  RngStream rng(31, 0);
  for (int trial = 0; trial < 200; ++trial) {
    ModeRegister reg;
    for (int i = 0; i < 6; ++i) reg.amps.push_back(rand_amp(rng));
    const double before = reg.total_intensity();
    const int a = static_cast<int>(rng.next_u64() % 6);
    int b = static_cast<int>(rng.next_u64() % 6);
    if (a == b) b = (b + 1) % 6;
    apply_beamsplitter_in_place(reg, {rng.uniform01(), a, b});
    CHECK(std::abs(reg.total_intensity() - before) <= 1e-12 * (1.0 + before));
  }
}

TEST_CASE("concentrator networks") {
  SUBCASE("single copy is a no-op") {
    const Network net = build_concentrator(1);
    CHECK(net.elements.empty());
    ModeRegister reg;
    reg.amps = {Amplitude{0.3, 0.8}};
    const ModeRegister out = apply_network(net, reg);
    CHECK(close(out.amps[0], {0.3, 0.8}));
  }
  SUBCASE("two copies merge at a balanced splitter") {
    const Network net = build_concentrator(2);
    REQUIRE(net.elements.size() == 1);
    CHECK(net.elements[0].t == doctest::Approx(0.5));
  }
  SUBCASE("four copies concentrate to twice the amplitude") {
    const Amplitude beta{0.5, -0.25};
    ModeRegister reg;
    reg.amps.assign(4, beta);
    const ModeRegister out = apply_network(build_concentrator(4), reg);
    CHECK(close(out.amps[0], 2.0 * beta));
    for (int j = 1; j < 4; ++j) CHECK(std::abs(out.amps[j]) < 1e-12);
  }
  SUBCASE("k = 1..8 against sqrt(k) scaling") {
    RngStream rng(17, 3);
    for (int k = 1; k <= 8; ++k) {
      const Amplitude beta = rand_amp(rng);
      ModeRegister reg;
      reg.amps.assign(k, beta);
      const ModeRegister out = apply_network(build_concentrator(k), reg);
      CHECK(close(out.amps[0], std::sqrt(static_cast<double>(k)) * beta));
      for (int j = 1; j < k; ++j) CHECK(std::abs(out.amps[j]) < 1e-12);
    }
  }
  SUBCASE("zero copies rejected") {
    CHECK_THROWS_AS(build_concentrator(0), InvalidCopyCount);
  }
}

TEST_CASE("network composition") {
  SUBCASE("empty network composes to the identity") {
    Network net;
    net.mode_count = 3;
    const UnitaryMatrix u = compose_network(net);
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        CHECK(close(u.at(i, j), i == j ? Amplitude{1, 0} : Amplitude{0, 0}));
      }
    }
  }
  SUBCASE("single balanced splitter block") {
    Network net;
    net.mode_count = 2;
    net.elements.push_back({0.5, 0, 1});
    const UnitaryMatrix u = compose_network(net);
    const double s = 1.0 / std::sqrt(2.0);
    CHECK(close(u.at(0, 0), {s, 0}));
    CHECK(close(u.at(0, 1), {s, 0}));
    CHECK(close(u.at(1, 0), {-s, 0}));
    CHECK(close(u.at(1, 1), {s, 0}));
  }
  SUBCASE("comparison network reproduces the per-mode output amplitudes") {
    // modes (A, B, C, D); t1 = 1/2, t2 = 2/3, t3 = 1/3 keeps the
    // cancellation ports at the difference amplitudes.
    Network net;
    net.mode_count = 4;
    const double t1 = 0.5, t2 = 2.0 / 3.0, t3 = 1.0 / 3.0;
    net.elements.push_back({t1, 3, 0});
    net.elements.push_back({t2, 1, 0});
    net.elements.push_back({t3, 3, 2});
    const UnitaryMatrix u = compose_network(net);
    CHECK(check_unitarity(u) < 1e-12);

    RngStream rng(5, 5);
    for (int trial = 0; trial < 20; ++trial) {
      const Amplitude aq = rand_amp(rng);
      const Amplitude a1 = rand_amp(rng);
      const Amplitude a2 = rand_amp(rng);
      ModeRegister reg;
      reg.amps = {aq, a1, a2, Amplitude{0, 0}};
      const ModeRegister out = u.apply(reg);
      const double r1 = 1.0 - t1, r2 = 1.0 - t2, r3 = 1.0 - t3;
      CHECK(close(out.amps[0], std::sqrt(r2) * (aq - a1), 1e-12));
      CHECK(close(out.amps[1],
                  std::sqrt(t2) * a1 + std::sqrt(r2 * t1) * aq, 1e-12));
      CHECK(close(out.amps[2], std::sqrt(t3) * (a2 - aq), 1e-12));
      CHECK(close(out.amps[3],
                  std::sqrt(t3 * r1) * aq + std::sqrt(r3) * a2, 1e-12));
    }
  }
  SUBCASE("composition equals sequential application") {
    RngStream rng(23, 1);
    for (int trial = 0; trial < 30; ++trial) {
      Network net;
      net.mode_count = 5;
      for (int e = 0; e < 8; ++e) {
        const int a = static_cast<int>(rng.next_u64() % 5);
        int b = static_cast<int>(rng.next_u64() % 5);
        if (a == b) b = (b + 1) % 5;
        net.elements.push_back({rng.uniform01(), a, b});
      }
      ModeRegister reg;
      for (int i = 0; i < 5; ++i) reg.amps.push_back(rand_amp(rng));
      const ModeRegister seq = apply_network(net, reg);
      const ModeRegister mat = compose_network(net).apply(reg);
      for (int i = 0; i < 5; ++i) CHECK(close(seq.amps[i], mat.amps[i]));
    }
  }
}

TEST_CASE("unitarity defect") {
  CHECK(check_unitarity(UnitaryMatrix::identity(4)) == 0.0);
  CHECK(check_unitarity(compose_network(build_concentrator(8))) < 1e-12);

  UnitaryMatrix scaled = UnitaryMatrix::identity(3);
  for (int j = 0; j < 3; ++j) scaled.at(0, j) *= 1.01;
  CHECK(check_unitarity(scaled) >= 0.02);
}

TEST_CASE("register validation") {
  ModeRegister reg;
  CHECK_THROWS_AS(reg.validate(), IndexOutOfRange);
  reg.amps = {Amplitude{1, 0}, Amplitude{0, 0}};
  reg.labels = {"A", "A"};
  CHECK_THROWS_AS(reg.validate(), IndexOutOfRange);
  reg.labels = {"A", "B"};
  CHECK_NOTHROW(reg.validate());
  CHECK(reg.index_of("B") == 1);
  CHECK_THROWS_AS(reg.index_of("C"), IndexOutOfRange);
}
