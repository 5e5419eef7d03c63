#include <doctest.h>

#include "amd/presets.hpp"
#include "oracles.hpp"

using namespace amd;

TEST_SUITE_BEGIN("presets");

TEST_CASE("the registry lists every experiment system") {
  const auto& reg = presets::registry();
  CHECK(reg.size() >= 5);
  auto has = [&](const char* name) {
    for (const auto& p : reg)
      if (p.name == name) return true;
    return false;
  };
  for (const char* name :
       {"appendix-b", "depol-b", "holonomy-x", "holonomy-z", "holonomy-xx", "closed-sweep"})
    CHECK(has(name));
}

TEST_CASE("collective operators match an independent bit-twiddling oracle") {
  CHECK((presets::collective_jz() - oracles::collective_jz_bits()).norm() < 1e-14);
  CHECK((presets::collective_jp() - oracles::collective_jp_bits()).norm() < 1e-14);
  CHECK((presets::collective_jm() - oracles::collective_jp_bits().adjoint()).norm() < 1e-14);
}

TEST_CASE("collective operators satisfy the su(2) algebra") {
  const Operator jz = presets::collective_jz(), jp = presets::collective_jp(),
                 jm = presets::collective_jm();
  CHECK((jz * jp - jp * jz - jp).norm() < 1e-12);            // [Jz, J+] = J+
  CHECK((jp * jm - jm * jp - 2.0 * jz).norm() < 1e-12);      // [J+, J-] = 2 Jz
}

TEST_CASE("the subsystem basis carries the collective algebra as I (x) X") {
  const Operator B = presets::appendix_b_subsystem_basis();
  CHECK((B.adjoint() * B - identity(4)).norm() < 1e-12);
  for (const Operator& J :
       {presets::collective_jz(), presets::collective_jp(), presets::collective_jm()}) {
    const Operator Y = B.adjoint() * J * B;
    const Operator X = partial_trace(Y, 2, 2, Side::A) / 2.0;
    CHECK((Y - kron(identity(2), X)).norm() < 1e-12);
  }
}

TEST_CASE("the appendix-b block passes its own consistency checks") {
  const double gp = 0.7, gm = 2.9;
  const Lindbladian L = presets::appendix_b_lindbladian(1.0, gp, gm);
  const Block blk = presets::appendix_b_block(gp, gm);
  // unique cofactor fixed point of the local generator equals the closed form
  const LocalGenerator local = local_lindbladian(L, blk);
  CHECK((local.generator.apply(blk.fixed_state)).norm() < 1e-12);
}

TEST_CASE("site Paulis act on single sites in the standard convention") {
  const Operator sz1 = presets::site_sigma('z', 1);
  CHECK(sz1(0, 0) == Complex(1, 0));  // |000> has every site at level 0
  // embedding matches a direct kron chain
  CHECK((sz1 - kron(sigma_z(), identity(4))).norm() < 1e-14);
  CHECK((presets::site_sigma('x', 3) - kron(identity(4), sigma_x())).norm() < 1e-14);
  CHECK_THROWS_AS(presets::site_sigma('w', 1), std::invalid_argument);
  CHECK_THROWS_AS(presets::site_sigma('z', 4), std::invalid_argument);
}

TEST_CASE("depolarizer presets") {
  const double gamma = 1.7;
  const Lindbladian L = presets::depol_b_lindbladian(gamma);
  Rng rng(80);
  const Operator rhoA = random_density(2, rng), rhoB = random_density(2, rng);
  const Operator rho = kron(rhoA, rhoB);
  const Operator want = kron(rhoA, Operator(gamma * (identity(2) / 2 - rhoB)));
  CHECK((L.apply(rho) - want).norm() < 1e-12);

  const Lindbladian L3 = presets::depolarizer_on_last(3, gamma);
  CHECK(L3.dim() == 8);
  CHECK(L3.dissipators().size() == 3);
}

TEST_CASE("the closed sweep tracker follows the instantaneous ground space") {
  const double g = 1.0, theta = M_PI / 2;
  const LindbladCurve curve = presets::closed_sweep_curve(g, theta, 801);
  const BlockTracker tracker = presets::closed_sweep_tracker(g, theta);
  CVector prev;
  for (int k = 0; k <= 20; ++k) {
    const double s = k / 20.0;
    const Block blk = tracker(s);
    const Operator H = curve.at(s).hamiltonian();
    const CVector v = blk.isometry.col(0);
    CHECK((H * v + 0.5 * g * v).norm() < 2e-4);  // eigenvalue -g/2, up to interpolation
    if (k > 0) CHECK(std::abs(prev.dot(v)) > 0.9);
    prev = v;
  }
}

TEST_SUITE_END();
