#include <doctest.h>

#include "amd/holonomy.hpp"
#include "amd/presets.hpp"
#include "oracles.hpp"

using namespace amd;

namespace {

const double kA = std::sqrt(2.0) * M_PI;
const double kB = std::sqrt(2.0) * M_PI;

Loop x_loop(double gamma = 5.0) { return presets::holonomy_loop(PauliLoopKind::ZZ_X, kA, kB, gamma); }

double gate_distance_up_to_phase(const Operator& U, const Operator& V) {
  const Complex ph = (U.adjoint() * V).trace();
  const Complex phase = std::abs(ph) > 0 ? ph / std::abs(ph) : Complex(1, 0);
  return (U * phase - V).norm();
}

}  // namespace

TEST_SUITE_BEGIN("holonomy");

TEST_CASE("loops must close") {
  CHECK_THROWS_AS(presets::holonomy_loop(PauliLoopKind::ZZ_X, M_PI, M_PI, 5.0),
                  std::invalid_argument);
  // a frame that does not return to the identity is rejected
  const Lindbladian base = presets::depolarizer_on_last(2, 5.0);
  LindbladCurve open_curve(LindbladCurve::RotatedFrame{
      base, FramePath(FramePath::ConstantGenerator{Operator(M_PI * kron(sigma_x(), identity(2)))})});
  CHECK_THROWS_AS(Loop(std::move(open_curve), presets::depol_b_block(5.0)),
                  std::invalid_argument);
}

TEST_CASE("a full-period rotation realizes the identity gate") {
  const Loop loop = presets::holonomy_loop(PauliLoopKind::ZZ_X, 0.0, 2.0 * M_PI, 5.0);
  CHECK((predicted_gate(PauliLoopKind::ZZ_X, 2.0 * M_PI) - identity(2)).norm() < 1e-12);
  const ExtractedGate gate = gate_via_transport(loop, 2000);
  CHECK(average_gate_fidelity(gate.unitary, identity(2)) > 0.999);
}

TEST_CASE("discrete transport with a constant frame is a single projection") {
  const Lindbladian base = presets::depolarizer_on_last(2, 5.0);
  LindbladCurve curve(LindbladCurve::RotatedFrame{
      base, FramePath(FramePath::ConstantGenerator{Operator(Operator::Zero(4, 4))})});
  Loop loop(std::move(curve), presets::depol_b_block(5.0));
  Rng rng(70);
  const Operator rho0 = kron(random_density(2, rng), identity(2) / 2);
  const SuperProjector P0(loop.block0);
  for (int N : {10, 100}) {
    const TransportResult res = transport_discrete(loop, N, rho0);
    CHECK((res.state - P0.apply(rho0)).norm() < 1e-10);
    CHECK(res.trace_loss < 1e-10);
  }
}

TEST_CASE("discrete transport realizes the holonomic X gate") {
  const Loop loop = x_loop();
  const Operator rho0A = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  const Operator rho0 = kron(rho0A, identity(2) / 2);
  const TransportResult res = transport_discrete(loop, 2000, rho0);
  const Operator rhoA = partial_trace(res.state, 2, 2, Side::B);
  const Operator Ug = predicted_gate(PauliLoopKind::ZZ_X, kB);
  CHECK(trace_distance(rhoA, Ug * rho0A * Ug.adjoint()) < 0.02);
}

TEST_CASE("transport and full dissipative propagation agree") {
  const Loop loop = x_loop();
  const Operator rho0A = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  const Operator rho0 = kron(rho0A, identity(2) / 2);
  const Operator a_transport =
      partial_trace(transport_discrete(loop, 2000, rho0).state, 2, 2, Side::B);
  const double T = 500.0 / 5.0;
  const Trajectory traj = propagate_curve(loop.curve, rho0, T, default_steps(loop.curve, T));
  const Operator a_full = partial_trace(traj.final_state(), 2, 2, Side::B);
  CHECK(trace_distance(a_transport, a_full) < 0.05);
}

TEST_CASE("transport is insensitive to the loop parameterization") {
  const Loop loop = x_loop();
  Rng rng(71);
  const Operator rho0 = kron(random_density(2, rng), identity(2) / 2);
  const int N = 2000;
  std::vector<double> uniform(N + 1), quadratic(N + 1);
  for (int i = 0; i <= N; ++i) {
    uniform[i] = double(i) / N;
    quadratic[i] = uniform[i] * uniform[i];
  }
  quadratic[0] = 0.0;
  const Operator a1 =
      partial_trace(transport_discrete(loop, uniform, rho0).state, 2, 2, Side::B);
  const Operator a2 =
      partial_trace(transport_discrete(loop, quadratic, rho0).state, 2, 2, Side::B);
  CHECK(trace_distance(a1, a2) < 0.03);
}

TEST_CASE("gate extraction recovers an exact unitary channel") {
  Rng rng(72);
  const Operator V = random_unitary(2, rng);
  std::vector<std::pair<Operator, Operator>> samples;
  for (const auto& f : fiducial_states(2)) samples.emplace_back(f, V * f * V.adjoint());
  const ExtractedGate gate = extract_unitary(samples);
  CHECK(gate.fidelity >= 1.0 - 1e-9);
  CHECK(gate_distance_up_to_phase(gate.unitary, V) < 1e-7);
}

TEST_CASE("gate extraction through a weak depolarizer") {
  Rng rng(73);
  const Operator V = random_unitary(2, rng);
  const double p = 0.01;
  std::vector<std::pair<Operator, Operator>> samples;
  for (const auto& f : fiducial_states(2)) {
    const Operator out = (1 - p) * V * f * V.adjoint() + p * identity(2) / 2;
    samples.emplace_back(f, out);
  }
  const ExtractedGate gate = extract_unitary(samples);
  // direct formula: F_avg = 1 - p/2 for a depolarizing compose on a qubit
  CHECK(std::abs(gate.fidelity - (1.0 - p / 2)) < 1e-6);
  CHECK(gate_distance_up_to_phase(gate.unitary, V) < 1e-6);
}

TEST_CASE("gate extraction of the identity channel") {
  std::vector<std::pair<Operator, Operator>> samples;
  for (const auto& f : fiducial_states(2)) samples.emplace_back(f, f);
  const ExtractedGate gate = extract_unitary(samples);
  CHECK(gate.fidelity == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(gate_distance_up_to_phase(gate.unitary, identity(2)) < 1e-9);
}

TEST_CASE("gate extraction works on the two-qubit factor") {
  Rng rng(74);
  const Operator V = random_unitary(4, rng);
  std::vector<std::pair<Operator, Operator>> samples;
  for (const auto& f : fiducial_states(4)) samples.emplace_back(f, V * f * V.adjoint());
  const ExtractedGate gate = extract_unitary(samples);
  CHECK(gate.fidelity >= 1.0 - 1e-9);
  CHECK(average_gate_fidelity(gate.unitary, V) >= 1.0 - 1e-9);
}

TEST_CASE("gate extraction needs a spanning input set") {
  std::vector<std::pair<Operator, Operator>> samples;
  const Operator f = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  samples.emplace_back(f, f);
  samples.emplace_back(f, f);
  samples.emplace_back(f, f);
  samples.emplace_back(f, f);
  CHECK_THROWS_AS(extract_unitary(samples), std::invalid_argument);
}

TEST_CASE("all three loop presets realize their predicted gates (transport route)") {
  const struct {
    PauliLoopKind kind;
  } cases[] = {{PauliLoopKind::ZZ_X}, {PauliLoopKind::XX_Z}, {PauliLoopKind::XZZ_XX}};
  for (const auto& c : cases) {
    const Loop loop = presets::holonomy_loop(c.kind, kA, kB, 5.0);
    const ExtractedGate gate = gate_via_transport(loop, 2000);
    CHECK(average_gate_fidelity(gate.unitary, predicted_gate(c.kind, kB)) > 0.98);
  }
}

TEST_CASE("a piecewise loop composes the holonomies of its closed segments") {
  // each half closes on its own (the doubled generator completes a full
  // period in half the interval), so the loop realizes the product gate
  const Operator Gx =
      2.0 * (kA * kron(sigma_z(), sigma_z()) + kB * kron(sigma_x(), identity(2)));
  const Operator Gz =
      2.0 * (kA * kron(sigma_x(), sigma_x()) + kB * kron(sigma_z(), identity(2)));
  FramePath path(FramePath::PiecewiseGenerators{{{0.5, Gx}, {0.5, Gz}}});
  CHECK((path.unitary(1.0) - identity(4)).norm() < 1e-10);
  Loop loop(LindbladCurve(LindbladCurve::RotatedFrame{presets::depolarizer_on_last(2, 5.0),
                                                      std::move(path)}),
            presets::depol_b_block(5.0));
  const ExtractedGate gate = gate_via_transport(loop, 4000);
  const Operator want = predicted_gate(PauliLoopKind::XX_Z, kB) *
                        predicted_gate(PauliLoopKind::ZZ_X, kB);
  CHECK(average_gate_fidelity(gate.unitary, want) > 0.98);
}

TEST_CASE("the extracted gate set does not commute") {
  const Loop lx = x_loop();
  const Loop lz = presets::holonomy_loop(PauliLoopKind::XX_Z, kA, kB, 5.0);
  const Operator Gx = gate_via_transport(lx, 2000).unitary;
  const Operator Gz = gate_via_transport(lz, 2000).unitary;
  CHECK((Gx * Gz - Gz * Gx).norm() > 0.1);
}

TEST_SUITE_END();
