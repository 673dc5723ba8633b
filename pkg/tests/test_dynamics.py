import math

import numpy as np
import pytest

from auvdocking.dynamics.vehicle import (
    ControlInput,
    VehicleState,
    coriolis_matrix,
    ground_velocity,
    kinetic_energy,
    rotation_body_to_earth,
    step,
)
from auvdocking.errors import ConfigError, GimbalLock
from auvdocking.models.hydro import HydroParamsFile


def _simulate(state, control, current, params, dt, duration):
    for _ in range(int(round(duration / dt))):
        state = step(state, control, current, params, dt)
    return state


class TestRotation:
    def test_zero_angles_give_identity(self):
        np.testing.assert_allclose(rotation_body_to_earth([0.0, 0.0, 0.0]), np.eye(6), atol=1e-15)

    def test_pure_yaw_maps_body_x_to_earth_y(self):
        j1 = rotation_body_to_earth([0.0, 0.0, math.pi / 2.0])[:3, :3]
        np.testing.assert_allclose(j1 @ [1.0, 0.0, 0.0], [0.0, 1.0, 0.0], atol=1e-12)

    def test_j1_orthonormal_for_random_angles(self, rng):
        for _ in range(1000):
            eta2 = [
                rng.uniform(-math.pi, math.pi),
                rng.uniform(-1.5, 1.5),
                rng.uniform(-math.pi, math.pi),
            ]
            j1 = rotation_body_to_earth(eta2)[:3, :3]
            np.testing.assert_allclose(j1.T @ j1, np.eye(3), atol=1e-12)
            assert np.linalg.det(j1) == pytest.approx(1.0, abs=1e-12)

    def test_gimbal_guard(self):
        with pytest.raises(GimbalLock):
            rotation_body_to_earth([0.0, math.pi / 2.0, 0.0])

    def test_ground_velocity_adds_the_current(self):
        state = VehicleState(eta2=[0.0, 0.0, math.pi / 2.0], v1=[1.2, 0.1, 0.0])
        np.testing.assert_allclose(ground_velocity(state), [-0.1, 1.2, 0.0], atol=1e-12)
        np.testing.assert_allclose(ground_velocity(state, [0.25, 0.0, 0.0]), [0.15, 1.2, 0.0], atol=1e-12)


class TestStep:
    def test_equilibrium_only_advances_time(self, hydro):
        state = VehicleState(eta1=[1.0, 2.0, 3.0], eta2=[0.0, 0.1, 0.2])
        nxt = step(state, ControlInput(), np.zeros(3), hydro, 0.01)
        np.testing.assert_array_equal(nxt.eta, state.eta)
        np.testing.assert_array_equal(nxt.velocity, state.velocity)
        assert nxt.t == pytest.approx(0.01)

    def test_surge_reaches_analytic_steady_state(self, hydro):
        thrust = 10.0
        u_star = thrust / -hydro.damping[0]
        tau = hydro.mass_matrix[0, 0] / -hydro.damping[0]
        state = _simulate(VehicleState(), ControlInput(thrust=thrust), np.zeros(3), hydro, 0.01, 10.0 * tau)
        assert state.v1[0] == pytest.approx(u_star, rel=0.01)
        assert abs(state.v1[1]) < 1e-9

    def test_current_advects_a_resting_vehicle(self, hydro):
        state = _simulate(VehicleState(), ControlInput(), [0.25, 0.0, 0.0], hydro, 0.01, 10.0)
        np.testing.assert_allclose(state.eta1, [2.5, 0.0, 0.0], atol=1e-9)

    def test_dt_outside_range_rejected(self, hydro):
        with pytest.raises(ValueError):
            step(VehicleState(), ControlInput(), np.zeros(3), hydro, 0.5)

    def test_controls_are_clamped(self, hydro):
        control = ControlInput(thrust=1e6, fin_moments=(0.0, -1e6, 1e6)).clamped(hydro)
        assert control.thrust == hydro.thrust_max
        assert control.fin_moments[1] == -hydro.fin_moment_max
        assert control.fin_moments[2] == hydro.fin_moment_max


class TestInvariants:
    def test_coriolis_does_no_work(self, hydro, rng):
        for _ in range(50):
            v = rng.normal(0.0, 1.0, 6)
            c = coriolis_matrix(hydro.mass_matrix, v)
            assert abs(v @ c @ v) < 1e-9

    def test_undamped_energy_is_conserved(self, hydro):
        params = hydro.without_damping()
        state = VehicleState(v1=[0.8, 0.2, 0.0], v2=[0.0, 0.0, 0.3])
        e0 = kinetic_energy(state.velocity, params)
        state = _simulate(state, ControlInput(), np.zeros(3), params, 0.01, 100.0)
        assert abs(kinetic_energy(state.velocity, params) - e0) / e0 < 1e-6

    def test_damped_energy_is_non_increasing(self, hydro, rng):
        for _ in range(100):
            state = VehicleState(v1=rng.uniform(-1.0, 1.0, 3), v2=rng.uniform(-0.3, 0.3, 3))
            energy = kinetic_energy(state.velocity, hydro)
            for _ in range(100):
                state = step(state, ControlInput(), np.zeros(3), hydro, 0.01)
                nxt = kinetic_energy(state.velocity, hydro)
                assert nxt <= energy + 1e-12
                energy = nxt

    def test_rk4_fourth_order(self, hydro):
        control = ControlInput(thrust=10.0, fin_moments=(0.0, 0.0, 1.0))

        def endpoint(dt):
            return _simulate(VehicleState(), control, np.zeros(3), hydro, dt, 60.0).eta1

        coarse, mid, fine = endpoint(0.05), endpoint(0.025), endpoint(0.0125)
        ratio = np.linalg.norm(coarse - mid) / np.linalg.norm(mid - fine)
        assert ratio >= 12.0


class TestHydroFile:
    def test_shipped_file_loads(self, hydro):
        assert hydro.length == 1.5
        assert np.all(np.linalg.eigvalsh(hydro.mass_matrix) > 0.0)

    def test_positive_damping_rejected(self, tmp_path):
        path = tmp_path / "bad.json"
        path.write_text(HydroParamsFile(damping=[-8.0, -100.0, -100.0, -1.0, -20.0, -20.0]).model_dump_json())
        HydroParamsFile.load(path)
        path.write_text(path.read_text().replace("-8.0", "8.0"))
        with pytest.raises(ConfigError):
            HydroParamsFile.load(path)

    def test_unknown_keys_rejected(self, tmp_path):
        path = tmp_path / "extra.json"
        path.write_text('{"schema_version": 1, "mass": 30.0, "fins": 4}')
        with pytest.raises(ConfigError):
            HydroParamsFile.load(path)
