import math

import pytest

from oment import (
    ConfigError,
    PhysicalParams,
    default_params,
    derive,
    drive_amplitude,
    inverse_thermal_occupation,
    load_config,
    thermal_occupation,
)
from oment.constants import HBAR, K_B


@pytest.fixture
def params():
    return default_params()


def test_default_table_values(params):
    two_pi = 2.0 * math.pi
    assert params.omega_m == pytest.approx(two_pi * 3.6e9, rel=1e-14)
    assert params.gamma_m == pytest.approx(two_pi * 35e3, rel=1e-14)
    assert params.g_m == pytest.approx(two_pi * 910e3, rel=1e-14)
    assert params.kappa == pytest.approx(two_pi * 529e6, rel=1e-14)
    assert params.power == 0.7e-3
    assert params.temperature == 0.270
    assert params.laser_wavelength == 1.55e-6
    assert params.beta == 0.0
    assert params.convention_eta_factor == 2.0


def test_quality_factor_computed_from_fields(params):
    assert params.q_factor == pytest.approx(3.6e9 / 35e3, rel=1e-14)
    assert params.q_factor == pytest.approx(1.0286e5, rel=1e-4)


def test_omega_laser(params):
    assert params.omega_laser == pytest.approx(2 * math.pi * 299792458.0 / 1.55e-6, rel=1e-14)


@pytest.mark.parametrize(
    "field,value",
    [
        ("omega_m", 0.0),
        ("omega_m", -1.0),
        ("gamma_m", 0.0),
        ("kappa", -2.0),
        ("power", -1e-3),
        ("temperature", -0.1),
        ("laser_wavelength", 0.0),
        ("beta", 1.0),
        ("beta", 1.5),
    ],
)
def test_validation_rejects_bad_fields(params, field, value):
    kwargs = {
        "omega_m": params.omega_m,
        "gamma_m": params.gamma_m,
        "g_m": params.g_m,
        "kappa": params.kappa,
        "power": params.power,
        "laser_wavelength": params.laser_wavelength,
        "temperature": params.temperature,
        "beta": params.beta,
    }
    kwargs[field] = value
    with pytest.raises(ValueError):
        PhysicalParams(**kwargs)


def test_thermal_occupation_zero_temperature(params):
    assert thermal_occupation(0.0, params.omega_m) == 0.0


def test_thermal_occupation_at_defaults(params):
    n = thermal_occupation(0.270, params.omega_m)
    # independent evaluation of the Bose factor
    expected = 1.0 / (math.exp(HBAR * params.omega_m / (K_B * 0.270)) - 1.0)
    assert n == pytest.approx(expected, rel=1e-12)
    assert n == pytest.approx(1.1157109535263916, rel=1e-12)


def test_thermal_occupation_98k(params):
    assert thermal_occupation(98.0, params.omega_m) == pytest.approx(566.719223398171, rel=1e-10)


def test_thermal_occupation_monotones(params):
    temps = [0.05, 0.1, 0.27, 1.0, 10.0, 98.0]
    values = [thermal_occupation(t, params.omega_m) for t in temps]
    assert all(b > a for a, b in zip(values, values[1:]))
    omegas = [0.5e10, 1e10, 2e10, 4e10]
    values = [thermal_occupation(0.27, om) for om in omegas]
    assert all(b < a for a, b in zip(values, values[1:]))


def test_thermal_occupation_classical_limit(params):
    # k_B T >> hbar*omega: agrees with kT/(hbar*omega) - 1/2 to < 1% once n > 50
    for t in (5.0, 50.0, 400.0):
        n = thermal_occupation(t, params.omega_m)
        if n > 50:
            classical = K_B * t / (HBAR * params.omega_m) - 0.5
            assert abs(n - classical) / n < 0.01


def test_inverse_thermal_occupation_round_trip(params):
    for n in (0.1, 1.0, 600.0, 2500.0):
        t = inverse_thermal_occupation(n, params.omega_m)
        assert thermal_occupation(t, params.omega_m) == pytest.approx(n, rel=1e-10)


def test_inverse_thermal_occupation_values(params):
    assert inverse_thermal_occupation(1.1157109535263916, params.omega_m) == pytest.approx(
        0.270, rel=1e-10
    )
    assert inverse_thermal_occupation(2500.0, params.omega_m) == pytest.approx(
        432.0182569556344, rel=1e-10
    )


def test_inverse_thermal_occupation_rejects_nonpositive(params):
    with pytest.raises(ValueError):
        inverse_thermal_occupation(0.0, params.omega_m)
    with pytest.raises(ValueError):
        inverse_thermal_occupation(-5.0, params.omega_m)


def test_drive_amplitude_undriven(params):
    assert drive_amplitude(0.0, params.kappa, params.omega_laser) == 0.0


def test_drive_amplitude_value(params):
    e0 = drive_amplitude(10e-3, params.kappa, params.omega_laser)
    assert e0 == pytest.approx(1.138754891274142e13, rel=1e-12)


def test_drive_amplitude_sqrt_scaling(params):
    for p0 in (1e-6, 0.7e-3, 10e-3):
        assert drive_amplitude(4 * p0, params.kappa, params.omega_laser) == pytest.approx(
            2 * drive_amplitude(p0, params.kappa, params.omega_laser), rel=1e-14
        )


def test_drive_amplitude_closed_form_identity(params):
    # 2 * E0^2 * hbar * omega_l = P0 * kappa under the implemented convention
    for p0 in (1e-5, 0.7e-3, 10e-3):
        e0 = drive_amplitude(p0, params.kappa, params.omega_laser)
        assert 2.0 * e0**2 * HBAR * params.omega_laser == pytest.approx(
            p0 * params.kappa, rel=1e-13
        )


def test_derive_bundles_everything(params):
    derived = derive(params)
    assert derived.n_th == thermal_occupation(params.temperature, params.omega_m)
    assert derived.e0 == drive_amplitude(params.power, params.kappa, params.omega_laser)
    assert derived.q_factor == params.q_factor
    assert derived.omega_laser == params.omega_laser


def test_load_config_round_trip(tmp_path):
    config = tmp_path / "params.cfg"
    config.write_text(
        "# comment line\n"
        "omega_m_hz = 3.6e9\n"
        "gamma_m_hz = 35e3\n"
        "g0_hz = 910e3\n"
        "kappa_hz = 529e6\n"
        "kappa_convention = two_pi\n"
        "power_w = 10e-3\n"
        "wavelength_m = 1.55e-6\n"
        "temperature_k = 0.270\n"
        "beta = 0.2\n"
        "eta_factor = 2\n"
    )
    params = load_config(config)
    assert params.omega_m == pytest.approx(2 * math.pi * 3.6e9, rel=1e-14)
    assert params.kappa == pytest.approx(2 * math.pi * 529e6, rel=1e-14)
    assert params.power == 10e-3
    assert params.beta == 0.2


def test_load_config_pi_convention(tmp_path):
    config = tmp_path / "params.cfg"
    config.write_text("kappa_hz = 529e6\nkappa_convention = pi\n")
    params = load_config(config)
    assert params.kappa == pytest.approx(math.pi * 529e6, rel=1e-14)


def test_load_config_partial_keeps_defaults(tmp_path):
    config = tmp_path / "params.cfg"
    config.write_text("power_w = 2e-3\n")
    params = load_config(config)
    defaults = default_params()
    assert params.power == 2e-3
    assert params.omega_m == defaults.omega_m
    assert params.temperature == defaults.temperature


@pytest.mark.parametrize(
    "content",
    [
        "unknown_key = 1\n",
        "omega_m_hz\n",
        "omega_m_hz = not_a_number\n",
        "kappa_convention = half_pi\nkappa_hz = 529e6\n",
        "beta = 1.5\n",
    ],
)
def test_load_config_rejects_bad_input(tmp_path, content):
    config = tmp_path / "params.cfg"
    config.write_text(content)
    with pytest.raises(ConfigError):
        load_config(config)


def test_load_config_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "absent.cfg")
