"""Smoke test for the jqdiscord extension module.

Build and install first:  maturin develop --release  (from crates/python)
"""

import math

import jqdiscord as jq


def close(a, b, tol):
    return abs(a - b) <= tol


def main():
    eff = jq.EffectiveParams.symmetric(1.0, 2.0)
    h = eff.hamiltonian()
    assert len(h) == 4 and all(len(row) == 4 for row in h)

    rho = jq.thermal_state(eff, 0.5)
    r = jq.quantum_discord(rho)
    assert 0.0 < r.discord <= r.mutual_information
    assert close(r.mutual_information, r.classical_correlation + r.discord, 1e-12)
    assert close(jq.concurrence(rho), r.concurrence, 1e-12)
    assert close(jq.discord_grid_oracle(rho, 181, 360), r.discord, 1e-4)

    assert close(jq.ground_state_discord_analytic(1.0, 50.0), 0.9988, 5e-4)
    assert jq.ground_state_discord_analytic(1.0, 0.0) == 0.0

    bell = [[0.5, 0, 0, 0.5], [0, 0, 0, 0], [0, 0, 0, 0], [0.5, 0, 0, 0.5]]
    bell = jq.DensityMatrix(bell)
    assert close(jq.quantum_discord(bell).discord, 1.0, 1e-9)
    assert close(jq.eof(bell), 1.0, 1e-12)
    assert close(jq.von_neumann_entropy(bell), 0.0, 1e-12)

    try:
        jq.DensityMatrix([[1, 0], [0, 1]])
    except ValueError:
        pass
    else:
        raise AssertionError("trace-2 matrix accepted")

    device = jq.DeviceParams(v_x1_v=7.5e-6, v_x2_v=7.5e-6)
    cp = jq.esd_temperature(device.effective(), t_max=0.2)
    assert cp.kind == "esd_temperature" and cp.bracket[1] - cp.bracket[0] <= 1e-6
    hot = jq.thermal_state(device.effective(), 2 * cp.location)
    assert jq.concurrence(hot) == 0.0 and jq.quantum_discord(hot).discord > 1e-4

    series = jq.figure("fig2a")
    label, columns, rows = series[0]
    assert columns == ["ratio_j_over_eps", "discord"] and len(rows) == 501
    assert math.isclose(rows[-1][1], 1.0, abs_tol=5e-3)

    print("smoke test passed: discord(eps=1, J=2, T=0.5) = %.6f, Tc(7.5uV) = %.4e K" % (r.discord, cp.location))


if __name__ == "__main__":
    main()
