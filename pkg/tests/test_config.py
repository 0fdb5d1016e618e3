import numpy as np
import pytest

import firefront as ff

FULL = """\
[grid]
nx = 9
ny = 9
lx = 1.0
ly = 1.0

[kernel]
type = constant 0.01

[theta]
field = constant 0.4

[omega]
x = ramp 0.1 0.0 0.02
y = constant -0.01

[beta]
constant = 0.05

[run]
initial = eigenmode 0.3
gamma = 1.5
horizon = 0.1
dt = 0.005
picard_tol = 1e-10
picard_maxit = 40
cadence = 2
out = results
"""

MINIMAL = """\
[grid]
nx = 5
ny = 7

[run]
initial = constant 0.0
"""


def test_full_config_happy_path():
    cfg = ff.parse_config(FULL)
    sc = cfg.scenario
    assert sc.grid == ff.GridSpec(9, 9, 1.0, 1.0)
    assert sc.gamma == 1.5
    assert sc.horizon == 0.1
    assert sc.dt == 0.005
    assert sc.picard_tol == 1e-10
    assert sc.picard_maxit == 40
    assert cfg.cadence == 2
    assert cfg.outdir == "results"
    assert cfg.command == "simulate"
    theta0 = sc.theta.at(0.0)
    assert np.all(theta0.values == 0.4)
    om = sc.omega.at(0.0)
    xx, _ = sc.grid.meshgrid()
    assert np.allclose(om.x, 0.1 * xx + 0.02)
    assert np.all(om.y == -0.01)
    assert sc.beta(0.7) == 0.05
    assert np.allclose(
        sc.g.values, ff.eigenmode(sc.grid, 0.3).values, atol=1e-15
    )


def test_minimal_config_defaults():
    cfg = ff.parse_config(MINIMAL)
    sc = cfg.scenario
    assert sc.grid.nx == 5 and sc.grid.ny == 7
    assert sc.grid.lx == 1.0 and sc.grid.ly == 1.0
    assert sc.kernel.l2_pairnorm == 0.0
    assert np.all(sc.theta.at(0.0).values == 0.0)
    assert np.all(sc.omega.at(0.0).x == 0.0)
    assert sc.beta.sup_norm == 0.0
    assert sc.gamma == 1.5
    assert sc.horizon == 0.25
    assert sc.dt == 0.005
    assert cfg.cadence == 1
    assert cfg.outdir == "out"
    assert cfg.chunk_length is None


def test_all_problems_reported_together():
    bad = """\
[grid]
nx = wat
ny = 9

[run]
initial = eigenmode 0.3
gamma = 2.5
typo = 1
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    msgs = err.value.problems
    assert any("line 2" in m and "nx" in m for m in msgs)
    # grid failed, so the run-section checks never contribute here
    assert len(msgs) == 1


def test_run_section_problems_collected():
    bad = """\
[grid]
nx = 9
ny = 9

[run]
initial = eigenmode 0.3
gamma = 2.5
dt = -0.1
typo = 1
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    msgs = err.value.problems
    assert any("typo" in m and "line 9" in m for m in msgs)
    assert len(msgs) == 1  # unknown keys stop parsing before the scenario


def test_scenario_level_problems_prefixed():
    bad = """\
[grid]
nx = 9
ny = 9

[run]
initial = eigenmode 0.3
gamma = 2.5
dt = -0.1
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    msgs = err.value.problems
    assert all(m.startswith("[run]:") for m in msgs)
    assert any("gamma" in m and "[1, 2]" in m for m in msgs)
    assert any("dt" in m for m in msgs)


def test_syntax_problems_with_line_numbers():
    bad = """\
[grit]
nx = 9

[grid]
nx = 9
ny = 9
nothing here
ny = 9

[run]
initial = constant 0.0
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    msgs = err.value.problems
    assert any("line 1" in m and "[grit]" in m for m in msgs)
    assert any("line 2" in m and "outside any known section" in m for m in msgs)
    assert any("line 7" in m and "key = value" in m for m in msgs)
    assert any("line 8" in m and "duplicate" in m for m in msgs)


def test_unknown_generator_and_bad_args():
    bad = """\
[grid]
nx = 5
ny = 5

[theta]
field = swirl 1.0

[run]
initial = bump 1.0 0.5 0.5 0.0
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    msgs = err.value.problems
    assert any("unknown generator 'swirl'" in m for m in msgs)
    assert any("bump width must be positive" in m for m in msgs)


def test_table_generator_needs_exact_count():
    bad = """\
[grid]
nx = 3
ny = 3

[run]
initial = table 0 0 0 0 1
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(bad)
    assert any("table needs 9 values" in m for m in err.value.problems)


def test_table_generator_round_trip_values():
    vals = [0.0] * 9
    vals[4] = 0.25
    text = MINIMAL.replace("nx = 5", "nx = 3").replace("ny = 7", "ny = 3")
    text = text.replace(
        "initial = constant 0.0",
        "initial = table " + " ".join(str(v) for v in vals),
    )
    cfg = ff.parse_config(text)
    assert cfg.scenario.g.values[1, 1] == 0.25


def test_stencil_kernel_parsing():
    text = """\
[grid]
nx = 9
ny = 9

[kernel]
type = stencil
window = 0.0 0.01 0.0 ; 0.01 0.02 0.01 ; 0.0 0.01 0.0

[run]
initial = constant 0.0
"""
    cfg = ff.parse_config(text)
    k = cfg.scenario.kernel
    assert k.variant == "stencil"
    assert k.window.shape == (3, 3)
    assert k.window[1, 1] == 0.02


def test_kernel_key_mismatch_reported():
    missing_window = """\
[grid]
nx = 5
ny = 5

[kernel]
type = stencil

[run]
initial = constant 0.0
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(missing_window)
    assert any("needs a window key" in m for m in err.value.problems)

    orphan_window = missing_window.replace(
        "type = stencil", "window = 0.1 0.2 0.1"
    )
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(orphan_window)
    assert any("window given without type" in m for m in err.value.problems)


def test_beta_table_rules():
    mixed = """\
[grid]
nx = 5
ny = 5

[beta]
constant = 0.1
breakpoints = 0 1

[run]
initial = constant 0.0
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(mixed)
    assert any("cannot mix constant" in m for m in err.value.problems)

    half = mixed.replace("constant = 0.1\n", "")
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(half)
    assert any(
        "both breakpoints and values" in m for m in err.value.problems
    )

    table = half.replace(
        "breakpoints = 0 1", "breakpoints = 0.0 0.5 1.0\nvalues = 0.0 0.2 0.1"
    )
    cfg = ff.parse_config(table)
    assert cfg.scenario.beta(0.25) == pytest.approx(0.1)
    assert cfg.scenario.beta.sup_norm == 0.2


def test_initial_ring_clamped():
    text = """\
[grid]
nx = 9
ny = 9

[run]
initial = bump 1.0 0.5 0.5 0.2
"""
    sc = ff.parse_config(text).scenario
    assert ff.boundary_max_abs(sc.g) == 0.0
    assert sc.g.values[4, 4] == pytest.approx(1.0)


def test_field_from_file(tmp_path):
    grid = ff.GridSpec(5, 5, 1.0, 1.0)
    vals = np.zeros(grid.shape)
    vals[2, 2] = 0.7
    lines = ["x,y,u"]
    xs, ys = grid.xs(), grid.ys()
    for i in range(5):
        for j in range(5):
            lines.append(f"{xs[i]},{ys[j]},{vals[i, j]}")
    (tmp_path / "init.csv").write_text("\n".join(lines) + "\n")
    text = """\
[grid]
nx = 5
ny = 5

[run]
initial = file init.csv
"""
    cfg = ff.parse_config(text, base_dir=str(tmp_path))
    assert cfg.scenario.g.values[2, 2] == 0.7
    assert cfg.sources["initial"] == ("file", "init.csv")


def test_field_file_wrong_size(tmp_path):
    (tmp_path / "short.csv").write_text("x,y,u\n0,0,1\n")
    text = """\
[grid]
nx = 5
ny = 5

[run]
initial = file short.csv
"""
    with pytest.raises(ff.ConfigError) as err:
        ff.parse_config(text, base_dir=str(tmp_path))
    assert any("expected 25" in m for m in err.value.problems)


def test_read_field_csv_direct(tmp_path):
    grid = ff.GridSpec(3, 3, 1.0, 1.0)
    rows = "\n".join(f"0,0,{float(k)}" for k in range(9))
    (tmp_path / "f.csv").write_text("x,y,u\n" + rows + "\n")
    arr = ff.read_field_csv(tmp_path / "f.csv", grid)
    assert arr.shape == (3, 3)
    assert arr[0, 0] == 0.0 and arr[2, 2] == 8.0


def test_serialize_round_trip():
    cfg = ff.parse_config(FULL)
    text = ff.serialize_config(cfg)
    again = ff.parse_config(text)
    assert again == cfg
    assert ff.serialize_config(again) == text


def test_serialize_round_trip_awkward_floats():
    text = FULL.replace("gamma = 1.5", "gamma = 1.1").replace(
        "dt = 0.005", "dt = 0.0033333333333333335"
    )
    cfg = ff.parse_config(text)
    again = ff.parse_config(ff.serialize_config(cfg))
    assert again.scenario.gamma == cfg.scenario.gamma
    assert again.scenario.dt == cfg.scenario.dt


def test_serialize_round_trip_stencil_and_table():
    text = """\
[grid]
nx = 7
ny = 7
lx = 1.2
ly = 0.8

[kernel]
type = stencil
window = 0.0 0.01 0.0 ; 0.01 0.02 0.01 ; 0.0 0.01 0.0

[beta]
breakpoints = 0.0 0.5 1.0
values = 0.0 0.2 0.1

[run]
initial = bump 0.6 0.5 0.4 0.15
chunk_length = 0.05
"""
    cfg = ff.parse_config(text, command="global")
    again = ff.parse_config(ff.serialize_config(cfg), command="global")
    assert again == cfg
    assert again.chunk_length == 0.05


def test_serialize_needs_sources():
    cfg = ff.RunConfig(command="verify", scenario=None, outdir="out", cadence=1)
    with pytest.raises(ff.ConfigError):
        ff.serialize_config(cfg)


def test_run_config_validation():
    with pytest.raises(ff.ConfigError) as err:
        ff.RunConfig(command="launch", scenario=None, outdir="out", cadence=0)
    msgs = err.value.problems
    assert any("unknown subcommand" in m for m in msgs)
    assert any("cadence" in m for m in msgs)
    with pytest.raises(ff.ConfigError):
        ff.RunConfig(command="simulate", scenario=None, outdir="out", cadence=1)
