import numpy as np
import pytest

from cauchyfem import experiments
from cauchyfem.experiments import (CONVERGENCE_COLUMNS, SWEEP_COLUMNS,
                                   RunConfig, run_convergence, run_single,
                                   run_sweep)


def parse_csv(path):
    lines = path.read_text().splitlines()
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def cells_parse_cleanly(rows):
    for row in rows:
        for cell in row:
            if cell != "NA":
                assert np.isfinite(float(cell))


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig(degree=3)
    with pytest.raises(ValueError):
        RunConfig(levels=(8, 8))
    with pytest.raises(ValueError):
        RunConfig(gamma_v=-1.0)


def test_gamma_defaults_per_degree():
    assert RunConfig(degree=1).resolved_gamma_v == 0.01
    assert RunConfig(degree=2).resolved_gamma_v == 0.001
    assert RunConfig(degree=2, gamma_v=0.5).resolved_gamma_v == 0.5


def test_small_study_writes_expected_rows(tmp_path):
    out = tmp_path / "conv.csv"
    config = RunConfig(degree=1, levels=(2, 4), output_path=str(out))
    results = run_convergence(config)
    assert len(results) == 2
    header, rows = parse_csv(out)
    assert header == list(CONVERGENCE_COLUMNS)
    assert len(rows) == 2
    cells_parse_cleanly(rows)
    # first row has no rates, second row has both
    assert rows[0][-2] == rows[0][-1] == "NA"
    assert rows[1][-2] != "NA" and rows[1][-1] != "NA"


def test_reruns_are_byte_identical(tmp_path):
    out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
    run_convergence(RunConfig(degree=1, levels=(2, 4), jitter=0.1,
                              output_path=str(out1)))
    run_convergence(RunConfig(degree=1, levels=(2, 4), jitter=0.1,
                              output_path=str(out2)))
    assert out1.read_bytes() == out2.read_bytes()


def test_failed_level_marked_and_others_continue(tmp_path, monkeypatch):
    real = experiments.solve_level

    def flaky(config, n, **kw):
        if n == 4:
            raise RuntimeError("synthetic failure")
        return real(config, n, **kw)

    monkeypatch.setattr(experiments, "solve_level", flaky)
    out = tmp_path / "conv.csv"
    results = run_convergence(RunConfig(degree=1, levels=(2, 4, 8),
                                        output_path=str(out)))
    assert [r.report is None for r in results] == [False, True, False]
    assert "synthetic failure" in results[1].error
    header, rows = parse_csv(out)
    assert len(rows) == 3
    assert rows[1][2:] == ["NA"] * (len(header) - 2)
    cells_parse_cleanly(rows)


def test_single_gamma_sweep_matches_convergence_level(tmp_path):
    config = RunConfig(degree=1)
    sweep_rows = run_sweep(config, gammas=(0.01,), n=4)
    conv_rows = run_convergence(RunConfig(degree=1, levels=(4,)))
    a = sweep_rows[0]["report"]
    b = conv_rows[0].report
    assert a.global_l2 == pytest.approx(b.global_l2, rel=1e-12)
    assert a.eta == pytest.approx(b.eta, rel=1e-12)


def test_sweep_csv_schema(tmp_path):
    out = tmp_path / "sweep.csv"
    config = RunConfig(degree=1, output_path=str(out))
    results = run_sweep(config, gammas=(1e-3, 1e-1), n=2)
    assert all(r["report"] is not None for r in results)
    header, rows = parse_csv(out)
    assert header == list(SWEEP_COLUMNS)
    assert len(rows) == 2
    cells_parse_cleanly(rows)
    assert float(rows[0][0]) == pytest.approx(1e-3)


def test_run_single_emits_vtk(tmp_path):
    out = tmp_path / "fields.vtk"
    config = RunConfig(degree=1, emit_fields=True, output_path=str(out))
    solution, report = run_single(config, 4)
    assert report.eta > 0
    text = out.read_text().splitlines()
    names = [line.split()[1] for line in text if line.startswith("SCALARS")]
    assert names == ["u_h", "z_h", "error"]

    # dumped u_h values on the data boundary are exactly zero
    start = text.index("SCALARS u_h double 1") + 2
    mesh_points = 25
    u_vals = np.array([float(v) for v in text[start:start + mesh_points]])
    from cauchyfem.mesh import unit_square_mesh

    mesh = unit_square_mesh(4)
    on_data = (np.abs(mesh.vertices[:, 1]) < 1e-12) | \
              (np.abs(mesh.vertices[:, 0] - 1.0) < 1e-12)
    assert np.all(u_vals[on_data] == 0.0)
    assert np.any(u_vals != 0.0)
