import json
import signal
import subprocess
import sys
import time

import httpx
import pytest
from click.testing import CliRunner

from foodcal.cli import main

from conftest import FLAT_CATALOG, FLAT_REQUIREMENTS, free_port


@pytest.fixture()
def runner():
    return CliRunner()


def test_validate_catalog_default_ok(runner):
    from foodcal.catalog import default_catalog_path

    result = runner.invoke(main, ["validate-catalog", str(default_catalog_path())])
    assert result.exit_code == 0
    assert "ok: 72 items" in result.output


def test_validate_catalog_reports_violations(runner, tmp_path, default_catalog):
    from foodcal.catalog import Catalog, save_catalog

    path = tmp_path / "short.json"
    save_catalog(Catalog(items=default_catalog.items[:10]), path)
    result = runner.invoke(main, ["validate-catalog", str(path)])
    assert result.exit_code == 1
    assert "item count 10 != 72" in result.output


def test_validate_catalog_lenient_accepts_small(runner, tmp_path, default_catalog):
    from foodcal.catalog import Catalog, save_catalog

    path = tmp_path / "short.json"
    save_catalog(Catalog(items=default_catalog.items[:10]), path)
    result = runner.invoke(main, ["validate-catalog", str(path), "--lenient"])
    assert result.exit_code == 0


def test_gen_level_prints_deterministic_json(runner):
    args = ["gen-level", "--age", "33", "--seed", "42"]
    first = runner.invoke(main, args)
    second = runner.invoke(main, args)
    assert first.exit_code == 0
    assert first.output == second.output
    payload = json.loads(first.output)
    assert payload["age"] == 33 and len(payload["windows"]) == 6


def test_gen_level_writes_file(runner, tmp_path):
    out = tmp_path / "level.json"
    result = runner.invoke(main, ["gen-level", "--age", "50", "--seed", "7", "--out", str(out)])
    assert result.exit_code == 0
    assert json.loads(out.read_text())["age"] == 50


def test_gen_all_writes_96_files(runner, tmp_path):
    out = tmp_path / "levels"
    result = runner.invoke(main, ["gen-all", "--seed", "11", "--out", str(out)])
    assert result.exit_code == 0
    files = sorted(out.glob("level_*.json"))
    assert len(files) == 96
    first = json.loads(files[0].read_text())
    assert first["level"] == 1 and first["age"] == 3


def test_audit_small_sweep_passes(runner):
    result = runner.invoke(main, ["audit", "--seeds", "2"])
    assert result.exit_code == 0
    assert "0 failures" in result.output


def test_solve_reports_best_plan(runner, tmp_path):
    out = tmp_path / "level.json"
    assert runner.invoke(
        main, ["gen-level", "--age", "33", "--seed", "42", "--out", str(out)]
    ).exit_code == 0
    result = runner.invoke(main, ["solve", "--level-file", str(out), "--gender", "male"])
    assert result.exit_code == 0
    payload = json.loads(result.output)
    assert payload["deviation"] <= 20  # generated levels are winnable
    assert payload["projected_stars"] >= 1
    assert set(payload["plan"]) == {"breakfast", "lunch", "dinner"}


def test_study_report_prints_t_table(runner):
    result = runner.invoke(main, ["study-report"])
    assert result.exit_code == 0
    assert "t-value (two-tailed)" in result.output
    assert "degrees of freedom:   38" in result.output


def test_study_report_plots(runner, tmp_path):
    pytest.importorskip("matplotlib")
    plot_dir = tmp_path / "charts"
    result = runner.invoke(main, ["study-report", "--plot", str(plot_dir)])
    assert result.exit_code == 0
    assert len(list(plot_dir.glob("*.svg"))) == 5


def test_serve_subcommand_boots_real_server(tmp_path):
    port = free_port()
    proc = subprocess.Popen(
        [
            sys.executable, "-m", "foodcal.cli", "serve",
            "--port", str(port),
            "--catalog", str(FLAT_CATALOG),
            "--requirements", str(FLAT_REQUIREMENTS),
            "--data-dir", str(tmp_path / "data"),
            "--master-seed", "5",
        ],
        stdout=subprocess.PIPE, stderr=subprocess.STDOUT,
    )
    try:
        deadline = time.time() + 30
        meta = None
        while time.time() < deadline:
            try:
                meta = httpx.get(f"http://127.0.0.1:{port}/v1/meta", timeout=1.0).json()
                break
            except httpx.TransportError:
                if proc.poll() is not None:
                    raise AssertionError(proc.stdout.read().decode())
                time.sleep(0.1)
        assert meta is not None and meta["level_count"] == 96
    finally:
        proc.send_signal(signal.SIGINT)
        proc.wait(timeout=10)
