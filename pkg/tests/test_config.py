import logging

import pytest
from pydantic import ValidationError

import lab
from lsepso.benchmarks import get_benchmark
from lsepso.catalog import default_oracle_parameters
from lsepso.config import Settings, apply_settings, load_settings, settings
from lsepso.exceptions import ConfigurationError, UnknownNameError
from lsepso.logger import setup_logger
from lsepso.schemas import (
    Algorithm,
    ExperimentSpec,
    FunctionId,
    LocalSearchConfig,
    LocalSearchVariant,
    SwarmConfig,
)


def test_defaults():
    cfg = Settings()
    assert cfg.W == 0.7298
    assert cfg.C1 == cfg.C2 == 1.49618
    assert cfg.N_NEIGHBORS == 3
    assert cfg.C1_LS == 0.5
    assert cfg.LS_VARIANT == "prose"
    assert cfg.RUNS == 10


def test_config_file_overrides_defaults(tmp_path):
    path = tmp_path / "lab.conf"
    path.write_text("W=0.5\nRUNS=3\nLS_VARIANT=pseudocode\n")
    cfg = load_settings(path)
    assert cfg.W == 0.5
    assert cfg.RUNS == 3
    assert cfg.LS_VARIANT == "pseudocode"
    assert cfg.C1 == 1.49618


def test_environment_is_ignored(monkeypatch):
    monkeypatch.setenv("RUNS", "99")
    assert load_settings().RUNS == 10


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigurationError):
        load_settings(tmp_path / "absent.conf")


def test_cli_flags_win_over_config_file(tmp_path):
    path = tmp_path / "lab.conf"
    path.write_text("RUNS=3\nBASE_SEED=7\nN_NEIGHBORS=2\nC1_LS=0.7\n")
    cfg = load_settings(path)
    parser = lab.build_parser()
    base = ["run", "--function", "f1", "--algorithm", "lsepso", "--particles", "30", "--iterations", "60"]

    spec = lab.spec_from_args(parser.parse_args(base + ["--runs", "5"]), cfg)
    assert spec.runs == 5
    assert spec.base_seed == 7
    assert spec.n_neighbors == 2
    assert spec.c1_ls == 0.7
    assert spec.function_id == FunctionId.F1
    assert spec.algorithm == Algorithm.LSEPSO

    spec = lab.spec_from_args(parser.parse_args(base + ["--ls-variant", "pseudocode", "--no-local-search", "--c1-ls", "0.25"]), cfg)
    assert spec.runs == 3
    assert spec.ls_variant == LocalSearchVariant.PSEUDOCODE
    assert not spec.ls_enabled
    assert spec.swarm_config(0).local_search_config().c1_ls == 0.25


def test_denominator_flag():
    assert lab.parse_denominator("reference") == "reference"
    assert lab.parse_denominator("201") == 201


def test_unknown_algorithm_lists_valid_names():
    with pytest.raises(UnknownNameError) as exc:
        lab.parse_algorithm("GAPSO")
    assert exc.value.valid == ["EPSO", "FERPSO", "LSEPSO", "PSO"]


@pytest.mark.parametrize("argv", [
    ["run", "--function", "f1", "--algorithm", "GAPSO", "--particles", "10", "--iterations", "5"],
    ["run", "--function", "f9", "--algorithm", "PSO", "--particles", "10", "--iterations", "5"],
    ["run", "--function", "f1", "--algorithm", "LSEPSO", "--particles", "3", "--iterations", "5"],
])
def test_cli_rejects_bad_runs(argv):
    assert lab.main(argv) == 2


def test_cli_missing_config_file(tmp_path):
    assert lab.main(["--config", str(tmp_path / "absent.conf"), "report", str(tmp_path)]) == 2


def test_cli_run_reports_result(tmp_path, mocker, capsys, f1_catalog):
    mocker.patch("lsepso.harness.load_or_build_catalog", return_value=f1_catalog)
    argv = [
        "run", "--function", "f1", "--algorithm", "EPSO", "--particles", "10",
        "--iterations", "3", "--runs", "2", "--out", str(tmp_path),
    ]
    assert lab.main(argv) == 0
    assert "ANOF" in capsys.readouterr().out
    assert (tmp_path / "F1_SixHumpCamel_EPSO_p10_i3" / "summary.json").is_file()


def test_spec_rejects_bad_denominator():
    with pytest.raises(ValidationError):
        ExperimentSpec(
            function_id=FunctionId.F1, algorithm=Algorithm.PSO,
            population=10, iterations=5, denominator_override=0,
        )


def test_setup_logger_is_idempotent():
    logger = setup_logger("lsepso.test_logger", "debug")
    setup_logger("lsepso.test_logger")
    assert len(logger.handlers) == 1
    assert logger.level == logging.INFO


def test_apply_settings_reaches_library_modules(tmp_path):
    path = tmp_path / "lab.conf"
    path.write_text("GRID_DIVISIONS=1000\n")
    try:
        apply_settings(load_settings(path))
        assert settings.GRID_DIVISIONS == 1000
        step, _ = default_oracle_parameters(get_benchmark("f1"))
        assert step == pytest.approx(2.2 / 1000)
    finally:
        apply_settings(Settings())
    assert settings.GRID_DIVISIONS == 500


def test_model_defaults_follow_applied_settings(tmp_path):
    path = tmp_path / "lab.conf"
    path.write_text("RUNS=4\nN_NEIGHBORS=5\nC1_LS=0.8\nW=0.6\n")
    try:
        apply_settings(load_settings(path))
        spec = ExperimentSpec(
            function_id=FunctionId.F1, algorithm=Algorithm.LSEPSO, population=10, iterations=5,
        )
        assert spec.runs == 4
        assert spec.n_neighbors == 5
        assert spec.c1_ls == 0.8
        assert SwarmConfig(population=10, iterations=5).w == 0.6
        assert LocalSearchConfig().c1_ls == 0.8
    finally:
        apply_settings(Settings())
    assert ExperimentSpec(
        function_id=FunctionId.F1, algorithm=Algorithm.LSEPSO, population=10, iterations=5,
    ).runs == 10
