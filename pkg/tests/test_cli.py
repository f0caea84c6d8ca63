import json

import pandas as pd
import pytest

from src import cli
from src.cli import RunConfig, build_parser, config_from_args, main, run
from src.constants import Columns, Ir01Convention, ScenarioKind
from src.errors import ConfigError
from src.pde_solver import CrossCheck


@pytest.fixture
def portfolio_file(tmp_path):
    path = tmp_path / "book.json"
    path.write_text(json.dumps({
        "trades": [
            {"id": "T1", "counterpartyId": "C1", "notional": 1e6, "fixedRate": "par", "maturityYears": 5},
            {"id": "T2", "counterpartyId": "C2", "notional": 1e6, "fixedRate": 0.025,
             "maturityYears": 3, "direction": "receiver"},
        ],
        "counterparties": [{"id": "C1", "rating": "BB"}, {"id": "C2", "rating": "A"}],
    }), encoding="utf-8")
    return path


def fast(*args):
    return list(args) + ["--paths", "300", "--threads", "2", "--grid-months", "3"]


class TestParser:
    def test_scenario_defaults(self):
        config = config_from_args(build_parser().parse_args(["scenario"]))
        assert config.scenario is ScenarioKind.NAKED
        assert config.phis == (0.0, 1.0)
        assert config.adjustments
        assert config.ir01_convention is Ir01Convention.COST

    def test_flags(self):
        args = build_parser().parse_args([
            "scenario", "--scenario", "ir01Flat", "--phi", "0.5", "--no-adjustments",
            "--ir01-convention", "economic", "--no-cem-floor", "--spread-is-lambda",
        ])
        config = config_from_args(args)
        assert config.scenario is ScenarioKind.IR01_FLAT
        assert config.phis == (0.5,)
        assert not config.adjustments and not config.cem_floor and config.spread_is_lambda
        assert config.ir01_convention is Ir01Convention.ECONOMIC
        assert config.capital_config(0.5).cem_floor is False

    def test_price_needs_portfolio(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["price"])

    def test_bad_phi_list(self):
        with pytest.raises(SystemExit):
            build_parser().parse_args(["scenario", "--phi", "zero,one"])


class TestValidation:
    @pytest.mark.parametrize("changes", [
        {"phis": (0.0, 1.5)},
        {"phis": ()},
        {"n_paths": 500},
        {"threads": 0},
        {"gamma_k": -0.1},
        {"lgd": 0.0},
    ])
    def test_rejects(self, changes):
        with pytest.raises(ConfigError):
            RunConfig(command="scenario", **changes).validate()

    def test_missing_file_names_path(self, tmp_path, capsys):
        missing = tmp_path / "nowhere.json"
        assert main(["price", "--portfolio", str(missing)]) == 2
        assert str(missing) in capsys.readouterr().err

    def test_phi_out_of_range_exit_code(self, capsys):
        assert main(["scenario", "--phi", "0,2"]) == 2
        assert "phi" in capsys.readouterr().err

    def test_too_few_paths_for_tables(self, capsys):
        assert main(["scenario", "--paths", "999"]) == 2

    def test_unknown_rating_exit_code(self, portfolio_file, tmp_path):
        bad = tmp_path / "bad.json"
        document = json.loads(portfolio_file.read_text(encoding="utf-8"))
        document["counterparties"][0]["rating"] = "D"
        bad.write_text(json.dumps(document), encoding="utf-8")
        assert main(fast("price", "--portfolio", str(bad))) == 2


class TestCommands:
    def test_price_output_is_reproducible(self, portfolio_file, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(fast("price", "--portfolio", str(portfolio_file), "--output", str(first))) == 0
        args = ["price", "--portfolio", str(portfolio_file), "--output", str(second),
                "--paths", "300", "--threads", "1", "--grid-months", "3"]
        assert main(args) == 0
        assert first.read_bytes() == second.read_bytes()

    def test_price_table(self, portfolio_file, tmp_path):
        out, profiles = tmp_path / "price.csv", tmp_path / "profiles"
        code = main(fast("price", "--portfolio", str(portfolio_file), "--output", str(out),
                         "--profiles", str(profiles), "--phi", "0,1"))
        assert code == 0
        frame = pd.read_csv(out)
        assert list(frame.columns) == Columns.PRICE
        assert frame[Columns.NETTING_SET].tolist() == ["C1", "C2", "TOTAL"] * 2
        assert sorted(p.name for p in profiles.iterdir()) == ["profile_C1.csv", "profile_C2.csv"]

    def test_price_to_stdout(self, portfolio_file, capsys):
        assert main(fast("price", "--portfolio", str(portfolio_file), "--phi", "1")) == 0
        lines = capsys.readouterr().out.splitlines()
        assert lines[0] == ",".join(Columns.PRICE)
        assert len(lines) == 4

    def test_capital_table(self, portfolio_file, tmp_path):
        out, xlsx = tmp_path / "capital.csv", tmp_path / "capital.xlsx"
        code = main(fast("capital", "--portfolio", str(portfolio_file), "--time", "1.0",
                         "--output", str(out), "--xlsx", str(xlsx)))
        assert code == 0
        frame = pd.read_csv(out)
        assert frame["netting_set"].tolist() == ["C1", "C2", "TOTAL"]
        assert xlsx.exists()

    def test_sample_workbook_can_be_priced(self, tmp_path):
        workbook, out = tmp_path / "book.xlsx", tmp_path / "sample.csv"
        assert main(["sample", str(workbook), "--output", str(out)]) == 0
        trades = pd.read_csv(out)
        assert trades["id"].tolist() == ["T1", "T2", "H1"]
        assert trades["fixedRate_pct"][0] == pytest.approx(2.7, abs=1e-9)
        priced = tmp_path / "p.csv"
        assert main(fast("price", "--portfolio", str(workbook), "--phi", "0", "--output", str(priced))) == 0
        assert pd.read_csv(priced)[Columns.NETTING_SET].tolist() == ["C-AAA", "C-BB", "dealer", "TOTAL"]

    def test_sample_needs_xlsx_path(self, tmp_path, capsys):
        assert main(["sample", str(tmp_path / "book.csv")]) == 2
        assert ".xlsx" in capsys.readouterr().err

    def test_pde_disagreement_exit_code(self, monkeypatch, tmp_path):
        monkeypatch.setattr(cli, "cross_check_call", lambda *a, **k: CrossCheck(pde=0.0, quadrature=1.0, stderr=0.0))
        out = tmp_path / "pde.csv"
        assert main(["pde-check", "--phi", "0", "--output", str(out)]) == 3
        assert pd.read_csv(out)["passed"].tolist() == [False]

    def test_run_reports_numerical_errors(self, monkeypatch):
        def failing(config):
            raise cli.NumericalError("scenarios", "no root")

        monkeypatch.setitem(cli.RUNNERS, "scenario", failing)
        assert run(RunConfig(command="scenario", n_paths=1000)) == 3

    @pytest.mark.slow
    def test_pde_check_passes(self, tmp_path):
        out = tmp_path / "pde.csv"
        code = main(["pde-check", "--phi", "0,1", "--grid", "200", "--paths", "5000", "--output", str(out)])
        assert code == 0
        assert pd.read_csv(out)["passed"].all()

    @pytest.mark.slow
    def test_scenario_table_has_sixteen_rows(self, tmp_path):
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scenario", "--scenario", "naked", "--phi", "0,1", "--paths", "1000", "--threads", "2"]
        assert main(args + ["--output", str(first)]) == 0
        assert main(args + ["--output", str(second)]) == 0
        frame = pd.read_csv(first)
        assert len(frame) == 16
        assert list(frame.columns) == Columns.TABLE
        assert first.read_bytes() == second.read_bytes()
