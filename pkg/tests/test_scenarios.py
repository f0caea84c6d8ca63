import pytest

from src.constants import Columns, Ir01Convention, ScenarioKind, SwapDirection
from src.errors import NumericalError
from src.regcap import CapitalConfig
from src.scenarios import (
    Scenario,
    ScenarioRow,
    ScenarioRunner,
    rows_to_frame,
    run_scenario,
    table_columns,
)
from src.services.pricing_service import SimulationSettings
from src.services.rating_service import counterparty_for
from src.xva_engine import XvaBreakdown

SETTINGS = SimulationSettings(n_paths=1024, max_workers=2)
PAYER = SwapDirection.PAYER


@pytest.fixture(scope="module")
def naked_runner(environment, rating_table):
    return ScenarioRunner(Scenario(ScenarioKind.NAKED), environment, rating_table, SETTINGS)


@pytest.fixture(scope="module")
def client_bb(rating_table):
    return counterparty_for(rating_table, "BB", "client")


class TestScenario:
    def test_accepts_kind_strings(self):
        scenario = Scenario("ir01Flat", convention="economic")
        assert scenario.kind is ScenarioKind.IR01_FLAT
        assert scenario.convention is Ir01Convention.ECONOMIC

    def test_rejects_phi_outside_unit_interval(self):
        with pytest.raises(ValueError):
            Scenario(ScenarioKind.NAKED, phis=(0.0, 1.2))

    def test_table_columns(self):
        assert table_columns(ScenarioKind.NAKED) == Columns.TABLE
        assert table_columns(ScenarioKind.IR01_FLAT) == Columns.TABLE + Columns.HEDGE

    def test_hedge_change(self):
        row = ScenarioRow(
            ScenarioKind.IR01_FLAT, 0.0, PAYER, "A", XvaBreakdown(phi=0.0, notional=1.0), 0.0, 1.05
        )
        assert row.hedge_change_pct == pytest.approx(5.0)
        assert row.as_row()[Columns.HEDGE_CHANGE] == pytest.approx(5.0)
        assert row.as_row()[Columns.HEDGE_MULTIPLIER] == 1.05

    def test_naked_row_has_no_hedge_column(self):
        row = ScenarioRow(ScenarioKind.NAKED, 0.0, PAYER, "A", XvaBreakdown(phi=0.0, notional=1.0), 0.0)
        assert row.hedge_change_pct is None
        assert not set(Columns.HEDGE) & set(row.as_row())


class TestNaked:
    def test_costs_are_negative(self, naked_runner):
        row = naked_runner.row(PAYER, "BB", 0.0)
        assert row.breakdown.cva < 0.0
        assert row.breakdown.kva_prime_mr < 0.0
        assert row.breakdown.kva_prime < 0.0

    def test_cva_grows_with_credit_risk(self, naked_runner):
        cvas = [naked_runner.row(PAYER, rating, 0.0).breakdown.cva for rating in ("AAA", "A", "BB")]
        assert cvas[0] > cvas[1] > cvas[2]

    def test_funding_capital_reduces_kva(self, naked_runner):
        unfunded = naked_runner.row(PAYER, "A", 0.0).breakdown.kva_prime
        funded = naked_runner.row(PAYER, "A", 1.0).breakdown.kva_prime
        assert abs(funded) < abs(unfunded)

    def test_conventions_mirror_the_adjustment_part(self, naked_runner, client_bb):
        book = naked_runner._book(PAYER)
        config = CapitalConfig()
        cost = naked_runner.total_ir01(book, client_bb, config, 0.0)
        economic_runner = ScenarioRunner(
            Scenario(ScenarioKind.NAKED, convention=Ir01Convention.ECONOMIC),
            naked_runner.environment, naked_runner.ratings, SETTINGS,
        )
        economic = economic_runner.total_ir01(economic_runner._book(PAYER), client_bb, config, 0.0)
        assert economic - book.client_ir01 == pytest.approx(-(cost - book.client_ir01), rel=1e-9)

    def test_risk_free_ir01(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.NAKED, adjustments_enabled=False)
        runner = ScenarioRunner(scenario, environment, rating_table, SETTINGS)
        payer = runner.row(PAYER, "A", 0.0)
        receiver = runner.row(SwapDirection.RECEIVER, "A", 0.0)
        assert payer.ir01_bp == pytest.approx(9.508, rel=0.10)
        assert receiver.ir01_bp == pytest.approx(-payer.ir01_bp, rel=1e-9)
        assert payer.breakdown.total_prime == 0.0


class TestFullTable:
    RATINGS = ("AAA", "A", "BB", "CCC")

    @pytest.fixture(scope="class")
    def rows(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.NAKED)
        settings = SimulationSettings(n_paths=2048, max_workers=2)
        return {
            (row.phi, row.direction, row.rating): row
            for row in run_scenario(scenario, environment, rating_table, settings)
        }

    @pytest.mark.slow
    def test_every_row_signs(self, rows):
        assert len(rows) == 16
        for key, row in rows.items():
            b = row.breakdown
            assert b.cva < 0.0 < b.dva, key
            assert b.fca_prime < 0.0, key
            assert b.kva_prime_mr < 0.0 and b.kva_prime_ccr < 0.0 and b.kva_prime_cva < 0.0, key
            assert b.total_prime < 0.0, key
            assert row.ir01_bp * row.direction.sign > 0.0, key

    @pytest.mark.slow
    @pytest.mark.parametrize("phi", [0.0, 1.0])
    @pytest.mark.parametrize("direction", list(SwapDirection))
    def test_credit_costs_grow_from_aaa_to_ccc(self, rows, phi, direction):
        cva = [rows[phi, direction, rating].breakdown.cva for rating in self.RATINGS]
        kva_cva = [rows[phi, direction, rating].breakdown.kva_prime_cva for rating in self.RATINGS]
        assert all(a > b for a, b in zip(cva, cva[1:]))
        assert all(a > b for a, b in zip(kva_cva, kva_cva[1:]))

    @pytest.mark.slow
    def test_funding_capital_never_costs_more(self, rows):
        for direction in SwapDirection:
            for rating in self.RATINGS:
                funded = rows[1.0, direction, rating].breakdown.total_prime
                unfunded = rows[0.0, direction, rating].breakdown.total_prime
                assert funded >= unfunded, (direction, rating)

    @pytest.mark.slow
    def test_market_risk_kva(self, rows):
        for direction in SwapDirection:
            unfunded = rows[0.0, direction, "A"].breakdown.kva_prime_mr
            funded = rows[1.0, direction, "A"].breakdown.kva_prime_mr
            # flat default curve
            assert -320.0 <= unfunded <= -200.0
            assert 0.55 < funded / unfunded < 0.72


class TestBackToBack:
    @pytest.fixture(scope="class")
    def runner(self, environment, rating_table):
        return ScenarioRunner(Scenario(ScenarioKind.BACK_TO_BACK), environment, rating_table, SETTINGS)

    def test_market_risk_capital_vanishes(self, runner):
        row = runner.row(PAYER, "BB", 1.0)
        assert row.breakdown.kva_mr == 0.0
        assert row.breakdown.kva_prime_mr == 0.0
        assert row.hedge_multiplier == 1.0

    def test_collateralized_hedge_adds_no_credit_terms(self, runner, naked_runner):
        hedged = runner.row(PAYER, "BB", 0.0).breakdown
        naked = naked_runner.row(PAYER, "BB", 0.0).breakdown
        assert hedged.cva == pytest.approx(naked.cva, rel=1e-12)
        assert hedged.fca_prime == pytest.approx(naked.fca_prime, rel=1e-12)
        assert hedged.kva_prime_ccr == pytest.approx(naked.kva_prime_ccr, rel=1e-12)

    def test_without_adjustments_the_book_is_flat(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.BACK_TO_BACK, adjustments_enabled=False)
        row = ScenarioRunner(scenario, environment, rating_table, SETTINGS).row(PAYER, "CCC", 0.0)
        assert all(value == 0.0 for value in row.breakdown.as_row().values())
        assert row.ir01_bp == pytest.approx(0.0, abs=1e-9)


class TestIr01Flat:
    def test_without_adjustments_the_hedge_is_unchanged(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.IR01_FLAT, adjustments_enabled=False)
        row = ScenarioRunner(scenario, environment, rating_table, SETTINGS).row(PAYER, "A", 0.0)
        assert row.hedge_multiplier == pytest.approx(1.0, rel=1e-9)
        assert row.hedge_change_pct == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.slow
    @pytest.mark.parametrize("convention", list(Ir01Convention))
    def test_total_ir01_is_zero(self, environment, rating_table, client_bb, convention):
        scenario = Scenario(ScenarioKind.IR01_FLAT, convention=convention)
        runner = ScenarioRunner(scenario, environment, rating_table, SETTINGS)
        row = runner.row(PAYER, "BB", 1.0)
        assert 0.1 < row.hedge_multiplier < 5.0
        assert row.ir01_bp == pytest.approx(0.0, abs=1e-6)
        residual = runner.total_ir01(runner._book(PAYER), client_bb, CapitalConfig(phi=1.0), row.hedge_multiplier)
        assert residual == pytest.approx(0.0, abs=1e-6 * scenario.notional)

    @pytest.mark.slow
    def test_hedge_grows_from_aaa_to_ccc(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.IR01_FLAT)
        rows = run_scenario(scenario, environment, rating_table, SimulationSettings(n_paths=2048, max_workers=2))
        assert scenario.convention is Ir01Convention.COST
        for phi in scenario.phis:
            for direction in scenario.directions:
                changes = [
                    row.hedge_change_pct for row in rows if row.phi == phi and row.direction is direction
                ]
                assert len(changes) == 4
                assert changes[0] > 0.0, (phi, direction)
                assert all(a < b for a, b in zip(changes, changes[1:])), (phi, direction)
        assert all(row.ir01_bp == pytest.approx(0.0, abs=1e-6) for row in rows)

    @pytest.mark.slow
    def test_unbracketed_root_raises(self, environment, rating_table, client_bb):
        runner = ScenarioRunner(Scenario(ScenarioKind.IR01_FLAT), environment, rating_table, SETTINGS)
        with pytest.raises(NumericalError):
            runner.solve_hedge_multiplier(runner._book(PAYER), client_bb, CapitalConfig(), brackets=((3.0, 5.0),))


class TestRun:
    def test_row_order_and_frame(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.NAKED, phis=(0.0, 1.0), ratings=("AAA", "BB"))
        rows = run_scenario(scenario, environment, rating_table, SETTINGS)
        keys = [(r.phi, r.direction, r.rating) for r in rows]
        assert keys == [
            (phi, direction, rating)
            for phi in (0.0, 1.0)
            for direction in (SwapDirection.PAYER, SwapDirection.RECEIVER)
            for rating in ("AAA", "BB")
        ]
        frame = rows_to_frame(rows, ScenarioKind.NAKED)
        assert list(frame.columns) == Columns.TABLE
        assert len(frame) == 8

    def test_reruns_are_identical(self, environment, rating_table):
        scenario = Scenario(ScenarioKind.NAKED, phis=(1.0,), ratings=("A",))
        first = rows_to_frame(run_scenario(scenario, environment, rating_table, SETTINGS), ScenarioKind.NAKED)
        second = rows_to_frame(run_scenario(scenario, environment, rating_table, SETTINGS), ScenarioKind.NAKED)
        assert first.equals(second)
