import pytest

from lpvoronoi.analysis.convergence import (
    DEFAULT_P_LIST,
    SweepReport,
    SweepRow,
    check_containment,
    check_error_budget,
    check_monotone,
    containment_interval,
    converge_sweep,
    error_budget,
    mirror_p_list,
    two_sided_gaps,
)
from lpvoronoi.errors import InsufficientData, InvalidCell, InvalidExponent
from lpvoronoi.geometry.canonical import GREY_CELLS, Cell, z_p_inv
from lpvoronoi.reports import read_sweep_csv, write_sweep_csv

# Matches the LPV_FINAL_THRESHOLD default: at |p| = 0.01 the H2/H3 rows nearest
# the asymptote still sit about 0.164 from h(x).
FINAL_THRESHOLD = 0.25


@pytest.fixture(scope='module')
def default_sweep():
    return converge_sweep(2.0, max_workers=4)


def make_report(series, cell=Cell.S3, x=1.0, sign=1):
    rows = tuple(
        SweepRow(p=sign * p, x=x, cell=cell, target=-0.5, y_p=-0.5 - d, deviation=d)
        for p, d in series
    )
    return SweepReport(u=2.0, rows=rows, tol=1e-12, p_list=tuple(sign * p for p, _ in series))


def test_mirror_p_list():
    assert mirror_p_list([0.1, -0.05, 0.1]) == (0.1, -0.1, 0.05, -0.05)
    assert mirror_p_list(DEFAULT_P_LIST)[:4] == (0.2, -0.2, 0.1, -0.1)
    with pytest.raises(InvalidExponent):
        mirror_p_list([0.1, 0.0])


class TestSweep:
    def test_symmetric_point_has_zero_deviation(self):
        report = converge_sweep(2.0, {Cell.H3: [1.0]}, p_list=mirror_p_list([0.1, 0.05]))
        assert [row.p for row in report.rows] == [0.1, -0.1, 0.05, -0.05]
        for row in report.rows:
            assert row.ok
            assert row.target == -2.0
            assert row.deviation <= 1e-12

    def test_s3_deviation_shrinks(self):
        report = converge_sweep(2.0, {Cell.S3: [1.0]}, p_list=[0.1, 0.01])
        first, last = report.rows
        assert first.p == 0.1 and last.p == 0.01
        assert first.target == -0.5
        assert first.deviation == pytest.approx(0.0298, abs=1e-3)
        assert last.deviation < first.deviation

    def test_h2_sample_is_contained(self):
        report = converge_sweep(2.0, {Cell.H2: [-1.0]}, p_list=[-0.05])
        (row,) = report.rows
        assert 1 < row.y_p < 2 * -2.0 / -1.0 + 3

    def test_no_root_is_flagged(self):
        report = converge_sweep(2.0, {Cell.S1: [-2.01]}, p_list=[0.9, 0.05])
        flagged = [row for row in report.rows if row.p == 0.9]
        assert len(flagged) == 1
        assert flagged[0].flag == 'noroot'
        assert flagged[0].y_p is None and flagged[0].deviation is None
        assert report.noroot_rows() == flagged
        assert [row.p for row in report.ok_rows()] == [0.05]

    def test_rows_are_sorted(self):
        report = converge_sweep(2.0, {Cell.S3: [1.5, 0.5], Cell.H1: [-3.0]},
                                p_list=[-0.05, 0.2, 0.05], max_workers=3)
        keys = [(row.cell, row.x, row.p) for row in report.rows]
        assert keys == [
            (Cell.H1, -3.0, 0.2), (Cell.H1, -3.0, 0.05), (Cell.H1, -3.0, -0.05),
            (Cell.S3, 0.5, 0.2), (Cell.S3, 0.5, 0.05), (Cell.S3, 0.5, -0.05),
            (Cell.S3, 1.5, 0.2), (Cell.S3, 1.5, 0.05), (Cell.S3, 1.5, -0.05),
        ]

    def test_white_cell_rejected(self):
        with pytest.raises(InvalidCell):
            converge_sweep(2.0, {Cell.WHITE_UPPER_RIGHT_FAR: [3.0]}, p_list=[0.1])

    def test_sweep_csv(self, tmp_path):
        report = converge_sweep(2.0, {Cell.S1: [-2.01], Cell.S3: [1.0]}, p_list=[0.9, 0.1])
        path = tmp_path / 'report.csv'
        write_sweep_csv(report, path)
        lines = path.read_text().splitlines()
        assert lines[0] == 'p,x,cell,y_p,target,deviation,flag'
        assert len(lines) == 1 + len(report.rows)
        assert lines[1].startswith('0.90000000000000002,-2.0099999999999998,S1,,')
        assert lines[1].endswith(',noroot')

        frame = read_sweep_csv(path)
        s3 = frame[(frame['cell'] == 'S3') & (frame['p'] == 0.1)]
        expected = next(row for row in report.rows if row.cell is Cell.S3 and row.p == 0.1)
        assert s3['y_p'].iloc[0] == expected.y_p


class TestMonotone:
    def test_constant_zero_passes(self):
        (verdict,) = check_monotone(make_report([(0.1, 0.0), (0.05, 0.0), (0.01, 0.0)]))
        assert verdict.passed
        assert verdict.final_deviation == 0.0

    def test_decreasing_series_passes(self):
        (verdict,) = check_monotone(make_report([(0.1, 0.1), (0.05, 0.03), (0.01, 0.01)]))
        assert verdict.passed
        assert verdict.series == ((0.1, 0.1), (0.05, 0.03), (0.01, 0.01))

    def test_increase_fails(self):
        (verdict,) = check_monotone(make_report([(0.1, 0.01), (0.05, 0.03)]))
        assert not verdict.passed
        assert 'rose' in verdict.reason

    def test_final_threshold(self):
        report = make_report([(0.1, 0.4), (0.05, 0.3)], sign=-1)
        (verdict,) = check_monotone(report)
        assert not verdict.passed
        assert verdict.sign == -1
        assert 'above 0.25' in verdict.reason
        (verdict,) = check_monotone(report, final_threshold=0.35)
        assert verdict.passed

    def test_threshold_comes_from_environment(self, monkeypatch):
        monkeypatch.setenv('LPV_FINAL_THRESHOLD', '0.05')
        (verdict,) = check_monotone(make_report([(0.1, 0.3), (0.05, 0.2)]))
        assert not verdict.passed

    def test_single_exponent_is_insufficient(self):
        with pytest.raises(InsufficientData):
            check_monotone(make_report([(0.1, 0.01)]))


class TestBudget:
    def test_unit_abscissa_has_zero_budget(self):
        for x, cell in ((1.0, Cell.H3), (-1.0, Cell.H2)):
            budget = error_budget(x, 0.05, 2.0, cell)
            assert budget.f == 0
            assert budget.budget == 0

    @pytest.mark.parametrize('x,cell', [(-1.0, Cell.S2), (1.0, Cell.S3), (3.0, Cell.H4)])
    def test_middle_row_bound_is_half(self, x, cell):
        assert error_budget(x, 0.01, 2.0, cell).zbound == 0.5

    def test_unbounded_row_bound(self):
        budget = error_budget(-0.5, 0.01, 2.0, Cell.H2)
        assert budget.zbound == z_p_inv(2 * 4.0 + 3, 0.01)
        assert budget.budget == pytest.approx(budget.zbound * abs(budget.f))

    def test_budget_covers_h2_sample(self):
        report = converge_sweep(2.0, {Cell.H2: [-1.0, -0.5]}, p_list=[0.01, -0.01])
        assert check_error_budget(report) == []

    def test_white_cell_rejected(self):
        with pytest.raises(InvalidCell):
            error_budget(1.0, 0.01, 2.0, Cell.WHITE_UPPER_RIGHT_NEAR)

    def test_containment_intervals(self):
        assert containment_interval(Cell.H2, 2.0) == (1.0, 7.0)
        assert containment_interval(Cell.S1, 1.5) == (1.0, 6.0)
        assert containment_interval(Cell.H3, -2.0) == (-7.0, -1.0)
        assert containment_interval(Cell.S3, -0.5) is None


class TestDefaultSweep:
    def test_covers_every_cell(self, default_sweep):
        assert {row.cell for row in default_sweep.rows} == set(GREY_CELLS)
        assert len(default_sweep.rows) == 8 * 9 * 10

    def test_deviations_shrink_monotonically(self, default_sweep):
        verdicts = check_monotone(default_sweep, final_threshold=FINAL_THRESHOLD)
        failed = [v for v in verdicts if not v.passed]
        assert not failed, failed[:3]
        assert len(verdicts) == 8 * 9 * 2

    def test_default_threshold_accepts_default_sweep(self, default_sweep, monkeypatch):
        monkeypatch.delenv('LPV_FINAL_THRESHOLD', raising=False)
        verdicts = check_monotone(default_sweep)
        assert all(v.passed for v in verdicts), [v for v in verdicts if not v.passed][:3]
        asymptote_rows = [v for v in verdicts if v.cell in (Cell.H2, Cell.H3) and abs(v.x) < 0.3]
        assert asymptote_rows
        assert max(v.final_deviation for v in asymptote_rows) > 0.05

    def test_small_p_beats_larger_p(self, default_sweep):
        def worst(magnitude):
            return max(row.deviation for row in default_sweep.ok_rows() if abs(row.p) == magnitude)

        assert worst(0.01) < worst(0.1)
        assert worst(0.01) <= FINAL_THRESHOLD

    def test_error_budget_holds(self, default_sweep):
        assert check_error_budget(default_sweep) == []

    def test_containment_holds(self, default_sweep):
        assert check_containment(default_sweep) == []

    def test_signs_agree_in_the_limit(self, default_sweep):
        for (cell, x), series in two_sided_gaps(default_sweep).items():
            if len(series) < 2:
                continue
            first, last = series[0][1], series[-1][1]
            assert last <= first + 1e-12, (cell, x, series)
            assert series[-1][0] == 0.01
