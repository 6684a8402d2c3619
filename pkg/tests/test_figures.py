import math

import pytest

from gaussfid.errors import DomainError
from gaussfid.figures import FIGURE_IDS, FigureSpec, format_row, sign_changes, sweep, to_csv


def test_spec_defaults_and_validation():
    spec = FigureSpec("fig1")
    assert (spec.start, spec.stop, spec.steps) == (1.0, 10.0, 181)
    with pytest.raises(DomainError):
        FigureSpec("fig2")
    with pytest.raises(DomainError):
        FigureSpec("fig1", steps=1)
    with pytest.raises(DomainError):
        FigureSpec("fig1", start=0.5)
    with pytest.raises(DomainError):
        FigureSpec("fig3a", start=0.0)
    with pytest.raises(DomainError):
        FigureSpec("fig5", start=1.0, stop=0.5)


def test_fig1_rows():
    rows = sweep(FigureSpec("fig1"))
    assert format_row(rows[0]) == "1,0.5,0.75"
    assert len(rows) == 181
    q = [r[1] for r in rows]
    assert all(b > a for a, b in zip(q, q[1:]))
    gap = {round(p, 9): abs(fq - fc) for p, fq, fc in rows}
    assert gap[10.0] < gap[2.0]
    (row,) = sweep(FigureSpec("fig1", start=1.02, stop=2.0, steps=2))[:1]
    assert row[1] == pytest.approx(0.570, abs=1e-3)


def test_fig3a_pure_pair_ordering():
    for _, fq, fc in sweep(FigureSpec("fig3a")):
        assert fc == pytest.approx(fq**2, rel=1e-9)
        assert fc <= fq


def test_fig3b_starts_at_identity_and_quantum_drops_faster():
    rows = sweep(FigureSpec("fig3b"))
    assert rows[0][1:] == pytest.approx((1.0, 1.0))
    assert rows[-1][1] < rows[-1][2]


def test_fig4_gap_smaller_than_fig3():
    gap3 = max(abs(q - c) for _, q, c in sweep(FigureSpec("fig3a")))
    gap4 = max(abs(q - c) for _, q, c in sweep(FigureSpec("fig4a")))
    assert gap4 < gap3


def test_fig5_single_crossing():
    rows = sweep(FigureSpec("fig5"))
    assert rows[0][2] > rows[0][1]
    assert rows[-1][2] < rows[-1][1]
    assert rows[-1][0] == pytest.approx(math.pi / 2)
    assert sign_changes([c - q for _, q, c in rows]) == 1


@pytest.mark.parametrize("fig", FIGURE_IDS)
def test_csv_is_deterministic(fig):
    spec = FigureSpec(fig, steps=7)
    text = to_csv(sweep(spec))
    assert text == to_csv(sweep(spec))
    lines = text.splitlines()
    assert lines[0] == "param,f_quantum,f_classical" and len(lines) == 8
    for line in lines[1:]:
        assert all(0.0 <= float(v) <= 1.0 for v in line.split(",")[1:])


def test_sign_changes():
    assert sign_changes([1, 0.5, -1, -2]) == 1
    assert sign_changes([1, -1, 1]) == 2
    assert sign_changes([1, 0, 1]) == 0
